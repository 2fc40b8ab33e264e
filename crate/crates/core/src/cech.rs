//! Sparse Čech cochains on the standard affine cover of projective space.
//!
//! The two-row page machinery reads off dimensions and bases, but some maps
//! genuinely cross the filtration between the section row and the top row —
//! most importantly the pairing induced on intermediate cohomology by a
//! self-dual morphism. Those are computed here by an explicit staircase: a
//! top-row class is represented by a Laurent cocycle on the full
//! intersection, pushed down the resolution one step at a time with a
//! deterministic contracting homotopy, and finally paired through the
//! evaluation map and the top-intersection trace.
//!
//! Cochains are stored sparsely. A key is `(I, s, g)`: the sorted index set
//! `I ⊆ {0..n}` of the cover intersection, the summand index `s` of the
//! split bundle, and the Laurent exponent `g ∈ ℤ^{n+1}` (with `g_i ≥ 0` for
//! every `i ∉ I`, and `Σ g = deg_s` the absolute degree of that summand).
//! The Čech differential and the contracting homotopy both preserve the
//! multidegree `g`, which keeps every computation finite.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{monomials, RingSpec};
use crate::polymat::PolyMatrix;

type Key = (Vec<usize>, usize, Vec<i64>);

#[derive(Debug, Clone)]
pub struct CechCochain<T> {
    pub ring: RingSpec,
    /// Absolute degree of each summand (bundle twist plus ambient twist).
    pub degrees: Vec<i64>,
    /// Čech degree: entries live on intersections of `row + 1` opens.
    pub row: usize,
    entries: BTreeMap<Key, T>,
}

impl<T: Scalar> CechCochain<T> {
    pub fn zero(ring: RingSpec, degrees: Vec<i64>, row: usize) -> Self {
        assert!(row <= ring.n, "Čech degree exceeds the cover");
        CechCochain {
            ring,
            degrees,
            row,
            entries: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Adds `c · x^g` on the intersection `I` in summand `s`.
    pub fn add_term(&mut self, idx: &[usize], s: usize, g: Vec<i64>, c: T) {
        if c.is_zero() {
            return;
        }
        let nv = self.ring.nvars();
        assert_eq!(idx.len(), self.row + 1, "index set size != row + 1");
        assert!(
            idx.windows(2).all(|w| w[0] < w[1]) && idx.iter().all(|&i| i < nv),
            "index set must be sorted, distinct, in range"
        );
        assert_eq!(g.len(), nv, "exponent arity mismatch");
        assert_eq!(
            g.iter().sum::<i64>(),
            self.degrees[s],
            "exponent degree mismatch in summand {s}"
        );
        assert!(
            (0..nv).all(|i| g[i] >= 0 || idx.contains(&i)),
            "negative exponent outside the intersection"
        );
        let key = (idx.to_vec(), s, g);
        match self.entries.remove(&key) {
            None => {
                self.entries.insert(key, c);
            }
            Some(old) => {
                let v = old + c;
                if !v.is_zero() {
                    self.entries.insert(key, v);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degrees, other.degrees);
        assert_eq!(self.row, other.row);
        let mut out = self.clone();
        for ((idx, s, g), c) in &other.entries {
            out.add_term(idx, *s, g.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = CechCochain::zero(self.ring, self.degrees.clone(), self.row);
        if c.is_zero() {
            return out;
        }
        for ((idx, s, g), v) in &self.entries {
            out.add_term(idx, *s, g.clone(), v.clone() * c.clone());
        }
        out
    }

    /// The Čech differential (alternating sum of restrictions).
    pub fn delta(&self) -> Self {
        let nv = self.ring.nvars();
        assert!(self.row + 1 < nv, "differential out of the top row");
        let mut out = CechCochain::zero(self.ring, self.degrees.clone(), self.row + 1);
        for ((idx, s, g), v) in &self.entries {
            for i in 0..nv {
                if idx.contains(&i) {
                    continue;
                }
                let mut bigger = idx.clone();
                let pos = bigger.partition_point(|&j| j < i);
                bigger.insert(pos, i);
                let sign = if pos % 2 == 0 { v.clone() } else { -v.clone() };
                out.add_term(&bigger, *s, g.clone(), sign);
            }
        }
        out
    }

    /// The contracting homotopy `h` with `δh + hδ = id`, applied one
    /// multidegree at a time through the cone apex `min{i : g_i ≥ 0}`.
    /// Errors if a term has no nonnegative exponent at all (a genuine
    /// top-row obstruction), which callers must rule out beforehand.
    pub fn homotopy(&self) -> Result<Self> {
        assert!(self.row > 0, "homotopy below the bottom row");
        let mut out = CechCochain::zero(self.ring, self.degrees.clone(), self.row - 1);
        for ((idx, s, g), v) in &self.entries {
            let apex = match g.iter().position(|&gi| gi >= 0) {
                Some(i) => i,
                None => {
                    return Err(Error::internal(format!(
                        "obstructed cochain: no nonnegative exponent in {g:?} (summand {s})"
                    )))
                }
            };
            let pos = match idx.iter().position(|&i| i == apex) {
                Some(p) => p,
                None => continue,
            };
            let mut smaller = idx.clone();
            smaller.remove(pos);
            let sign = if pos % 2 == 0 { v.clone() } else { -v.clone() };
            out.add_term(&smaller, *s, g.clone(), sign);
        }
        Ok(out)
    }

    /// Applies a polynomial matrix (a map of split bundles) to the cochain.
    /// The cochain's summands must match the matrix columns at a consistent
    /// ambient twist.
    pub fn mat_apply(&self, m: &PolyMatrix<T>) -> Self {
        assert_eq!(self.degrees.len(), m.cols(), "summand/column mismatch");
        let t = if m.cols() > 0 {
            let t = self.degrees[0] - m.col_twists[0];
            assert!(
                self.degrees
                    .iter()
                    .zip(&m.col_twists)
                    .all(|(d, c)| d - c == t),
                "inconsistent ambient twist across summands"
            );
            t
        } else {
            0
        };
        let degrees: Vec<i64> = m.row_twists.iter().map(|r| r + t).collect();
        let mut out = CechCochain::zero(self.ring, degrees, self.row);
        for ((idx, s, g), v) in &self.entries {
            for r in 0..m.rows() {
                let p = m.entry(r, *s);
                for (e, c) in p.terms() {
                    let ng: Vec<i64> = g.iter().zip(e).map(|(a, b)| a + *b as i64).collect();
                    out.add_term(idx, r, ng, c.clone() * v.clone());
                }
            }
        }
        out
    }

    /// The coefficient of the all-(−1) Laurent monomial on the ordered full
    /// intersection: the trace normalization of the top cohomology of
    /// O(−n−1). Requires a single summand of absolute degree −n−1 at the top
    /// Čech row.
    pub fn trace(&self) -> T {
        let nv = self.ring.nvars();
        assert_eq!(self.row + 1, nv, "trace needs a top-row cochain");
        assert_eq!(self.degrees.len(), 1, "trace needs a single summand");
        assert_eq!(self.degrees[0], -(self.ring.n as i64) - 1, "trace needs degree −n−1");
        let full: Vec<usize> = (0..nv).collect();
        let key = (full, 0usize, vec![-1i64; nv]);
        self.entries.get(&key).cloned().unwrap_or_else(T::zero)
    }
}

/// The top-intersection component of the alternating cup product of a
/// `k`-cochain and an `(n−k)`-cochain through the summand-wise evaluation
/// pairing, followed by `trace`. Summand `s` of `u` pairs with summand `s`
/// of `v`; the absolute degrees must sum to −n−1.
pub fn cup_trace<T: Scalar>(u: &CechCochain<T>, v: &CechCochain<T>) -> T {
    let nv = u.ring.nvars();
    assert_eq!(u.ring, v.ring, "cup over different rings");
    assert_eq!(u.row + v.row, nv - 1, "cup rows must total n");
    assert_eq!(u.degrees.len(), v.degrees.len(), "summand mismatch");
    assert!(
        u.degrees
            .iter()
            .zip(&v.degrees)
            .all(|(a, b)| a + b == -(u.ring.n as i64) - 1),
        "cup degrees must pair to −n−1"
    );
    let prefix: Vec<usize> = (0..=u.row).collect();
    let suffix: Vec<usize> = (u.row..nv).collect();
    let mut acc = T::zero();
    for ((idx_u, s, gu), cu) in &u.entries {
        if *idx_u != prefix {
            continue;
        }
        for ((idx_v, s2, gv), cv) in &v.entries {
            if s2 != s || *idx_v != suffix {
                continue;
            }
            if gu.iter().zip(gv).all(|(a, b)| a + b == -1) {
                acc = acc + cu.clone() * cv.clone();
            }
        }
    }
    acc
}

/// Represents a top-row cohomology class of `⊕ O(a_s + t)` as a Laurent
/// cocycle on the full intersection. Coordinates follow the dual-monomial
/// labeling: summand-major, then monomials of degree `−(a_s+t)−n−1` in the
/// canonical basis order; the label `e` becomes the exponent `−1−e`.
pub fn top_row_cocycle<T: Scalar>(
    ring: RingSpec,
    twists: &[i64],
    t: i64,
    coords: &[T],
) -> CechCochain<T> {
    let nv = ring.nvars();
    let degrees: Vec<i64> = twists.iter().map(|a| a + t).collect();
    let full: Vec<usize> = (0..nv).collect();
    let mut out = CechCochain::zero(ring, degrees, nv - 1);
    let mut pos = 0usize;
    for (s, a) in twists.iter().enumerate() {
        let d = -(a + t) - (ring.n as i64) - 1;
        for e in monomials(nv, d) {
            if !coords[pos].is_zero() {
                let g: Vec<i64> = e.iter().map(|&ei| -1 - ei as i64).collect();
                out.add_term(&full, s, g, coords[pos].clone());
            }
            pos += 1;
        }
    }
    assert_eq!(pos, coords.len(), "coordinate length mismatch");
    out
}

/// Descends a top-row class at homological index `k` of a split complex down
/// the staircase of the resolution double complex, returning the Čech
/// `(n−k)`-cochain on the index-0 term at ambient twist `t`. The coordinate
/// vector must be a cycle for the transposed top-row maps (the honest
/// top-row differentials); otherwise the first homotopy reports an
/// obstruction.
pub fn staircase_to_zero<T: Scalar>(
    l: &crate::complex::SplitComplex<T>,
    k: i64,
    t: i64,
    coords: &[T],
) -> Result<CechCochain<T>> {
    let ring = l.ring;
    assert!(k >= 0 && k <= l.max_index(), "index out of range");
    assert!(k as usize <= ring.n, "staircase deeper than the cover");
    let mut z = top_row_cocycle(ring, &l.term(k), t, coords);
    for j in (1..=k).rev() {
        let eta = z.mat_apply(&l.diff(j));
        z = eta.homotopy().map_err(|e| {
            Error::internal(format!(
                "staircase obstructed at index {}: {}",
                j - 1,
                e.message
            ))
        })?;
    }
    Ok(z)
}
