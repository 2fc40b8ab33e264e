//! Linear minimization of split complexes: splitting off trivial summands
//! O(t) →(unit) O(t) until no differential entry is an invertible scalar.
//!
//! Each strip is a change of basis followed by dropping the matched pair, so
//! the result is homotopy equivalent to the input; the equivalence data
//! (projection, inclusion, and the homotopy witnessing inclusion∘projection ≃
//! identity) is accumulated and returned.

use std::collections::BTreeMap;

use crate::complex::{ChainMap, Homotopy, SplitComplex};
use crate::field::Scalar;
use crate::poly::HomogPoly;
use crate::polymat::PolyMatrix;

/// The result of stripping: the minimal model together with the homotopy
/// equivalence realizing it.
#[derive(Debug, Clone)]
pub struct Stripped<T> {
    /// The minimal complex (no invertible scalar differential entries).
    pub complex: SplitComplex<T>,
    /// Projection original → minimal; forward ∘ backward = id exactly.
    pub forward: ChainMap<T>,
    /// Inclusion minimal → original.
    pub backward: ChainMap<T>,
    /// Witnesses backward ∘ forward ≃ id on the original complex.
    pub homotopy: Homotopy<T>,
    /// Stripped pairs as (homological index of the source, twist).
    pub stripped: Vec<(i64, i64)>,
}

/// Finds the first invertible scalar entry: ascending differential index,
/// then row-major within the matrix.
fn find_unit<T: Scalar>(c: &SplitComplex<T>) -> Option<(i64, usize, usize)> {
    for i in c.support() {
        let d = c.diff(i);
        if d.rows() == 0 || d.cols() == 0 {
            continue;
        }
        for r in 0..d.rows() {
            for s in 0..d.cols() {
                if d.row_twists[r] == d.col_twists[s] && !d.entry(r, s).is_zero() {
                    return Some((i, r, s));
                }
            }
        }
    }
    None
}

fn delete_row_col<T: Scalar>(
    m: &PolyMatrix<T>,
    skip_row: Option<usize>,
    skip_col: Option<usize>,
) -> PolyMatrix<T> {
    let rows: Vec<usize> = (0..m.rows()).filter(|r| Some(*r) != skip_row).collect();
    let cols: Vec<usize> = (0..m.cols()).filter(|c| Some(*c) != skip_col).collect();
    m.submatrix(&rows, &cols)
}

/// One strip step at differential index i, unit entry (r, s).
/// Returns (new complex, projection, inclusion, homotopy component at i−1).
fn strip_once<T: Scalar>(
    c: &SplitComplex<T>,
    i: i64,
    r: usize,
    s: usize,
) -> (SplitComplex<T>, ChainMap<T>, ChainMap<T>, Homotopy<T>) {
    let ring = c.ring;
    let d = c.diff(i);
    let a = d.entry(r, s).coeff(&vec![0u16; ring.nvars()]);
    assert!(!a.is_zero(), "unit entry is a nonzero constant");
    let a_inv = a.inv();

    // Twist lists with the matched generators removed.
    let mut src_tw = c.term(i);
    src_tw.remove(s);
    let mut tgt_tw = c.term(i - 1);
    tgt_tw.remove(r);

    let mut terms = BTreeMap::new();
    for j in c.support() {
        let tw = if j == i {
            src_tw.clone()
        } else if j == i - 1 {
            tgt_tw.clone()
        } else {
            c.term(j)
        };
        if !tw.is_empty() {
            terms.insert(j, tw);
        }
    }

    // Schur complement at i; row/column deletions at i+1 and i−1.
    let mut diffs: BTreeMap<i64, PolyMatrix<T>> = BTreeMap::new();
    for j in c.support() {
        let dj = c.diff(j);
        if dj.rows() == 0 || dj.cols() == 0 {
            continue;
        }
        let nd = if j == i {
            let mut schur = delete_row_col(&dj, Some(r), Some(s));
            let rest_rows: Vec<usize> = (0..dj.rows()).filter(|x| *x != r).collect();
            let rest_cols: Vec<usize> = (0..dj.cols()).filter(|x| *x != s).collect();
            for (ri, &orow) in rest_rows.iter().enumerate() {
                for (ci, &ocol) in rest_cols.iter().enumerate() {
                    // schur -= c' a^{-1} b, entrywise.
                    let corr = dj
                        .entry(orow, s)
                        .mul(&dj.entry(r, ocol))
                        .scale(&(-a_inv.clone()));
                    let cur = schur.entry(ri, ci).add(&corr);
                    schur.set_entry(ri, ci, cur);
                }
            }
            schur
        } else if j == i + 1 {
            delete_row_col(&dj, Some(s), None)
        } else if j == i - 1 {
            delete_row_col(&dj, None, Some(r))
        } else {
            dj.clone()
        };
        if !nd.is_zero() {
            diffs.insert(j, nd);
        }
    }
    let mut stripped = SplitComplex::new(ring, terms, diffs).expect("strip preserves d^2 = 0");
    // Track the complex even if normalize() dropped indices with empty terms.
    let _ = &mut stripped;

    // Projection π: identity away from i, i−1; at i delete the s-coordinate;
    // at i−1 delete the r-coordinate and correct by −a^{−1}·(column under a).
    let mut proj_comps = BTreeMap::new();
    for j in c.support() {
        let src_t = c.term(j);
        let tgt_t = stripped.term(j);
        if src_t.is_empty() || tgt_t.is_empty() {
            continue;
        }
        let m = if j == i {
            let mut m = PolyMatrix::zero(ring, tgt_t, src_t);
            let mut out_row = 0;
            for col in 0..c.rank_at(i) {
                if col == s {
                    continue;
                }
                m.set_entry(out_row, col, HomogPoly::constant(ring.nvars(), T::one()));
                out_row += 1;
            }
            m
        } else if j == i - 1 {
            let d = c.diff(i);
            let mut m = PolyMatrix::zero(ring, tgt_t, src_t);
            let mut out_row = 0;
            for row in 0..c.rank_at(i - 1) {
                if row == r {
                    continue;
                }
                m.set_entry(out_row, row, HomogPoly::constant(ring.nvars(), T::one()));
                // Correction on the r-coordinate: −a^{−1}·d[row][s].
                let corr = d.entry(row, s).scale(&(-a_inv.clone()));
                m.set_entry(out_row, r, corr);
                out_row += 1;
            }
            m
        } else {
            PolyMatrix::identity(ring, src_t)
        };
        if !m.is_zero() {
            proj_comps.insert(j, m);
        }
    }
    let forward = ChainMap::new(c.clone(), stripped.clone(), proj_comps)
        .expect("strip projection is a chain map");

    // Inclusion σ: identity away from i, i−1; at i the s-coordinate is filled
    // with −a^{−1}·(row of a); at i−1 the r-coordinate is zero.
    let mut incl_comps = BTreeMap::new();
    for j in c.support() {
        let src_t = stripped.term(j);
        let tgt_t = c.term(j);
        if src_t.is_empty() || tgt_t.is_empty() {
            continue;
        }
        let m = if j == i {
            let d = c.diff(i);
            let mut m = PolyMatrix::zero(ring, tgt_t, src_t);
            let mut in_col = 0;
            for col in 0..c.rank_at(i) {
                if col == s {
                    continue;
                }
                m.set_entry(col, in_col, HomogPoly::constant(ring.nvars(), T::one()));
                let corr = d.entry(r, col).scale(&(-a_inv.clone()));
                m.set_entry(s, in_col, corr);
                in_col += 1;
            }
            m
        } else if j == i - 1 {
            let mut m = PolyMatrix::zero(ring, tgt_t, src_t);
            let mut in_col = 0;
            for row in 0..c.rank_at(i - 1) {
                if row == r {
                    continue;
                }
                m.set_entry(row, in_col, HomogPoly::constant(ring.nvars(), T::one()));
                in_col += 1;
            }
            m
        } else {
            PolyMatrix::identity(ring, tgt_t)
        };
        if !m.is_zero() {
            incl_comps.insert(j, m);
        }
    }
    let backward = ChainMap::new(stripped.clone(), c.clone(), incl_comps)
        .expect("strip inclusion is a chain map");

    // Homotopy: single component at i−1, sending the r-generator to a^{−1}
    // times the s-generator.
    let mut h = Homotopy::zero(c.clone(), c.clone());
    let mut hm = PolyMatrix::zero(ring, c.term(i), c.term(i - 1));
    hm.set_entry(s, r, HomogPoly::constant(ring.nvars(), a_inv));
    h.components.insert(i - 1, hm);

    (stripped, forward, backward, h)
}

/// Strips all trivial summands. Deterministic: always eliminates the first
/// unit entry in (differential index, row, column) order.
pub fn strip_trivial<T: Scalar>(c: &SplitComplex<T>) -> Stripped<T> {
    let mut current = c.clone();
    let mut forward = ChainMap::identity(c);
    let mut backward = ChainMap::identity(c);
    let mut homotopy = Homotopy::zero(c.clone(), c.clone());
    let mut stripped_pairs = Vec::new();

    while let Some((i, r, s)) = find_unit(&current) {
        let twist = current.term(i)[s];
        let (next, pi, sigma, h) = strip_once(&current, i, r, s);
        stripped_pairs.push((i, twist));
        // h_total = h_old + σ_old ∘ h_new ∘ π_old  (maps on the original).
        let mut lifted = Homotopy::zero(c.clone(), c.clone());
        let lo = c.min_index() - 1;
        let hi = c.max_index() + 1;
        for j in lo..=hi {
            let comp = backward
                .component(j + 1)
                .compose(&h.component(j))
                .compose(&forward.component(j));
            let total = homotopy.component(j).add(&comp);
            if !total.is_zero() {
                lifted.components.insert(j, total);
            }
        }
        homotopy = lifted;
        forward = pi.compose(&forward);
        backward = backward.compose(&sigma);
        current = next;
    }

    Stripped {
        complex: current,
        forward,
        backward,
        homotopy,
        stripped: stripped_pairs,
    }
}

/// True when no differential entry is an invertible scalar between equal
/// twists.
pub fn is_linearly_minimal<T: Scalar>(c: &SplitComplex<T>) -> bool {
    find_unit(c).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::koszul::koszul_omega;
    use crate::poly::RingSpec;
    use crate::Rational;

    fn ring() -> RingSpec {
        RingSpec::new(FieldSpec::Rationals, 2).unwrap()
    }

    fn one() -> Rational {
        Rational::from_integer(1.into())
    }

    /// O(t) →(2) O(t) placed at indices (idx, idx−1).
    fn trivial_pair(idx: i64, t: i64) -> SplitComplex<Rational> {
        let r = ring();
        let mut terms = BTreeMap::new();
        terms.insert(idx, vec![t]);
        terms.insert(idx - 1, vec![t]);
        let mut diffs = BTreeMap::new();
        let mut d = PolyMatrix::zero(r, vec![t], vec![t]);
        d.set_entry(0, 0, HomogPoly::constant(3, one() + one()));
        diffs.insert(idx, d);
        SplitComplex::new(r, terms, diffs).unwrap()
    }

    #[test]
    fn trivial_complex_strips_to_empty() {
        let c = trivial_pair(1, -2);
        let s = strip_trivial(&c);
        assert!(s.complex.is_empty());
        assert_eq!(s.stripped, vec![(1, -2)]);
        assert!(s.forward.is_zero());
        assert!(s.backward.is_zero());
        // backward∘forward = 0 must be homotopic to id via the tracked homotopy.
        let id = ChainMap::identity(&c);
        let zero = ChainMap::zero(c.clone(), c.clone());
        assert!(s.homotopy.witnesses(&zero, &id) || s.homotopy.witnesses(&id, &zero));
    }

    #[test]
    fn minimal_complex_unchanged() {
        let r = ring();
        let c = koszul_omega::<Rational>(r, 1, 0).unwrap();
        assert!(is_linearly_minimal(&c));
        let s = strip_trivial(&c);
        assert_eq!(s.complex, c);
        assert!(s.stripped.is_empty());
        assert_eq!(s.forward, ChainMap::identity(&c));
    }

    #[test]
    fn sum_with_trivials_strips_back() {
        let r = ring();
        let base = koszul_omega::<Rational>(r, 1, 0).unwrap();
        let noisy = base
            .direct_sum(&trivial_pair(1, -2))
            .direct_sum(&trivial_pair(0, 0))
            .direct_sum(&trivial_pair(2, -3));
        let s = strip_trivial(&noisy);
        assert_eq!(s.stripped.len(), 3);
        // Same twist lists as the minimal model.
        for i in base.support() {
            let mut got = s.complex.term(i);
            got.sort_unstable();
            let mut want = base.term(i);
            want.sort_unstable();
            assert_eq!(got, want, "index {i}");
        }
        assert!(is_linearly_minimal(&s.complex));
        // forward ∘ backward = identity on the minimal model, exactly.
        let fb = s.forward.compose(&s.backward);
        assert_eq!(fb, ChainMap::identity(&s.complex));
        // backward ∘ forward ≃ identity via the tracked homotopy.
        let bf = s.backward.compose(&s.forward);
        let id = ChainMap::identity(&noisy);
        assert!(s.homotopy.witnesses(&id, &bf));
        // Idempotence.
        let again = strip_trivial(&s.complex);
        assert!(again.stripped.is_empty());
        assert_eq!(again.complex, s.complex);
    }

    #[test]
    fn entangled_unit_block_strips() {
        // A 2×2 differential mixing a unit with polynomial entries; the Schur
        // complement must keep d² = 0 and produce the minimal model.
        let r = ring();
        let d1: PolyMatrix<Rational> = PolyMatrix::from_strings(
            r,
            vec![0, 1],
            vec![0, -1],
            &["1".into(), "0".into(), "x0".into(), "x1^2".into()],
        )
        .unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(1, vec![0, -1]);
        terms.insert(0, vec![0, 1]);
        let mut diffs = BTreeMap::new();
        diffs.insert(1, d1);
        let c = SplitComplex::new(r, terms, diffs).unwrap();
        let s = strip_trivial(&c);
        assert_eq!(s.stripped.len(), 1);
        assert_eq!(s.complex.term(1), vec![-1]);
        assert_eq!(s.complex.term(0), vec![1]);
        let fb = s.forward.compose(&s.backward);
        assert_eq!(fb, ChainMap::identity(&s.complex));
        let bf = s.backward.compose(&s.forward);
        assert!(s.homotopy.witnesses(&ChainMap::identity(&c), &bf));
    }
}
