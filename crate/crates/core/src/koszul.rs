//! Resolution models for exterior powers of the tangent and cotangent
//! bundles on P^n, built from the two exact complexes attached to the
//! tautological section e = Σ_i u_i ⊗ x_i:
//!
//!   wedge complex:        ∧^kV ⊗ O(k+c) → ∧^{k+1}V ⊗ O(k+1+c),  ω ↦ e∧ω,
//!   contraction complex:  ∧^kV^∨ ⊗ O(c−k) → ∧^{k−1}V^∨ ⊗ O(c−k+1),  ω ↦ ι_e ω,
//!
//! where V has basis u_0..u_n dual to the variables. Truncating the wedge
//! complex yields a left resolution of ∧^pT(t); truncating the contraction
//! complex yields a left resolution of Ω^p(t).
//!
//! Basis convention: ∧^k is indexed by k-element subsets of {0..n} in
//! ascending lexicographic order of the sorted index tuples.

use crate::complex::{ChainMap, SplitComplex};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{binomial, HomogPoly, RingSpec};
use crate::polymat::PolyMatrix;
use std::collections::BTreeMap;

/// All k-element subsets of {0, .., m−1}, ascending lexicographic.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(m, k));
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination in lex order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + m - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn subset_index(all: &[Vec<usize>], s: &[usize]) -> usize {
    all.binary_search_by(|probe| probe.as_slice().cmp(s))
        .expect("subset must be present")
}

/// The matrix of e∧(−): ∧^kV ⊗ O(a) → ∧^{k+1}V ⊗ O(a+1).
/// Entry (S∪{i}, S) = (−1)^{#{s∈S : s<i}} x_i.
fn wedge_step<T: Scalar>(ring: RingSpec, k: usize, src_twist: i64) -> PolyMatrix<T> {
    let m = ring.nvars();
    let cols_s = subsets(m, k);
    let rows_s = subsets(m, k + 1);
    let mut mat = PolyMatrix::zero(
        ring,
        vec![src_twist + 1; rows_s.len()],
        vec![src_twist; cols_s.len()],
    );
    let one = T::from_integer(&ring.field, 1);
    for (j, s) in cols_s.iter().enumerate() {
        for i in 0..m {
            if s.contains(&i) {
                continue;
            }
            let mut r = s.clone();
            r.push(i);
            r.sort_unstable();
            let below = s.iter().filter(|&&x| x < i).count();
            let coeff = if below % 2 == 0 {
                one.clone()
            } else {
                -one.clone()
            };
            let row = subset_index(&rows_s, &r);
            let poly = HomogPoly::variable(ring.nvars(), i).scale(&coeff);
            mat.set_entry(row, j, poly);
        }
    }
    mat
}

/// The matrix of ι_e: ∧^kV^∨ ⊗ O(a) → ∧^{k−1}V^∨ ⊗ O(a+1).
/// Entry (S∖{s}, S) = (−1)^{pos_S(s)} x_s (0-based position of s in S).
fn contraction_step<T: Scalar>(ring: RingSpec, k: usize, src_twist: i64) -> PolyMatrix<T> {
    let m = ring.nvars();
    let cols_s = subsets(m, k);
    let rows_s = subsets(m, k - 1);
    let mut mat = PolyMatrix::zero(
        ring,
        vec![src_twist + 1; rows_s.len()],
        vec![src_twist; cols_s.len()],
    );
    let one = T::from_integer(&ring.field, 1);
    for (j, s) in cols_s.iter().enumerate() {
        for (pos, &i) in s.iter().enumerate() {
            let r: Vec<usize> = s.iter().copied().filter(|&x| x != i).collect();
            let coeff = if pos % 2 == 0 {
                one.clone()
            } else {
                -one.clone()
            };
            let row = subset_index(&rows_s, &r);
            let poly = HomogPoly::variable(ring.nvars(), i).scale(&coeff);
            mat.set_entry(row, j, poly);
        }
    }
    mat
}

/// Left resolution of ∧^pT(t), length p:
/// L_j = ∧^{p−j}V ⊗ O(p−j+t) for j = 0..p, differentials e∧(−).
pub fn koszul_wedge_tangent<T: Scalar>(ring: RingSpec, p: usize, t: i64) -> Result<SplitComplex<T>> {
    let n = ring.n;
    if p > n {
        return Err(Error::precondition(format!(
            "exterior power degree {p} out of range 0..={n}"
        )));
    }
    Ok(wedge_truncation(ring, p, t))
}

/// Shared builder; allows p = n+1 internally (the full exact complex).
fn wedge_truncation<T: Scalar>(ring: RingSpec, p: usize, t: i64) -> SplitComplex<T> {
    let m = ring.nvars();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for j in 0..=p {
        let k = p - j;
        let rank = binomial(m, k);
        if rank > 0 {
            terms.insert(j as i64, vec![(k as i64) + t; rank]);
        }
    }
    for j in 1..=p {
        let k = p - j;
        diffs.insert(j as i64, wedge_step(ring, k, (k as i64) + t));
    }
    SplitComplex::new(ring, terms, diffs).expect("wedge complex is a complex")
}

/// Left resolution of Ω^p(t), length n−p for p ≥ 1:
/// L_j = ∧^{p+1+j}V^∨ ⊗ O(t−p−1−j) for j = 0..n−p, differentials ι_e.
/// For p = 0 the sheaf is O(t) itself and the model is the single term O(t).
pub fn koszul_omega<T: Scalar>(ring: RingSpec, p: usize, t: i64) -> Result<SplitComplex<T>> {
    let n = ring.n;
    if p > n {
        return Err(Error::precondition(format!(
            "cotangent power degree {p} out of range 0..={n}"
        )));
    }
    if p == 0 {
        return Ok(SplitComplex::single(ring, 0, vec![t]));
    }
    let m = ring.nvars();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for j in 0..=(n - p) {
        let k = p + 1 + j;
        let rank = binomial(m, k);
        if rank > 0 {
            terms.insert(j as i64, vec![t - (k as i64); rank]);
        }
    }
    for j in 1..=(n - p) {
        let k = p + 1 + j;
        diffs.insert(j as i64, contraction_step(ring, k, t - (k as i64)));
    }
    Ok(SplitComplex::new(ring, terms, diffs).expect("contraction complex is a complex"))
}

/// The full exact contraction complex, length n+1:
/// L_i = ∧^iV^∨ ⊗ O(t−i) at index i = 0..n+1, differentials ι_e.
pub fn full_contraction_complex<T: Scalar>(ring: RingSpec, t: i64) -> SplitComplex<T> {
    let m = ring.nvars();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for i in 0..=m {
        let rank = binomial(m, i);
        if rank > 0 {
            terms.insert(i as i64, vec![t - (i as i64); rank]);
        }
    }
    for i in 1..=m {
        diffs.insert(i as i64, contraction_step(ring, i, t - (i as i64)));
    }
    SplitComplex::new(ring, terms, diffs).expect("full contraction complex is a complex")
}

/// The full exact wedge complex, length n+1:
/// L_i = ∧^{n+1−i}V ⊗ O(n+1−i+t) at index i = 0..n+1, differentials e∧(−).
pub fn full_wedge_complex<T: Scalar>(ring: RingSpec, t: i64) -> SplitComplex<T> {
    wedge_truncation(ring, ring.nvars(), t)
}

/// The canonical one-step comparison map between consecutive cotangent
/// models: koszul_omega(k, t) → koszul_omega(k+1, t) shifted by one, with
/// components (−1)^{j−1}·id on the shared terms (j ≥ 1). Requires 1 ≤ k < n.
pub fn tau_step_omega<T: Scalar>(ring: RingSpec, k: usize, t: i64) -> Result<ChainMap<T>> {
    let n = ring.n;
    if k == 0 || k >= n {
        return Err(Error::precondition(format!(
            "comparison map needs 1 <= k < n, got k={k}, n={n}"
        )));
    }
    let src = koszul_omega::<T>(ring, k, t)?;
    let tgt = koszul_omega::<T>(ring, k + 1, t)?.shift(1);
    let mut components = BTreeMap::new();
    for j in 1..=((n - k) as i64) {
        let sign = if (j - 1) % 2 == 0 {
            T::from_integer(&ring.field, 1)
        } else {
            T::from_integer(&ring.field, -1)
        };
        let id = PolyMatrix::identity(ring, src.term(j)).scale(&sign);
        components.insert(j, id);
    }
    ChainMap::new(src, tgt, components)
}

/// The analogous one-step comparison on the tangent side:
/// koszul_wedge_tangent(p, t) → koszul_wedge_tangent(p−1, t) shifted by one,
/// components (−1)^{j−1}·id for j ≥ 1. Requires 1 ≤ p ≤ n.
pub fn tau_step_wedge<T: Scalar>(ring: RingSpec, p: usize, t: i64) -> Result<ChainMap<T>> {
    let n = ring.n;
    if p == 0 || p > n {
        return Err(Error::precondition(format!(
            "comparison map needs 1 <= p <= n, got p={p}, n={n}"
        )));
    }
    let src = koszul_wedge_tangent::<T>(ring, p, t)?;
    let tgt = koszul_wedge_tangent::<T>(ring, p - 1, t)?.shift(1);
    let mut components = BTreeMap::new();
    for j in 1..=(p as i64) {
        let sign = if (j - 1) % 2 == 0 {
            T::from_integer(&ring.field, 1)
        } else {
            T::from_integer(&ring.field, -1)
        };
        let id = PolyMatrix::identity(ring, src.term(j)).scale(&sign);
        components.insert(j, id);
    }
    ChainMap::new(src, tgt, components)
}

/// The glue map whose cone reassembles the full contraction complex from the
/// two truncations at level p (1 ≤ p ≤ n): f maps the shifted upper
/// truncation into the lower truncation via the contraction step. Returns
/// (f, cone(f), iso: cone(f) → full_contraction_complex(t)).
pub fn truncation_cone<T: Scalar>(
    ring: RingSpec,
    p: usize,
    t: i64,
) -> Result<(ChainMap<T>, SplitComplex<T>, ChainMap<T>)> {
    let n = ring.n;
    if p == 0 || p > n {
        return Err(Error::precondition(format!(
            "truncation level must satisfy 1 <= p <= n, got p={p}"
        )));
    }
    let upper = koszul_omega::<T>(ring, p, t)?.shift(p as i64);
    // Lower truncation: terms ∧^iV^∨ ⊗ O(t−i) at i = 0..p.
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let m = ring.nvars();
    for i in 0..=p {
        terms.insert(i as i64, vec![t - (i as i64); binomial(m, i)]);
    }
    for i in 1..=p {
        diffs.insert(i as i64, contraction_step(ring, i, t - (i as i64)));
    }
    let lower = SplitComplex::new(ring, terms, diffs)?;

    let mut components = BTreeMap::new();
    components.insert(
        p as i64,
        contraction_step::<T>(ring, p + 1, t - (p as i64) - 1),
    );
    let f = ChainMap::new(upper, lower, components)?;
    let cone = f.cone();

    // Diagonal comparison with the full complex: δ_i = 1 for i ≤ p+1, then
    // alternating by (−1)^{p+1} per step to absorb the cone's sign on the
    // shifted part.
    let full = full_contraction_complex::<T>(ring, t);
    let mut iso_components = BTreeMap::new();
    for i in 0..=(m as i64) {
        let exponent = if i <= (p as i64) + 1 {
            0
        } else {
            ((p as i64) + 1) * (i - (p as i64) - 1)
        };
        let sign = if exponent % 2 == 0 {
            T::from_integer(&ring.field, 1)
        } else {
            T::from_integer(&ring.field, -1)
        };
        iso_components.insert(i, PolyMatrix::identity(ring, full.term(i)).scale(&sign));
    }
    let iso = ChainMap::new(cone.clone(), full, iso_components)?;
    Ok((f, cone, iso))
}

/// The canonical isomorphism of resolutions coming from ∧^{n−p}T ⊗ O(−n−1) ≅ Ω^p:
/// a diagonal ±1 chain map koszul_wedge_tangent(n−p, t−n−1) → koszul_omega(p, t)
/// sending each subset basis vector to its complement with the shuffle sign.
/// Requires 1 ≤ p ≤ n (both models nontrivial; for p = n the wedge side is the
/// single term O(t−n−1) matching Ω^n(t)).
pub fn complement_iso<T: Scalar>(ring: RingSpec, p: usize, t: i64) -> Result<ChainMap<T>> {
    let n = ring.n;
    if p == 0 || p > n {
        return Err(Error::precondition(format!(
            "complement isomorphism needs 1 <= p <= n, got p={p}"
        )));
    }
    let m = ring.nvars();
    let src = koszul_wedge_tangent::<T>(ring, n - p, t - (n as i64) - 1)?;
    let tgt = koszul_omega::<T>(ring, p, t)?;
    let mut components = BTreeMap::new();
    // Per-index global sign γ_j accumulating (n−p−j) per step keeps the map a
    // chain map under both differentials.
    let mut gamma: i64 = 0;
    for j in 0..=((n - p) as i64) {
        if j > 0 {
            gamma += (n as i64) - (p as i64) - j;
        }
        let k = (n as i64 - p as i64 - j) as usize;
        let cols_s = subsets(m, k);
        let rows_s = subsets(m, p + 1 + j as usize);
        let mut mat = PolyMatrix::zero(ring, tgt.term(j), src.term(j));
        for (col, s) in cols_s.iter().enumerate() {
            let comp: Vec<usize> = (0..m).filter(|i| !s.contains(i)).collect();
            // Shuffle sign: inversions between S and its complement.
            let mut inv = 0usize;
            for &a in s {
                inv += comp.iter().filter(|&&c| c < a).count();
            }
            let total = inv as i64 + gamma;
            let sign = if total % 2 == 0 {
                T::from_integer(&ring.field, 1)
            } else {
                T::from_integer(&ring.field, -1)
            };
            let row = subset_index(&rows_s, &comp);
            mat.set_entry(row, col, HomogPoly::constant(ring.nvars(), sign));
        }
        components.insert(j, mat);
    }
    ChainMap::new(src, tgt, components)
}

/// Identifies the kind of sheaf a Koszul model resolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KoszulRole {
    /// Ω^p(t), modeled on the contraction complex.
    Omega,
    /// ∧^pT(t), modeled on the wedge complex.
    WedgeTangent,
}

/// A named exterior-power sheaf with twist, used to label resolution models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KoszulClass {
    pub p: usize,
    pub t: i64,
    pub role: KoszulRole,
}

impl KoszulClass {
    pub fn omega(p: usize, t: i64) -> Self {
        KoszulClass {
            p,
            t,
            role: KoszulRole::Omega,
        }
    }

    pub fn wedge_tangent(p: usize, t: i64) -> Self {
        KoszulClass {
            p,
            t,
            role: KoszulRole::WedgeTangent,
        }
    }

    pub fn resolution<T: Scalar>(&self, ring: RingSpec) -> Result<SplitComplex<T>> {
        match self.role {
            KoszulRole::Omega => koszul_omega(ring, self.p, self.t),
            KoszulRole::WedgeTangent => koszul_wedge_tangent(ring, self.p, self.t),
        }
    }

    /// Rank of the resolved sheaf: C(n, p) either way.
    pub fn rank(&self, ring: RingSpec) -> usize {
        binomial(ring.n, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::matrix::Mat;
    use crate::Rational;

    fn ring(n: usize) -> RingSpec {
        RingSpec::new(FieldSpec::Rationals, n).unwrap()
    }

    /// Slice homology dimension of a complex at (index, degree).
    fn slice_homology_dim(c: &SplitComplex<Rational>, i: i64, d: i64) -> usize {
        let out: Mat<Rational> = c.diff(i).graded_piece(d);
        let inc: Mat<Rational> = c.diff(i + 1).graded_piece(d);
        let dim = out.cols;
        dim - out.rank() - inc.rank()
    }

    #[test]
    fn subsets_order_and_count() {
        let s = subsets(3, 2);
        assert_eq!(s, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(5, 3).len(), 10);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn model_shapes_match_known_cases() {
        let r2 = ring(2);
        // Tangent: 0 → O → V⊗O(1) → (T) on P².
        let w = koszul_wedge_tangent::<Rational>(r2, 1, 0).unwrap();
        assert_eq!(w.term(0), vec![1, 1, 1]);
        assert_eq!(w.term(1), vec![0]);
        assert_eq!(w.length(), 1);
        // Cotangent: 0 → O(−3) → ∧²V^∨⊗O(−2) → (Ω¹) on P².
        let o = koszul_omega::<Rational>(r2, 1, 0).unwrap();
        assert_eq!(o.term(0), vec![-2, -2, -2]);
        assert_eq!(o.term(1), vec![-3]);
        assert_eq!(o.length(), 1);
        // Trivial ends.
        let top = koszul_omega::<Rational>(r2, 2, 5).unwrap();
        assert_eq!(top.term(0), vec![2]);
        assert_eq!(top.total_rank(), 1);
        let bot = koszul_omega::<Rational>(r2, 0, 4).unwrap();
        assert_eq!(bot.term(0), vec![4]);
        let w0 = koszul_wedge_tangent::<Rational>(r2, 0, -1).unwrap();
        assert_eq!(w0.term(0), vec![-1]);
        assert!(koszul_omega::<Rational>(r2, 3, 0).is_err());
        assert!(koszul_wedge_tangent::<Rational>(r2, 3, 0).is_err());
    }

    #[test]
    fn models_are_complexes_and_slicewise_exact_above_bottom() {
        for n in [2usize, 3] {
            let r = ring(n);
            for p in 0..=n {
                for t in [-2i64, 0, 3] {
                    for c in [
                        koszul_omega::<Rational>(r, p, t).unwrap(),
                        koszul_wedge_tangent::<Rational>(r, p, t).unwrap(),
                    ] {
                        c.validate().unwrap();
                        for i in 1..=c.max_index() {
                            for d in -1..=6 {
                                assert_eq!(
                                    slice_homology_dim(&c, i, d),
                                    0,
                                    "n={n} p={p} t={t} index {i} degree {d}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_complexes_have_one_dimensional_defect() {
        for n in [2usize, 3] {
            let r = ring(n);
            let t = 1i64;
            let f = full_contraction_complex::<Rational>(r, t);
            f.validate().unwrap();
            // Exact at interior; bottom cokernel is one-dimensional exactly in
            // degree −t (the residue of the irrelevant ideal).
            for i in 1..=f.max_index() {
                for d in -5..=5 {
                    assert_eq!(slice_homology_dim(&f, i, d), 0);
                }
            }
            for d in -5..=5 {
                let inc: Mat<Rational> = f.diff(1).graded_piece(d);
                let coker = inc.rows - inc.rank();
                assert_eq!(coker, usize::from(d == -t), "n={n} degree {d}");
            }
            let w = full_wedge_complex::<Rational>(r, t);
            w.validate().unwrap();
            for i in 1..=w.max_index() {
                for d in -8..=4 {
                    assert_eq!(slice_homology_dim(&w, i, d), 0);
                }
            }
            for d in -8..=4 {
                let inc: Mat<Rational> = w.diff(1).graded_piece(d);
                let coker = inc.rows - inc.rank();
                let expect = usize::from(d == -(n as i64) - 1 - t);
                assert_eq!(coker, expect, "n={n} degree {d}");
            }
        }
    }

    #[test]
    fn tau_steps_verify() {
        let r3 = ring(3);
        for t in [-1i64, 0, 2] {
            for k in 1..3 {
                tau_step_omega::<Rational>(r3, k, t).unwrap();
            }
            for p in 1..=3 {
                tau_step_wedge::<Rational>(r3, p, t).unwrap();
            }
        }
        assert!(tau_step_omega::<Rational>(r3, 0, 0).is_err());
        assert!(tau_step_omega::<Rational>(r3, 3, 0).is_err());
    }

    #[test]
    fn truncation_cone_rebuilds_full_complex() {
        for n in [2usize, 3] {
            let r = ring(n);
            for p in 1..=n {
                let (_f, cone, iso) = truncation_cone::<Rational>(r, p, 0).unwrap();
                let full = full_contraction_complex::<Rational>(r, 0);
                for i in 0..=((n as i64) + 1) {
                    assert_eq!(cone.term(i), full.term(i), "n={n} p={p} index {i}");
                }
                // iso was verified as a chain map at construction; check it is
                // diagonal ±1, hence invertible. Terms at each index share one
                // twist, so slicing at its negation exposes the scalar matrix.
                for i in 0..=((n as i64) + 1) {
                    let m = iso.component(i);
                    let slice: Mat<Rational> = m.graded_piece(-full.term(i)[0]);
                    assert_eq!(slice.rank(), full.rank_at(i));
                }
            }
        }
    }

    #[test]
    fn complement_iso_identifies_models() {
        for n in [2usize, 3] {
            let r = ring(n);
            for p in 1..=n {
                for t in [0i64, 2] {
                    let iso = complement_iso::<Rational>(r, p, t).unwrap();
                    let src = koszul_wedge_tangent::<Rational>(r, n - p, t - (n as i64) - 1).unwrap();
                    let tgt = koszul_omega::<Rational>(r, p, t).unwrap();
                    assert_eq!(iso.source, src);
                    assert_eq!(iso.target, tgt);
                    for i in src.support() {
                        assert_eq!(src.term(i), tgt.term(i), "twist lists must agree");
                        let slice: Mat<Rational> = iso.component(i).graded_piece(-src.term(i)[0]);
                        assert_eq!(slice.rank(), src.rank_at(i), "component invertible");
                    }
                }
            }
        }
    }

    #[test]
    fn full_wedge_dual_matches_contraction() {
        // dual reverses arrows and twists; shifting by n+1 lines the dual of
        // the wedge complex up with the contraction complex at −t.
        let r3 = ring(3);
        let w = full_wedge_complex::<Rational>(r3, 2);
        let d = w.dual().shift(4);
        let f = full_contraction_complex::<Rational>(r3, -2);
        assert_eq!(d, f);
        // Odd n+1 flips the differential globally; compare via alternating iso.
        let r2 = ring(2);
        let w = full_wedge_complex::<Rational>(r2, 0);
        let d = w.dual().shift(3);
        let f = full_contraction_complex::<Rational>(r2, 0);
        let mut comps = BTreeMap::new();
        for i in 0..=3i64 {
            let sign = if i % 2 == 0 {
                Rational::from_integer(1.into())
            } else {
                -Rational::from_integer(1.into())
            };
            comps.insert(i, PolyMatrix::identity(r2, f.term(i)).scale(&sign));
        }
        ChainMap::new(d, f, comps).unwrap();
    }
}
