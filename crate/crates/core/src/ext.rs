//! Ext groups between split complexes via the sheaf-Hom total complex.
//!
//! For split complexes A, B the bundle of homomorphisms in each total degree
//! is again split: Hom(O(a), O(b)) = O(b − a). We assemble the Hom complex
//! with homological terms H_i = ⊕_m Hom(A_m, B_{m+i}) and differential
//! D(f) = d_B ∘ f − (−1)^i f ∘ d_A, and read Ext^i(A, B) off its
//! hypercohomology at twist 0.
//!
//! Classes in the global-sections row are honest chain maps A → B.shift(i)
//! and are returned as such; classes in the H^n row have no chain-map
//! realization on these models and are reported by dimension only.

use std::collections::BTreeMap;

use crate::cohomology::TwoRow;
use crate::complex::{ChainMap, SplitComplex};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{monomials, HomogPoly};
use crate::polymat::PolyMatrix;

/// Where a summand of the Hom complex came from: the source index m, the row
/// of B_{m+i} and the column of A_m it connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomSummand {
    pub m: i64,
    pub row: usize,
    pub col: usize,
}

/// The Hom complex together with the provenance of every summand.
#[derive(Debug, Clone)]
pub struct HomComplex<T> {
    pub source: SplitComplex<T>,
    pub target: SplitComplex<T>,
    pub complex: SplitComplex<T>,
    /// Per homological index, the ordered summand labels (m ascending, then
    /// target row, then source column).
    pub labels: BTreeMap<i64, Vec<HomSummand>>,
}

impl<T: Scalar> HomComplex<T> {
    /// Twist of one labelled summand at hom index i: B_{m+i}[row] − A_m[col].
    pub fn summand_twist(&self, i: i64, s: &HomSummand) -> i64 {
        self.target.term(s.m + i)[s.row] - self.source.term(s.m)[s.col]
    }
}

fn hom_labels<T: Scalar>(
    a: &SplitComplex<T>,
    b: &SplitComplex<T>,
    i: i64,
) -> (Vec<HomSummand>, Vec<i64>) {
    let mut labels = Vec::new();
    let mut twists = Vec::new();
    if a.is_empty() || b.is_empty() {
        return (labels, twists);
    }
    for m in a.min_index()..=a.max_index() {
        let am = a.term(m);
        let bmi = b.term(m + i);
        for (row, bt) in bmi.iter().enumerate() {
            for (col, at) in am.iter().enumerate() {
                labels.push(HomSummand { m, row, col });
                twists.push(bt - at);
            }
        }
    }
    (labels, twists)
}

/// Flat offset of label (m, row, col) within the ordered label list of H_i.
fn label_offset(labels: &[HomSummand], want: HomSummand) -> Option<usize> {
    labels.iter().position(|l| *l == want)
}

/// Builds the Hom complex of two split complexes over the same ring.
pub fn hom_complex<T: Scalar>(a: &SplitComplex<T>, b: &SplitComplex<T>) -> HomComplex<T> {
    assert_eq!(a.ring, b.ring, "Hom complex needs a common ring");
    let ring = a.ring;
    let mut terms = BTreeMap::new();
    let mut all_labels = BTreeMap::new();
    if !a.is_empty() && !b.is_empty() {
        let lo = b.min_index() - a.max_index();
        let hi = b.max_index() - a.min_index();
        for i in lo..=hi {
            let (labels, twists) = hom_labels(a, b, i);
            if !labels.is_empty() {
                terms.insert(i, twists);
                all_labels.insert(i, labels);
            }
        }
    }

    let mut diffs = BTreeMap::new();
    let indices: Vec<i64> = terms.keys().copied().collect();
    for &i in &indices {
        if !terms.contains_key(&(i - 1)) {
            continue;
        }
        let src_labels = &all_labels[&i];
        let tgt_labels = &all_labels[&(i - 1)];
        let mut d = PolyMatrix::zero(ring, terms[&(i - 1)].clone(), terms[&i].clone());
        // The sign in D(f) = d_B ∘ f − (−1)^i f ∘ d_A.
        let right_sign_negates = i.rem_euclid(2) == 0;
        for (tpos, tl) in tgt_labels.iter().enumerate() {
            // Left composition: (Df)_m[r, c] += Σ_s d_B[r, s] f_m[s, c].
            let db = b.diff(tl.m + i);
            for s in 0..db.cols() {
                let p = db.entry(tl.row, s);
                if p.is_zero() {
                    continue;
                }
                let want = HomSummand {
                    m: tl.m,
                    row: s,
                    col: tl.col,
                };
                if let Some(spos) = label_offset(src_labels, want) {
                    d.set_entry(tpos, spos, p.clone());
                }
            }
            // Right composition: (Df)_m[r, c] −= (−1)^i Σ_s f_{m−1}[r, s] d_A[s, c].
            let da = a.diff(tl.m);
            for s in 0..da.rows() {
                let p = da.entry(s, tl.col);
                if p.is_zero() {
                    continue;
                }
                let want = HomSummand {
                    m: tl.m - 1,
                    row: tl.row,
                    col: s,
                };
                if let Some(spos) = label_offset(src_labels, want) {
                    let q = if right_sign_negates { p.neg() } else { p.clone() };
                    d.set_entry(tpos, spos, q);
                }
            }
        }
        diffs.insert(i, d);
    }

    let complex = SplitComplex::new(ring, terms, diffs)
        .expect("Hom complex construction always satisfies d^2 = 0");
    // Normalization may drop empty terms; keep only surviving labels.
    all_labels.retain(|i, _| complex.support().contains(i));
    HomComplex {
        source: a.clone(),
        target: b.clone(),
        complex,
        labels: all_labels,
    }
}

/// Decodes a degree-0 global-sections cycle of the Hom complex at hom index
/// −i into the chain map A → B.shift(i) it represents.
pub fn cycle_to_chain_map<T: Scalar>(
    h: &HomComplex<T>,
    i: i64,
    v: &[T],
) -> Result<ChainMap<T>> {
    let ring = h.source.ring;
    let target = h.target.shift(i);
    let mut comps: BTreeMap<i64, PolyMatrix<T>> = BTreeMap::new();
    let empty = Vec::new();
    let labels = h.labels.get(&(-i)).unwrap_or(&empty);
    let mut pos = 0usize;
    for l in labels {
        let w = h.summand_twist(-i, l);
        let basis = monomials(ring.nvars(), w);
        if basis.is_empty() {
            continue;
        }
        if pos + basis.len() > v.len() {
            return Err(Error::internal("cycle vector shorter than slice basis"));
        }
        let coeffs = &v[pos..pos + basis.len()];
        pos += basis.len();
        let poly = HomogPoly::from_coeffs(ring.nvars(), w, &basis, coeffs);
        let comp = comps.entry(l.m).or_insert_with(|| {
            PolyMatrix::zero(ring, target.term(l.m), h.source.term(l.m))
        });
        comp.set_entry(l.row, l.col, poly);
    }
    if pos != v.len() {
        return Err(Error::internal("cycle vector longer than slice basis"));
    }
    ChainMap::new(h.source.clone(), target, comps)
}

/// Encodes a chain map A → B.shift(i) as a degree-0 global-sections vector
/// of the Hom complex at hom index −i (the inverse of `cycle_to_chain_map`).
pub fn chain_map_to_cycle<T: Scalar>(
    h: &HomComplex<T>,
    i: i64,
    f: &ChainMap<T>,
) -> Result<Vec<T>> {
    if f.source != h.source || f.target != h.target.shift(i) {
        return Err(Error::precondition(
            "chain map endpoints do not match the Hom complex",
        ));
    }
    let ring = h.source.ring;
    let empty = Vec::new();
    let labels = h.labels.get(&(-i)).unwrap_or(&empty);
    let mut out = Vec::new();
    for l in labels {
        let w = h.summand_twist(-i, l);
        let basis = monomials(ring.nvars(), w);
        if basis.is_empty() {
            continue;
        }
        let comp = f.component(l.m);
        let poly = comp.entry(l.row, l.col);
        out.extend(poly.to_coeffs(&basis));
    }
    Ok(out)
}

/// Ext^i(A, B) split along the two rows of the hypercohomology page.
#[derive(Debug, Clone)]
pub struct ExtGroup<T> {
    pub i: i64,
    /// Classes from the global-sections row: each realized as a chain map.
    pub row0_dim: usize,
    /// Classes from the H^n row: dimension only.
    pub rown_dim: usize,
    pub reps: Vec<ChainMap<T>>,
    /// The page the group was read from, for membership tests.
    pub page: TwoRow<T>,
}

impl<T: Scalar> ExtGroup<T> {
    pub fn dim(&self) -> usize {
        self.row0_dim + self.rown_dim
    }

    /// Coordinates of a chain map's class in the row-0 homology basis;
    /// `None` if the map is not a cycle of this group.
    pub fn class_of(&self, h: &HomComplex<T>, f: &ChainMap<T>) -> Result<Option<Vec<T>>> {
        let v = chain_map_to_cycle(h, self.i, f)?;
        match self.page.row0.get(&(-self.i)) {
            Some(space) => Ok(space.reduce(&v)),
            None => Ok(if v.is_empty() { Some(Vec::new()) } else { None }),
        }
    }
}

/// Computes Ext^i(A, B) with chain-map representatives for the
/// global-sections part. Requires the Hom complex to fit within length n so
/// the page dimensions are final.
pub fn ext_group<T: Scalar>(
    a: &SplitComplex<T>,
    b: &SplitComplex<T>,
    i: i64,
) -> Result<ExtGroup<T>> {
    let h = hom_complex(a, b);
    let n = a.ring.n as i64;
    if h.complex.length() > n {
        return Err(Error::precondition(format!(
            "Hom-complex length {} exceeds n = {n}; shorten the models before asking for representatives",
            h.complex.length()
        )));
    }
    let page = TwoRow::compute(&h.complex, 0);
    let row0_dim = page.row0_dim(-i);
    let rown_dim = page.rown_dim(n - i);
    let mut reps = Vec::with_capacity(row0_dim);
    if let Some(space) = page.row0.get(&(-i)) {
        for c in 0..space.dim() {
            let v = space.basis.col(c);
            reps.push(cycle_to_chain_map(&h, i, &v)?);
        }
    }
    Ok(ExtGroup {
        i,
        row0_dim,
        rown_dim,
        reps,
        page,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{h0_line_dim, hn_line_dim, induced_rown_map};
    use crate::field::{FieldSpec, Fp};
    use crate::koszul::{koszul_omega, tau_step_omega};
    use crate::poly::RingSpec;
    use crate::Rational;
    use num_traits::{One, Zero};

    fn ring_q(n: usize) -> RingSpec {
        RingSpec::new(FieldSpec::Rationals, n).unwrap()
    }

    #[test]
    fn ext0_of_structure_sheaf_is_identity() {
        let r = ring_q(2);
        let o = SplitComplex::<Rational>::single(r, 0, vec![0]);
        let e0 = ext_group(&o, &o, 0).unwrap();
        assert_eq!((e0.row0_dim, e0.rown_dim), (1, 0));
        assert_eq!(e0.reps.len(), 1);
        let rep = &e0.reps[0];
        let c = rep.component(0);
        assert!(c.entry(0, 0).coeff(&[0, 0, 0]).is_one());
        for i in [1, 2] {
            let e = ext_group(&o, &o, i).unwrap();
            assert_eq!(e.dim(), 0);
        }
        // Same over a prime field.
        let rp = RingSpec::new(FieldSpec::Prime(5), 2).unwrap();
        let op = SplitComplex::<Fp>::single(rp, 0, vec![0]);
        assert_eq!(ext_group(&op, &op, 0).unwrap().dim(), 1);
    }

    #[test]
    fn ext_between_line_bundles() {
        let r = ring_q(2);
        for (a, b) in [(0i64, 2i64), (1, -1), (-2, 0), (0, -4)] {
            let la = SplitComplex::<Rational>::single(r, 0, vec![a]);
            let lb = SplitComplex::<Rational>::single(r, 0, vec![b]);
            let e0 = ext_group(&la, &lb, 0).unwrap();
            assert_eq!(e0.dim(), h0_line_dim(2, b - a), "Ext0({a},{b})");
            assert_eq!(e0.rown_dim, 0);
            let e1 = ext_group(&la, &lb, 1).unwrap();
            assert_eq!(e1.dim(), 0, "Ext1({a},{b})");
            let e2 = ext_group(&la, &lb, 2).unwrap();
            assert_eq!(e2.dim(), hn_line_dim(2, b - a), "Ext2({a},{b})");
            assert_eq!(e2.row0_dim, 0);
            assert!(e2.reps.is_empty());
        }
    }

    #[test]
    fn cotangent_bundle_is_rigid() {
        let r = ring_q(2);
        let om = koszul_omega::<Rational>(r, 1, 0).unwrap();
        let e0 = ext_group(&om, &om, 0).unwrap();
        assert_eq!(e0.dim(), 1);
        assert_eq!(e0.reps.len(), 1);
        for i in [1, 2] {
            assert_eq!(ext_group(&om, &om, i).unwrap().dim(), 0, "Ext^{i}");
        }
    }

    #[test]
    fn koszul_connecting_class_is_nonzero() {
        let r = ring_q(3);
        let a = koszul_omega::<Rational>(r, 1, 0).unwrap();
        let b = koszul_omega::<Rational>(r, 2, 0).unwrap();
        let tau = tau_step_omega::<Rational>(r, 1, 0).unwrap();

        let ext1 = ext_group(&a, &b, 1).unwrap();
        assert_eq!((ext1.row0_dim, ext1.rown_dim), (1, 0));
        assert_eq!(ext1.reps.len(), 1);

        // The connecting step is a nonzero class: its cycle coordinates
        // reduce to a nonzero vector in the homology basis.
        let h = hom_complex(&a, &b);
        let class = ext1.class_of(&h, &tau).unwrap().expect("tau is a cycle");
        assert!(class.iter().any(|c| !c.is_zero()));

        // And it acts nontrivially on cohomology: the induced map
        // H^1(source sheaf) → H^2(target sheaf) is an isomorphism of
        // one-dimensional spaces.
        let src_page = TwoRow::compute(&a, 0);
        let tgt_page = TwoRow::compute(&tau.target, 0);
        assert_eq!(src_page.rown_dim(2), 1);
        assert_eq!(tgt_page.rown_dim(2), 1);
        let m = induced_rown_map(&tau, &src_page, &tgt_page, 2);
        assert_eq!((m.rows, m.cols), (1, 1));
        assert!(!m[(0, 0)].is_zero());
    }

    #[test]
    fn round_trip_encode_decode() {
        let r = ring_q(2);
        let a = koszul_omega::<Rational>(r, 1, 0).unwrap();
        let h = hom_complex(&a, &a);
        let e0 = ext_group(&a, &a, 0).unwrap();
        let rep = &e0.reps[0];
        let v = chain_map_to_cycle(&h, 0, rep).unwrap();
        let back = cycle_to_chain_map(&h, 0, &v).unwrap();
        assert_eq!(*rep, back);
    }

    #[test]
    fn hom_complex_length_guard() {
        let r = ring_q(2);
        // A length-3 complex against a single term gives a Hom complex of
        // length 3 > n = 2.
        let long = crate::koszul::full_contraction_complex::<Rational>(r, 0);
        assert_eq!(long.length(), 3);
        let o = SplitComplex::<Rational>::single(r, 0, vec![0]);
        let err = ext_group(&long, &o, 0).unwrap_err();
        assert!(err.message.contains("exceeds n"));
    }
}
