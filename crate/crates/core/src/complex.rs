//! Bounded complexes of split bundles and the maps between them.
//!
//! A complex stores, per homological index i, the twist list of the split
//! bundle L_i and the differential d_i: L_i → L_{i−1}. All structural
//! identities (d² = 0, chain-map commutation, homotopy identities) are
//! checked symbolically on polynomial matrices, never numerically.
//!
//! Sign conventions, fixed once:
//!   shift:  (L[k])_p = L_{p−k},  d^{L[k]} = (−1)^k d^L;
//!   dual:   (L^∨)_i = (L_{−i})^∨, d^{L^∨}_i = (d_{−i+1})^∨ (no sign), so
//!           dual(dual(L)) = L on the nose;
//!   cone:   cone(f: Y→Z)_i = Z_i ⊕ Y_{i−1}, d = [[d^Z, f],[0, −d^Y]].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::RingSpec;
use crate::polymat::PolyMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitComplex<T> {
    pub ring: RingSpec,
    terms: BTreeMap<i64, Vec<i64>>,
    diffs: BTreeMap<i64, PolyMatrix<T>>,
}

impl<T: Scalar> SplitComplex<T> {
    pub fn empty(ring: RingSpec) -> Self {
        SplitComplex {
            ring,
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// A single split bundle placed at one homological index.
    pub fn single(ring: RingSpec, index: i64, twists: Vec<i64>) -> Self {
        let mut c = SplitComplex::empty(ring);
        if !twists.is_empty() {
            c.terms.insert(index, twists);
        }
        c
    }

    /// Builds from raw data and validates everything.
    pub fn new(
        ring: RingSpec,
        terms: BTreeMap<i64, Vec<i64>>,
        diffs: BTreeMap<i64, PolyMatrix<T>>,
    ) -> Result<Self> {
        let mut c = SplitComplex {
            ring,
            terms,
            diffs,
        };
        c.normalize();
        c.validate()?;
        Ok(c)
    }

    /// Drops empty terms and zero differentials touching them.
    fn normalize(&mut self) {
        self.terms.retain(|_, t| !t.is_empty());
        let live: Vec<i64> = self.diffs.keys().copied().collect();
        for i in live {
            let keep = self.terms.contains_key(&i)
                && self.terms.contains_key(&(i - 1))
                && !self.diffs[&i].is_zero();
            if !keep {
                self.diffs.remove(&i);
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, d) in &self.diffs {
            let src = self.term(*i);
            let tgt = self.term(*i - 1);
            if d.col_twists != src || d.row_twists != tgt {
                return Err(Error::precondition(format!(
                    "differential at index {i} has twists {:?} -> {:?}, terms are {src:?} -> {tgt:?}",
                    d.col_twists, d.row_twists
                )));
            }
        }
        for i in self.support() {
            let d_i = self.diff(i);
            let d_im1 = self.diff(i - 1);
            if d_im1.cols() > 0 && d_i.rows() > 0 && !d_im1.compose(&d_i).is_zero() {
                return Err(Error::precondition(format!(
                    "differential does not square to zero at index {i}"
                )));
            }
        }
        Ok(())
    }

    pub fn term(&self, i: i64) -> Vec<i64> {
        self.terms.get(&i).cloned().unwrap_or_default()
    }

    pub fn rank_at(&self, i: i64) -> usize {
        self.terms.get(&i).map_or(0, |t| t.len())
    }

    /// The differential d_i: L_i → L_{i−1}, materialized as zero if absent.
    pub fn diff(&self, i: i64) -> PolyMatrix<T> {
        match self.diffs.get(&i) {
            Some(d) => d.clone(),
            None => PolyMatrix::zero(self.ring, self.term(i - 1), self.term(i)),
        }
    }

    pub fn set_diff(&mut self, i: i64, d: PolyMatrix<T>) {
        assert_eq!(d.col_twists, self.term(i), "diff source twists");
        assert_eq!(d.row_twists, self.term(i - 1), "diff target twists");
        if d.is_zero() {
            self.diffs.remove(&i);
        } else {
            self.diffs.insert(i, d);
        }
    }

    pub fn set_term(&mut self, i: i64, twists: Vec<i64>) {
        if twists.is_empty() {
            self.terms.remove(&i);
        } else {
            self.terms.insert(i, twists);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_index(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    pub fn max_index(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of differentials spanned: max_index − min_index (0 if 0 or 1 term).
    pub fn length(&self) -> i64 {
        if self.is_empty() {
            0
        } else {
            self.max_index() - self.min_index()
        }
    }

    /// All indices in [min, max].
    pub fn support(&self) -> Vec<i64> {
        if self.is_empty() {
            return Vec::new();
        }
        (self.min_index()..=self.max_index()).collect()
    }

    pub fn twist(&self, t: i64) -> Self {
        SplitComplex {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(i, tw)| (*i, tw.iter().map(|a| a + t).collect()))
                .collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(i, d)| (*i, d.twist(t)))
                .collect(),
        }
    }

    /// (L[k])_p = L_{p−k}; differentials scale by (−1)^k.
    pub fn shift(&self, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 {
            T::one()
        } else {
            -T::one()
        };
        SplitComplex {
            ring: self.ring,
            terms: self.terms.iter().map(|(i, t)| (i + k, t.clone())).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(i, d)| (i + k, d.scale(&sign)))
                .collect(),
        }
    }

    /// (L^∨)_i = (L_{−i})^∨ with d^{L^∨}_i = (d_{−i+1})^∨ and no sign, so
    /// the double dual is literally the identity.
    pub fn dual(&self) -> Self {
        let terms: BTreeMap<i64, Vec<i64>> = self
            .terms
            .iter()
            .map(|(i, t)| (-i, t.iter().map(|a| -a).collect()))
            .collect();
        let diffs: BTreeMap<i64, PolyMatrix<T>> = self
            .diffs
            .iter()
            .map(|(i, d)| (-i + 1, d.dual()))
            .collect();
        SplitComplex {
            ring: self.ring,
            terms,
            diffs,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let lo = self.min_index().min(other.min_index());
        let hi = self.max_index().max(other.max_index());
        if self.is_empty() && other.is_empty() {
            return SplitComplex::empty(self.ring);
        }
        for i in lo..=hi {
            let mut t = self.term(i);
            t.extend(other.term(i));
            if !t.is_empty() {
                terms.insert(i, t);
            }
        }
        for i in (lo + 1)..=hi {
            let d = self.diff(i).direct_sum(&other.diff(i));
            if !d.is_zero() {
                diffs.insert(i, d);
            }
        }
        let mut out = SplitComplex {
            ring: self.ring,
            terms,
            diffs,
        };
        out.normalize();
        out
    }

    /// Total rank over all terms.
    pub fn total_rank(&self) -> usize {
        self.terms.values().map(|t| t.len()).sum()
    }

    /// χ-weighted twist census: (index, twist) pairs with multiplicity, for
    /// Euler-characteristic bookkeeping.
    pub fn twist_census(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for (i, tw) in &self.terms {
            for t in tw {
                out.push((*i, *t));
            }
        }
        out
    }
}

/// A degree-0 chain map between split complexes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMap<T> {
    pub source: SplitComplex<T>,
    pub target: SplitComplex<T>,
    components: BTreeMap<i64, PolyMatrix<T>>,
}

impl<T: Scalar> ChainMap<T> {
    pub fn zero(source: SplitComplex<T>, target: SplitComplex<T>) -> Self {
        ChainMap {
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(c: &SplitComplex<T>) -> Self {
        let mut components = BTreeMap::new();
        for (i, t) in &c.terms {
            components.insert(*i, PolyMatrix::identity(c.ring, t.clone()));
        }
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components,
        }
    }

    pub fn new(
        source: SplitComplex<T>,
        target: SplitComplex<T>,
        components: BTreeMap<i64, PolyMatrix<T>>,
    ) -> Result<Self> {
        let mut f = ChainMap {
            source,
            target,
            components,
        };
        f.normalize();
        f.verify()?;
        Ok(f)
    }

    fn normalize(&mut self) {
        self.components.retain(|_, m| !m.is_zero());
    }

    /// Component φ_i: X_i → Y_i, materialized as zero if absent.
    pub fn component(&self, i: i64) -> PolyMatrix<T> {
        match self.components.get(&i) {
            Some(m) => m.clone(),
            None => PolyMatrix::zero(self.source.ring, self.target.term(i), self.source.term(i)),
        }
    }

    pub fn set_component(&mut self, i: i64, m: PolyMatrix<T>) {
        assert_eq!(m.col_twists, self.source.term(i), "component source");
        assert_eq!(m.row_twists, self.target.term(i), "component target");
        if m.is_zero() {
            self.components.remove(&i);
        } else {
            self.components.insert(i, m);
        }
    }

    /// Checks shapes and the commutation d^Y φ = φ d^X symbolically.
    pub fn verify(&self) -> Result<()> {
        for (i, m) in &self.components {
            if m.col_twists != self.source.term(*i) || m.row_twists != self.target.term(*i) {
                return Err(Error::precondition(format!(
                    "chain-map component at {i} has wrong shape"
                )));
            }
        }
        let lo = self.source.min_index().min(self.target.min_index());
        let hi = self.source.max_index().max(self.target.max_index());
        for i in lo..=hi {
            let lhs = self.target.diff(i).compose(&self.component(i));
            let rhs = self.component(i - 1).compose(&self.source.diff(i));
            if lhs.sub(&rhs).is_zero() {
                continue;
            }
            return Err(Error::precondition(format!(
                "chain map does not commute with differentials at index {i}"
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ChainMap<T>) -> ChainMap<T> {
        assert_eq!(self.source, other.target, "chain map composition mismatch");
        let mut components = BTreeMap::new();
        let lo = other.source.min_index().min(self.target.min_index());
        let hi = other.source.max_index().max(self.target.max_index());
        if !other.source.is_empty() && !self.target.is_empty() {
            for i in lo..=hi {
                let m = self.component(i).compose(&other.component(i));
                if !m.is_zero() {
                    components.insert(i, m);
                }
            }
        }
        ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn add(&self, other: &ChainMap<T>) -> ChainMap<T> {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut out = self.clone();
        for (i, m) in &other.components {
            let s = out.component(*i).add(m);
            out.set_component(*i, s);
        }
        out
    }

    pub fn neg(&self) -> ChainMap<T> {
        let mut out = self.clone();
        for m in out.components.values_mut() {
            *m = m.neg();
        }
        out
    }

    pub fn sub(&self, other: &ChainMap<T>) -> ChainMap<T> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> ChainMap<T> {
        let mut out = self.clone();
        for m in out.components.values_mut() {
            *m = m.scale(c);
        }
        out.normalize();
        out
    }

    pub fn twist(&self, t: i64) -> ChainMap<T> {
        ChainMap {
            source: self.source.twist(t),
            target: self.target.twist(t),
            components: self
                .components
                .iter()
                .map(|(i, m)| (*i, m.twist(t)))
                .collect(),
        }
    }

    pub fn shift(&self, k: i64) -> ChainMap<T> {
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            components: self
                .components
                .iter()
                .map(|(i, m)| (i + k, m.clone()))
                .collect(),
        }
    }

    /// The dual chain map between dual complexes: (φ^∨)_i = (φ_{−i})^∨.
    pub fn dual(&self) -> ChainMap<T> {
        ChainMap {
            source: self.target.dual(),
            target: self.source.dual(),
            components: self
                .components
                .iter()
                .map(|(i, m)| (-i, m.dual()))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &ChainMap<T>) -> ChainMap<T> {
        let source = self.source.direct_sum(&other.source);
        let target = self.target.direct_sum(&other.target);
        let mut components = BTreeMap::new();
        let lo = source.min_index();
        let hi = source.max_index();
        if !source.is_empty() {
            for i in lo..=hi {
                // Block structure must track the direct-sum twist concatenation.
                let m = block_diag_for_sum(
                    &self.component(i),
                    &other.component(i),
                    &target.term(i),
                    &source.term(i),
                );
                if !m.is_zero() {
                    components.insert(i, m);
                }
            }
        }
        ChainMap {
            source,
            target,
            components,
        }
    }

    /// The mapping cone: cone(f: Y→Z)_i = Z_i ⊕ Y_{i−1}, d = [[d^Z, f],[0, −d^Y]].
    pub fn cone(&self) -> SplitComplex<T> {
        let y = &self.source;
        let z = &self.target;
        let ring = y.ring;
        let mut terms: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let lo = z.min_index().min(y.min_index() + 1) - 1;
        let hi = z.max_index().max(y.max_index() + 1) + 1;
        for i in lo..=hi {
            let mut t = z.term(i);
            t.extend(y.term(i - 1));
            if !t.is_empty() {
                terms.insert(i, t);
            }
        }
        let mut diffs = BTreeMap::new();
        for i in lo..=hi {
            let row_groups = [z.term(i - 1), y.term(i - 2)];
            let col_groups = [z.term(i), y.term(i - 1)];
            if row_groups.iter().all(|g| g.is_empty())
                || col_groups.iter().all(|g| g.is_empty())
            {
                continue;
            }
            let dz = z.diff(i);
            let f = self.component(i - 1);
            let dy_neg = y.diff(i - 1).neg();
            let m = PolyMatrix::from_blocks(
                ring,
                &row_groups,
                &col_groups,
                &[
                    vec![Some(&dz), Some(&f)],
                    vec![None, Some(&dy_neg)],
                ],
            );
            if !m.is_zero() {
                diffs.insert(i, m);
            }
        }
        let mut c = SplitComplex { ring, terms, diffs };
        c.normalize();
        debug_assert!(c.validate().is_ok(), "cone differential must square to zero");
        c
    }
}

fn block_diag_for_sum<T: Scalar>(
    a: &PolyMatrix<T>,
    b: &PolyMatrix<T>,
    row_twists: &[i64],
    col_twists: &[i64],
) -> PolyMatrix<T> {
    let ring = a.ring;
    let mut out = PolyMatrix::zero(ring, row_twists.to_vec(), col_twists.to_vec());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set_entry(i, j, a.entry(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out.set_entry(a.rows() + i, a.cols() + j, b.entry(i, j).clone());
        }
    }
    out
}

/// A homotopy h between chain maps f, g: X → Y with the same ends:
/// components h_i: X_i → Y_{i+1}, witnessing f − g = d∘h + h∘d.
#[derive(Debug, Clone)]
pub struct Homotopy<T> {
    pub source: SplitComplex<T>,
    pub target: SplitComplex<T>,
    pub components: BTreeMap<i64, PolyMatrix<T>>,
}

impl<T: Scalar> Homotopy<T> {
    pub fn zero(source: SplitComplex<T>, target: SplitComplex<T>) -> Self {
        Homotopy {
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    pub fn component(&self, i: i64) -> PolyMatrix<T> {
        match self.components.get(&i) {
            Some(m) => m.clone(),
            None => PolyMatrix::zero(
                self.source.ring,
                self.target.term(i + 1),
                self.source.term(i),
            ),
        }
    }

    /// Checks f − g = d^Y h + h d^X symbolically.
    pub fn witnesses(&self, f: &ChainMap<T>, g: &ChainMap<T>) -> bool {
        let lo = self.source.min_index().min(self.target.min_index()) - 1;
        let hi = self.source.max_index().max(self.target.max_index()) + 1;
        for i in lo..=hi {
            let dh = self.target.diff(i + 1).compose(&self.component(i));
            let hd = self.component(i - 1).compose(&self.source.diff(i));
            let want = f.component(i).sub(&g.component(i));
            if !dh.add(&hd).sub(&want).is_zero() {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::Rational;

    fn ring() -> RingSpec {
        RingSpec::new(FieldSpec::Rationals, 2).unwrap()
    }

    /// The two-step complex O(−2) → O(−1)² → O with the standard syzygy.
    fn koszul_like() -> SplitComplex<Rational> {
        let r = ring();
        let d1 = PolyMatrix::from_strings(
            r,
            vec![0],
            vec![-1, -1],
            &["x0".into(), "x1".into()],
        )
        .unwrap();
        let d2 = PolyMatrix::from_strings(
            r,
            vec![-1, -1],
            vec![-2],
            &["-x1".into(), "x0".into()],
        )
        .unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(0, vec![0]);
        terms.insert(1, vec![-1, -1]);
        terms.insert(2, vec![-2]);
        let mut diffs = BTreeMap::new();
        diffs.insert(1, d1);
        diffs.insert(2, d2);
        SplitComplex::new(r, terms, diffs).unwrap()
    }

    #[test]
    fn validate_catches_nonsquare_zero() {
        let r = ring();
        let mut c = koszul_like();
        // Corrupt d2 so that d1∘d2 ≠ 0.
        let bad = PolyMatrix::from_strings(
            r,
            vec![-1, -1],
            vec![-2],
            &["x1".into(), "x0".into()],
        )
        .unwrap();
        c.set_diff(2, bad);
        assert!(c.validate().is_err());
    }

    #[test]
    fn dual_dual_is_identity_and_shift_signs() {
        let c = koszul_like();
        assert_eq!(c.dual().dual(), c);
        let s = c.shift(1);
        assert_eq!(s.term(1), c.term(0));
        assert_eq!(s.diff(2), c.diff(1).neg());
        assert_eq!(s.shift(-1), c);
        let d = c.dual();
        d.validate().unwrap();
        assert_eq!(d.term(-2), vec![2]);
    }

    #[test]
    fn cone_of_zero_is_sum_with_shift() {
        let c = koszul_like();
        let single = SplitComplex::single(ring(), 0, vec![3]);
        let z = ChainMap::zero(c.clone(), single.clone());
        let cone = z.cone();
        let expect = single.direct_sum(&c.shift(1));
        assert_eq!(cone, expect);
        cone.validate().unwrap();
    }

    #[test]
    fn cone_of_identity_squares_to_zero() {
        let c = koszul_like();
        let id = ChainMap::identity(&c);
        let cone = id.cone();
        cone.validate().unwrap();
        assert_eq!(cone.total_rank(), 2 * c.total_rank());
    }

    #[test]
    fn chain_map_identity_and_compose() {
        let c = koszul_like();
        let id = ChainMap::identity(&c);
        id.verify().unwrap();
        let two = id.add(&id);
        two.verify().unwrap();
        assert_eq!(two.compose(&id), two);
        let z = two.sub(&two);
        assert!(z.is_zero());
    }

    #[test]
    fn homotopy_witness_zero_maps() {
        let c = koszul_like();
        let id = ChainMap::identity(&c);
        let h = Homotopy::zero(c.clone(), c.clone());
        assert!(h.witnesses(&id, &id));
        let z = ChainMap::zero(c.clone(), c.clone());
        assert!(!h.witnesses(&id, &z));
    }

    #[test]
    fn twist_and_sum() {
        let c = koszul_like();
        let t = c.twist(3);
        assert_eq!(t.term(0), vec![3]);
        assert_eq!(t.term(2), vec![1]);
        t.validate().unwrap();
        let s = c.direct_sum(&t);
        assert_eq!(s.rank_at(1), 4);
        s.validate().unwrap();
    }
}
