//! Self-dual morphisms on presented bundles: a symmetric matrix Q₀ between
//! the ambient terms of a split resolution and its dual, inducing a
//! quadratic form on the cokernel bundle. Provides fiberwise forms and their
//! Witt data, a deterministic generic-nondegeneracy search, the discriminant
//! polynomial, a canonical self-dual structure solver, and the pairing the
//! form induces on middle-degree cohomology.

use std::collections::BTreeMap;

use crate::bundle::BundleModel;
use crate::cech::{cup_trace, staircase_to_zero, CechCochain};
use crate::cohomology::rown_slice;
use crate::complex::{ChainMap, Homotopy};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::{HomologySpace, Mat};
use crate::poly::{monomials, HomogPoly, RingSpec};
use crate::polymat::PolyMatrix;
use crate::rng::{random_point, seeded_rng};
use crate::witt::{witt_data, WittData, WittScalar};

/// A bundle presented by a split resolution together with a symmetric
/// morphism E(−m) → E^∨, stored as the chain map the matrix defines from
/// the twisted resolution to the dual resolution.
#[derive(Debug, Clone)]
pub struct QuadraticFormModel<T> {
    pub bundle: BundleModel<T>,
    pub m: i64,
    /// The chain map R(−m) → R^∨; its only component is the matrix at
    /// index 0.
    pub q: ChainMap<T>,
    /// Self-duality holds on the nose (the matrix is symmetric), so the
    /// homotopy witnessing q = q^∨(−m) is identically zero.
    pub selfdual_witness: Homotopy<T>,
}

/// Outcome of the deterministic nondegeneracy search.
#[derive(Debug, Clone)]
pub struct Nondegeneracy<T> {
    pub nondegenerate: bool,
    /// A point where the fiber form is nondegenerate, when one was found by
    /// direct evaluation; `None` when the answer came from the symbolic
    /// discriminant.
    pub witness: Option<Vec<T>>,
}

impl<T: Scalar> QuadraticFormModel<T> {
    pub fn new(bundle: BundleModel<T>, m: i64, q0: PolyMatrix<T>) -> Result<Self> {
        let a = bundle.twists0();
        let want_rows: Vec<i64> = a.iter().map(|x| -x).collect();
        let want_cols: Vec<i64> = a.iter().map(|x| x - m).collect();
        if q0.row_twists != want_rows || q0.col_twists != want_cols {
            return Err(Error::precondition(format!(
                "matrix twists (rows {:?}, cols {:?}) do not match the expected \
                 shape (rows {:?}, cols {:?}) for twists {:?} and m = {m}",
                q0.row_twists, q0.col_twists, want_rows, want_cols, a
            )));
        }
        if !q0.is_symmetric() {
            return Err(Error::precondition(
                "the matrix is not symmetric, so it does not define a self-dual morphism",
            ));
        }
        let source = bundle.resolution.twist(-m);
        let target = bundle.resolution.dual();
        let mut components = BTreeMap::new();
        components.insert(0i64, q0);
        let q = ChainMap::new(source.clone(), target.clone(), components).map_err(|e| {
            Error::precondition(format!(
                "the matrix does not induce a morphism on the presented sheaf: {}",
                e.message
            ))
        })?;
        let selfdual_witness = Homotopy::zero(source, target);
        Ok(QuadraticFormModel {
            bundle,
            m,
            q,
            selfdual_witness,
        })
    }

    /// Builds the split-bundle case directly from row-major entry strings.
    pub fn from_matrix(
        ring: RingSpec,
        m: i64,
        twists: Vec<i64>,
        entries: &[&str],
    ) -> Result<Self> {
        let rows: Vec<i64> = twists.iter().map(|x| -x).collect();
        let cols: Vec<i64> = twists.iter().map(|x| x - m).collect();
        let strings: Vec<String> = entries.iter().map(|s| s.to_string()).collect();
        let q0 = PolyMatrix::from_strings(ring, rows, cols, &strings)?;
        let bundle = BundleModel::split(ring, twists)?;
        QuadraticFormModel::new(bundle, m, q0)
    }

    pub fn ring(&self) -> RingSpec {
        self.bundle.ring()
    }

    pub fn n(&self) -> usize {
        self.bundle.n()
    }

    pub fn q0(&self) -> PolyMatrix<T> {
        self.q.component(0)
    }

    /// The indices of a complement basis of the image of `d` inside the
    /// ambient space: rows `J` such that im(d) ⊕ span(e_J) is everything.
    fn complement_rows(d: &Mat<T>) -> Vec<usize> {
        let aug = d.hstack(&Mat::identity(d.rows));
        aug.image_pivot_cols()
            .into_iter()
            .filter(|&p| p >= d.cols)
            .map(|p| p - d.cols)
            .collect()
    }

    /// The form induced on the fiber E_x at a point, in the complement-basis
    /// coordinates. Well defined because the matrix annihilates the image of
    /// d₁ on both sides.
    pub fn fiber_form(&self, point: &[T]) -> Result<Mat<T>> {
        if point.iter().all(|c| c.is_zero()) {
            return Err(Error::precondition(
                "the zero vector does not define a point",
            ));
        }
        let qx = self.q0().evaluate_at_point(point)?;
        if self.bundle.resolution.length() == 0 {
            return Ok(qx);
        }
        let dx = self.bundle.resolution.diff(1).evaluate_at_point(point)?;
        let j = Self::complement_rows(&dx);
        Ok(qx.submatrix(&j, &j))
    }

    /// Witt data of the fiber form at a point, after scaling by a chosen
    /// trivialization unit.
    pub fn witt_at(&self, point: &[T], scale: &T) -> Result<WittData>
    where
        T: WittScalar,
    {
        if scale.is_zero() {
            return Err(Error::precondition(
                "the trivialization scalar must be nonzero",
            ));
        }
        let f = self.fiber_form(point)?.scale(scale);
        Ok(witt_data(&self.ring().field, &f))
    }

    /// Deterministic search for a point with nondegenerate fiber form:
    /// coordinate points, then the all-ones point, then three seeded random
    /// points, then the symbolic discriminant as a final arbiter.
    pub fn check_generic_nondegeneracy(&self, seed: u64) -> Result<Nondegeneracy<T>> {
        let ring = self.ring();
        let nv = ring.nvars();
        let mut candidates: Vec<Vec<T>> = Vec::new();
        for i in 0..nv {
            let mut e = vec![T::zero(); nv];
            e[i] = T::one();
            candidates.push(e);
        }
        candidates.push(vec![T::one(); nv]);
        let mut rng = seeded_rng(seed);
        for _ in 0..3 {
            candidates.push(random_point(&ring, &mut rng));
        }
        for point in candidates {
            let f = self.fiber_form(&point)?;
            if !f.det().is_zero() {
                return Ok(Nondegeneracy {
                    nondegenerate: true,
                    witness: Some(point),
                });
            }
        }
        let disc = self.discriminant()?;
        Ok(Nondegeneracy {
            nondegenerate: !disc.is_zero(),
            witness: None,
        })
    }

    /// The discriminant polynomial of the induced form on E, of degree
    /// m·rk(E) − 2·c₁(E) when the form is generically nondegenerate; the
    /// zero polynomial otherwise. On a split model this is the determinant
    /// of the matrix; otherwise the determinant of the fiber form in a
    /// complement basis, corrected by the square of the presentation minor
    /// that trivializes the basis change.
    pub fn discriminant(&self) -> Result<HomogPoly<T>> {
        let q0 = self.q0();
        let expected = self.m * self.bundle.rank() - 2 * self.bundle.c1();
        if self.bundle.resolution.length() == 0 {
            let (det, _) = q0.det_and_adjugate();
            if !det.is_zero() && det.degree != expected {
                return Err(Error::internal(format!(
                    "discriminant degree {} differs from the expected {expected}",
                    det.degree
                )));
            }
            return Ok(det);
        }
        let d1 = self.bundle.resolution.diff(1);
        let rank = self.bundle.rank() as usize;
        let l0 = q0.rows();
        let s0 = l0 - rank;
        // Any point realizes the generic corank since the cokernel is a
        // bundle; probe deterministically to choose pivots.
        let ring = self.ring();
        let nv = ring.nvars();
        let mut candidates: Vec<Vec<T>> = Vec::new();
        for i in 0..nv {
            let mut e = vec![T::zero(); nv];
            e[i] = T::one();
            candidates.push(e);
        }
        candidates.push(vec![T::one(); nv]);
        let mut rng = seeded_rng(97);
        for _ in 0..3 {
            candidates.push(random_point(&ring, &mut rng));
        }
        let mut chosen: Option<(Vec<usize>, Vec<usize>)> = None;
        for point in &candidates {
            let dx = d1.evaluate_at_point(point)?;
            if dx.rank() != s0 {
                continue;
            }
            let kcols = dx.image_pivot_cols();
            let all_rows: Vec<usize> = (0..l0).collect();
            let sub = dx.submatrix(&all_rows, &kcols);
            let jc = sub.transpose().image_pivot_cols();
            chosen = Some((jc, kcols));
            break;
        }
        let (jc, kcols) = chosen.ok_or_else(|| {
            Error::precondition(
                "no probe point realizes the generic corank of the presentation; \
                 the cokernel does not look locally free",
            )
        })?;
        let j: Vec<usize> = (0..l0).filter(|i| !jc.contains(i)).collect();
        let (mu, _) = d1.submatrix(&jc, &kcols).det_and_adjugate();
        let (det_jj, _) = q0.submatrix(&j, &j).det_and_adjugate();
        if det_jj.is_zero() {
            return Ok(HomogPoly::zero_poly(nv, expected.max(0)));
        }
        let disc = det_jj.exact_div(&mu.mul(&mu)).ok_or_else(|| {
            Error::internal(
                "the complement-basis determinant is not divisible by the square \
                 of the presentation minor",
            )
        })?;
        if disc.degree != expected {
            return Err(Error::internal(format!(
                "discriminant degree {} differs from the expected {expected}",
                disc.degree
            )));
        }
        Ok(disc)
    }
}

/// The form a self-dual morphism induces on middle-degree cohomology, at
/// the unique twist where that cohomology is paired with itself.
#[derive(Debug, Clone)]
pub enum MiddleFormOutcome<T> {
    /// The middle form only exists for even n with a self-paired twist.
    Undefined { reason: String },
    Defined(MiddleFormData<T>),
}

#[derive(Debug, Clone)]
pub struct MiddleFormData<T> {
    /// The self-paired twist s, with 2s + m + n + 1 = 0.
    pub twist: i64,
    pub dim: usize,
    pub gram: Mat<T>,
    pub radical_rank: usize,
    /// Rank of the nondegenerate quotient.
    pub rank: usize,
    /// The parity forced by n mod 4: symmetric when 4 | n, alternating
    /// otherwise.
    pub symmetric: bool,
    /// Witt data of the Gram matrix in the symmetric case.
    pub witt: Option<WittData>,
}

impl<T: WittScalar> QuadraticFormModel<T> {
    /// Computes the Gram matrix of the pairing induced on H^{n/2}(E(s)) at
    /// the self-paired twist s = −(m+n+1)/2, via Čech staircases: each
    /// top-row class descends to a section-row cochain on the ambient term,
    /// crosses through the matrix, and pairs by evaluation and the trace.
    pub fn middle_form(&self) -> Result<MiddleFormOutcome<T>> {
        let n = self.n();
        if n % 2 == 1 {
            return Ok(MiddleFormOutcome::Undefined {
                reason: format!("n = {n} is odd, so there is no middle cohomology degree"),
            });
        }
        if (self.m + n as i64 + 1).rem_euclid(2) != 0 {
            return Ok(MiddleFormOutcome::Undefined {
                reason: format!(
                    "m + n + 1 = {} is odd, so no twist pairs the middle cohomology \
                     with itself",
                    self.m + n as i64 + 1
                ),
            });
        }
        let k = (n / 2) as i64;
        let s = -(self.m + n as i64 + 1) / 2;
        let res = &self.bundle.resolution;
        // H^k(E(s)) is the top-row homology at index n−k = k.
        let out = rown_slice(res, k, s).transpose();
        let inc = rown_slice(res, k + 1, s).transpose();
        let space: HomologySpace<T> = HomologySpace::new(&out, &inc);
        let dim = space.dim();
        let q0 = self.q0();
        let mut reps: Vec<CechCochain<T>> = Vec::with_capacity(dim);
        let mut pushed: Vec<CechCochain<T>> = Vec::with_capacity(dim);
        for a in 0..dim {
            let w = space.basis.col(a);
            let z = staircase_to_zero(res, k, s, &w)?;
            pushed.push(z.mat_apply(&q0));
            reps.push(z);
        }
        let mut gram = Mat::zero(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                gram[(a, b)] = cup_trace(&pushed[a], &reps[b]);
            }
        }
        let symmetric = n % 4 == 0;
        for a in 0..dim {
            for b in 0..dim {
                let other = if symmetric {
                    gram[(b, a)].clone()
                } else {
                    -gram[(b, a)].clone()
                };
                if gram[(a, b)] != other {
                    return Err(Error::internal(format!(
                        "middle form parity violated at ({a},{b}): expected {} pairing",
                        if symmetric { "a symmetric" } else { "an alternating" }
                    )));
                }
            }
        }
        let rank = gram.rank();
        let witt = if symmetric {
            Some(witt_data(&self.ring().field, &gram))
        } else {
            None
        };
        Ok(MiddleFormOutcome::Defined(MiddleFormData {
            twist: s,
            dim,
            gram,
            radical_rank: dim - rank,
            rank,
            symmetric,
            witt,
        }))
    }
}

/// Solves for the canonical self-dual structure on a presented bundle: the
/// symmetric matrices satisfying the descent conditions form a linear
/// space, and when the underlying bundle is simple enough that this space
/// is one-dimensional, the normalized generator is returned (first nonzero
/// coefficient scaled to one).
pub fn canonical_selfdual_form<T: Scalar>(
    bundle: BundleModel<T>,
    m: i64,
) -> Result<QuadraticFormModel<T>> {
    if bundle.resolution.length() == 0 {
        return Err(Error::precondition(
            "a split model has no relations; the self-dual structure is not unique",
        ));
    }
    let ring = bundle.ring();
    let nv = ring.nvars();
    let a = bundle.twists0();
    let r = a.len();
    let d1 = bundle.resolution.diff(1);
    let b = d1.col_twists.clone();
    // Unknowns: coefficients of the upper-triangle entries.
    let mut unknowns: Vec<(usize, usize, Vec<u16>)> = Vec::new();
    for i in 0..r {
        for jj in i..r {
            let deg = m - a[i] - a[jj];
            for e in monomials(nv, deg) {
                unknowns.push((i, jj, e));
            }
        }
    }
    if unknowns.is_empty() {
        return Err(Error::precondition(
            "no symmetric matrix of the required degrees exists for this m",
        ));
    }
    // Conditions: every coefficient of every entry of Q₀ ∘ d₁ vanishes.
    // Row (i, c, monomial), column = unknown.
    let mut row_index: BTreeMap<(usize, usize, Vec<u16>), usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, T)>> = Vec::new();
    for (u, (i, jj, e)) in unknowns.iter().enumerate() {
        // The unknown appears in entries (i, jj) and (jj, i).
        let places: Vec<(usize, usize)> = if i == jj {
            vec![(*i, *jj)]
        } else {
            vec![(*i, *jj), (*jj, *i)]
        };
        for (row_e, col_e) in places {
            // Contribution of q0[row_e, col_e] = x^e to (Q₀ d₁)[row_e, c].
            for c in 0..b.len() {
                let prod = d1.entry(col_e, c).shift_by(e);
                for (pe, pc) in prod.terms() {
                    let key = (row_e, c, pe.clone());
                    let next = row_index.len();
                    let idx = *row_index.entry(key).or_insert(next);
                    if idx == rows.len() {
                        rows.push(Vec::new());
                    }
                    rows[idx].push((u, pc.clone()));
                }
            }
        }
    }
    let mut sys: Mat<T> = Mat::zero(rows.len(), unknowns.len());
    for (ri, row) in rows.iter().enumerate() {
        for (u, cval) in row {
            let cur = sys[(ri, *u)].clone();
            sys[(ri, *u)] = cur + cval.clone();
        }
    }
    let kernel = sys.kernel_basis();
    match kernel.len() {
        0 => Err(Error::precondition(
            "the model admits no symmetric self-dual structure for this m",
        )),
        1 => {
            let vec = &kernel[0];
            let lead = vec
                .iter()
                .find(|c| !c.is_zero())
                .expect("kernel vector is nonzero")
                .clone();
            let inv = lead.inv();
            let rows_tw: Vec<i64> = a.iter().map(|x| -x).collect();
            let cols_tw: Vec<i64> = a.iter().map(|x| x - m).collect();
            let mut q0 = PolyMatrix::zero(ring, rows_tw, cols_tw);
            for (u, (i, jj, e)) in unknowns.iter().enumerate() {
                let cval = vec[u].clone() * inv.clone();
                if cval.is_zero() {
                    continue;
                }
                let mono = HomogPoly::monomial(nv, e.clone(), cval);
                let upd = q0.entry(*i, *jj).add(&mono);
                q0.set_entry(*i, *jj, upd);
                if i != jj {
                    let upd2 = q0.entry(*jj, *i).add(&mono);
                    q0.set_entry(*jj, *i, upd2);
                }
            }
            QuadraticFormModel::new(bundle, m, q0)
        }
        d => Err(Error::precondition(format!(
            "the self-dual structure is not unique on this model ({d}-dimensional \
             solution space)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SplitComplex;
    use crate::field::{FieldSpec, Fp};
    use crate::koszul::{full_contraction_complex, koszul_omega};
    use crate::witt::witt_class;
    use crate::Rational;
    use num_traits::Zero;

    fn p2q() -> RingSpec {
        RingSpec::new(FieldSpec::Rationals, 2).unwrap()
    }

    fn qi(n: i64) -> Rational {
        <Rational as Scalar>::from_integer(&FieldSpec::Rationals, n)
    }

    fn conic() -> QuadraticFormModel<Rational> {
        QuadraticFormModel::from_matrix(p2q(), 1, vec![0, 0], &["x0", "x1", "x1", "x2"])
            .unwrap()
    }

    #[test]
    fn conic_fiber_forms_and_witt_data() {
        let q = conic();
        let ones = vec![qi(1), qi(1), qi(1)];
        let f = q.fiber_form(&ones).unwrap();
        assert_eq!(f[(0, 0)], qi(1));
        assert_eq!(f[(0, 1)], qi(1));
        assert_eq!(f[(1, 1)], qi(1));
        let w = q.witt_at(&ones, &qi(1)).unwrap();
        assert_eq!(w.radical_rank, 1);
        assert_eq!(w.rank_parity, 0);
        let one_form = witt_class(&FieldSpec::Rationals, &Mat::from_rows(vec![vec![qi(1)]]));
        assert_eq!(w.quotient_class, one_form);
        let e0 = vec![qi(1), qi(0), qi(0)];
        let w0 = q.witt_at(&e0, &qi(1)).unwrap();
        assert_eq!(w0.radical_rank, 1);
        assert_eq!(w0.quotient_class, one_form);
    }

    #[test]
    fn conic_discriminant_is_the_determinant() {
        let q = conic();
        let disc = q.discriminant().unwrap();
        let x0 = HomogPoly::<Rational>::variable(3, 0);
        let x1 = HomogPoly::<Rational>::variable(3, 1);
        let x2 = HomogPoly::<Rational>::variable(3, 2);
        let expected = x0.mul(&x2).sub(&x1.mul(&x1));
        assert_eq!(disc, expected);
    }

    #[test]
    fn antidiagonal_unimodular_nondegenerate_everywhere() {
        let q = QuadraticFormModel::<Rational>::from_matrix(
            p2q(),
            1,
            vec![0, 1],
            &["0", "1", "1", "0"],
        )
        .unwrap();
        let nd = q.check_generic_nondegeneracy(5).unwrap();
        assert!(nd.nondegenerate);
        assert_eq!(nd.witness, Some(vec![qi(1), qi(0), qi(0)]));
        let disc = q.discriminant().unwrap();
        assert!(!disc.is_zero());
        assert_eq!(disc.degree, 0);
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let err = QuadraticFormModel::<Rational>::from_matrix(
            p2q(),
            1,
            vec![0, 0],
            &["x0", "x1", "x0", "x2"],
        )
        .unwrap_err();
        assert!(err.message.contains("symmetric"), "got: {}", err.message);
    }

    #[test]
    fn wrong_degree_entry_is_rejected() {
        let err = QuadraticFormModel::<Rational>::from_matrix(
            p2q(),
            1,
            vec![0, 0],
            &["x0^2", "x1", "x1", "x2"],
        )
        .unwrap_err();
        assert!(
            err.message.contains("degree") || err.message.contains("entry"),
            "got: {}",
            err.message
        );
    }

    #[test]
    fn degenerate_directions_and_zero_form() {
        let q = QuadraticFormModel::<Rational>::from_matrix(
            p2q(),
            1,
            vec![0, 0],
            &["x0", "0", "0", "x0"],
        )
        .unwrap();
        let nd = q.check_generic_nondegeneracy(5).unwrap();
        assert!(nd.nondegenerate);
        assert_eq!(nd.witness, Some(vec![qi(1), qi(0), qi(0)]));
        let z = QuadraticFormModel::<Rational>::from_matrix(
            p2q(),
            1,
            vec![0, 0],
            &["0", "0", "0", "0"],
        )
        .unwrap();
        let ndz = z.check_generic_nondegeneracy(5).unwrap();
        assert!(!ndz.nondegenerate);
        assert_eq!(ndz.witness, None);
    }

    #[test]
    fn rank_one_split_discriminant_degree() {
        let q = QuadraticFormModel::<Rational>::from_matrix(p2q(), 2, vec![0], &["x0^2"])
            .unwrap();
        let disc = q.discriminant().unwrap();
        assert_eq!(disc.degree, 2);
        let x0 = HomogPoly::<Rational>::variable(3, 0);
        assert_eq!(disc, x0.mul(&x0));
    }

    /// Hyperbolic form on the non-split bundle T(−1) ⊕ Ω¹(1) over P², built
    /// from adjacent differentials of the full contraction complex. The
    /// fiber forms are hyperbolic of rank 4 and the discriminant is a
    /// nonzero constant, which exercises the minor-corrected route and the
    /// exact polynomial division.
    #[test]
    fn hyperbolic_nonsplit_model() {
        let ring = p2q();
        let full = full_contraction_complex::<Rational>(ring, 1);
        let b = full.diff(2);
        let euler_d1 = full.diff(1).dual();
        let mut eterms = std::collections::BTreeMap::new();
        eterms.insert(0i64, vec![0i64, 0, 0]);
        eterms.insert(1i64, vec![-1i64]);
        let mut ediffs = std::collections::BTreeMap::new();
        ediffs.insert(1i64, euler_d1);
        let euler = SplitComplex::new(ring, eterms, ediffs).unwrap();
        let omega = koszul_omega::<Rational>(ring, 1, 1).unwrap();
        let total = euler.direct_sum(&omega);
        let bundle = BundleModel::new(total).unwrap();
        assert_eq!(bundle.rank(), 4);
        assert_eq!(bundle.c1(), 0);
        let mut q0 = PolyMatrix::zero(
            ring,
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 0, 0, -1, -1, -1],
        );
        for i in 0..3 {
            for j in 0..3 {
                q0.set_entry(i, 3 + j, b.entry(i, j).clone());
                q0.set_entry(3 + j, i, b.entry(i, j).clone());
            }
        }
        let q = QuadraticFormModel::new(bundle, 0, q0).unwrap();
        let nd = q.check_generic_nondegeneracy(5).unwrap();
        assert!(nd.nondegenerate);
        let disc = q.discriminant().unwrap();
        assert!(!disc.is_zero());
        assert_eq!(disc.degree, 0);
        let e0 = vec![qi(1), qi(0), qi(0)];
        let w = q.witt_at(&e0, &qi(1)).unwrap();
        assert_eq!(w.radical_rank, 0);
        assert_eq!(w.rank_parity, 0);
        let hyp = witt_class(
            &FieldSpec::Rationals,
            &Mat::from_rows(vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]),
        );
        assert_eq!(w.quotient_class, hyp);
        assert!(q.selfdual_witness.witnesses(&q.q, &q.q.dual().twist(0)));
    }

    fn p4f7() -> RingSpec {
        RingSpec::new(FieldSpec::Prime(7), 4).unwrap()
    }

    fn omega2_form() -> QuadraticFormModel<Fp> {
        let ring = p4f7();
        let res = koszul_omega::<Fp>(ring, 2, 3).unwrap();
        let bundle = BundleModel::new(res).unwrap();
        canonical_selfdual_form(bundle, 1).unwrap()
    }

    #[test]
    fn canonical_form_on_middle_cotangent_power() {
        let q = omega2_form();
        assert_eq!(q.bundle.rank(), 6);
        let nd = q.check_generic_nondegeneracy(5).unwrap();
        assert!(nd.nondegenerate);
        match q.middle_form().unwrap() {
            MiddleFormOutcome::Defined(data) => {
                assert_eq!(data.twist, -3);
                assert_eq!(data.dim, 1);
                assert!(data.symmetric);
                assert_eq!(data.radical_rank, 0);
                assert_eq!(data.rank, 1);
                assert!(!data.gram[(0, 0)].is_zero());
                let w = data.witt.unwrap();
                assert_eq!(w.radical_rank, 0);
                assert_eq!(w.rank_parity, 1);
            }
            MiddleFormOutcome::Undefined { reason } => {
                panic!("middle form unexpectedly undefined: {reason}")
            }
        }
    }

    #[test]
    fn skew_parity_model_has_no_symmetric_structure() {
        let ring = p2q();
        let res = koszul_omega::<Rational>(ring, 1, 2).unwrap();
        let bundle = BundleModel::new(res).unwrap();
        let err = canonical_selfdual_form(bundle, 1).unwrap_err();
        assert!(
            err.message.contains("no symmetric"),
            "got: {}",
            err.message
        );
    }

    #[test]
    fn middle_form_undefined_for_odd_parameters() {
        let p3 = RingSpec::new(FieldSpec::Rationals, 3).unwrap();
        let q = QuadraticFormModel::<Rational>::from_matrix(p3, 0, vec![0], &["1"]).unwrap();
        match q.middle_form().unwrap() {
            MiddleFormOutcome::Undefined { reason } => assert!(reason.contains("odd")),
            _ => panic!("expected undefined middle form for odd n"),
        }
        let q2 = QuadraticFormModel::<Rational>::from_matrix(
            p2q(),
            0,
            vec![0, 0],
            &["1", "0", "0", "1"],
        )
        .unwrap();
        match q2.middle_form().unwrap() {
            MiddleFormOutcome::Undefined { reason } => assert!(reason.contains("odd")),
            _ => panic!("expected undefined middle form for odd m+n+1"),
        }
    }

    #[test]
    fn split_middle_form_is_zero() {
        let ring = p4f7();
        let q = QuadraticFormModel::<Fp>::from_matrix(ring, 1, vec![0, 0], &[
            "x0", "0", "0", "x1",
        ])
        .unwrap();
        match q.middle_form().unwrap() {
            MiddleFormOutcome::Defined(data) => {
                assert_eq!(data.dim, 0);
                assert_eq!(data.rank, 0);
                assert_eq!(data.radical_rank, 0);
                assert!(data.symmetric);
                let w = data.witt.unwrap();
                assert_eq!(w.radical_rank, 0);
                assert_eq!(w.rank_parity, 0);
            }
            MiddleFormOutcome::Undefined { reason } => {
                panic!("split middle form should be defined (and zero): {reason}")
            }
        }
    }

    /// A metabolic doubled model: F ⊕ F with the off-diagonal canonical
    /// pairing. Its middle form must be hyperbolic of rank 2, hence have
    /// trivial Witt class — a theorem-level oracle independent of the
    /// staircase computation.
    #[test]
    fn metabolic_middle_form_is_hyperbolic() {
        let q1 = omega2_form();
        let ring = q1.ring();
        let res = q1.bundle.resolution.clone();
        let total = res.direct_sum(&res);
        let bundle = BundleModel::new(total).unwrap();
        let p = q1.q0();
        let rows: Vec<i64> = bundle.twists0().iter().map(|x| -x).collect();
        let cols: Vec<i64> = bundle.twists0().iter().map(|x| x - 1).collect();
        let mut q0 = PolyMatrix::zero(ring, rows, cols);
        let r = p.rows();
        for i in 0..r {
            for j in 0..r {
                q0.set_entry(i, r + j, p.entry(i, j).clone());
                q0.set_entry(r + i, j, p.entry(i, j).clone());
            }
        }
        let q = QuadraticFormModel::new(bundle, 1, q0).unwrap();
        match q.middle_form().unwrap() {
            MiddleFormOutcome::Defined(data) => {
                assert_eq!(data.dim, 2);
                assert_eq!(data.radical_rank, 0);
                assert_eq!(data.rank, 2);
                let w = data.witt.unwrap();
                let f0 = Fp::new(0, 7);
                let f1 = Fp::new(1, 7);
                let hyp = witt_class(
                    &FieldSpec::Prime(7),
                    &Mat::from_rows(vec![vec![f0, f1], vec![f1, f0]]),
                );
                assert_eq!(w.quotient_class, hyp);
            }
            MiddleFormOutcome::Undefined { reason } => {
                panic!("metabolic middle form should be defined: {reason}")
            }
        }
    }

    /// Padding the resolution by an exact identity summand changes the model
    /// but not the middle form's invariants.
    #[test]
    fn middle_form_invariant_under_padding() {
        let q1 = omega2_form();
        let ring = q1.ring();
        let before = match q1.middle_form().unwrap() {
            MiddleFormOutcome::Defined(d) => d,
            _ => panic!("defined"),
        };
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(0i64, vec![-3i64]);
        terms.insert(1i64, vec![-3i64]);
        let mut diffs = std::collections::BTreeMap::new();
        diffs.insert(1i64, PolyMatrix::identity(ring, vec![-3i64]));
        let pad = SplitComplex::new(ring, terms, diffs).unwrap();
        let total = q1.bundle.resolution.direct_sum(&pad);
        let bundle = BundleModel::new(total).unwrap();
        let p = q1.q0();
        let rows: Vec<i64> = bundle.twists0().iter().map(|x| -x).collect();
        let cols: Vec<i64> = bundle.twists0().iter().map(|x| x - 1).collect();
        let mut q0 = PolyMatrix::zero(ring, rows, cols);
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                q0.set_entry(i, j, p.entry(i, j).clone());
            }
        }
        let q = QuadraticFormModel::new(bundle, 1, q0).unwrap();
        let after = match q.middle_form().unwrap() {
            MiddleFormOutcome::Defined(d) => d,
            _ => panic!("defined"),
        };
        assert_eq!(before.dim, after.dim);
        assert_eq!(before.radical_rank, after.radical_rank);
        assert_eq!(before.rank, after.rank);
        assert_eq!(before.witt, after.witt);
    }
}
