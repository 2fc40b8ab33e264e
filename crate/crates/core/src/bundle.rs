//! Bundle models: a vector bundle presented by a split left resolution with a
//! cached cohomology table, VLC/VUC predicates, graded section functors, and
//! re-resolution by iterated minimal epimorphisms.

use std::collections::BTreeMap;

use crate::cohomology::{cohomology_table, euler_char_bundle, CohomologyTable};
use crate::complex::SplitComplex;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::{HomologySpace, Mat};
use crate::poly::{monomial_count, monomials, HomogPoly, RingSpec};
use crate::polymat::PolyMatrix;

/// A vector bundle E presented by a split left resolution L_ℓ → … → L₀
/// (homological indices ℓ..0, bottom term at index 0), together with its
/// cached cohomology table. The empty complex presents the zero sheaf.
#[derive(Debug, Clone)]
pub struct BundleModel<T> {
    pub resolution: SplitComplex<T>,
    pub table: CohomologyTable,
}

impl<T: Scalar> BundleModel<T> {
    pub fn new(resolution: SplitComplex<T>) -> Result<Self> {
        let n = resolution.ring.n;
        if resolution.is_empty() {
            return Ok(BundleModel {
                table: CohomologyTable {
                    n,
                    window: (0, 0),
                    entries: BTreeMap::new(),
                },
                resolution,
            });
        }
        if resolution.min_index() != 0 {
            return Err(Error::precondition(
                "bundle resolution must have its bottom term at index 0",
            ));
        }
        if resolution.length() > n as i64 - 1 {
            return Err(Error::precondition(format!(
                "resolution length {} exceeds n - 1 = {}",
                resolution.length(),
                n - 1
            )));
        }
        let table = cohomology_table(&resolution)?;
        Ok(BundleModel { resolution, table })
    }

    /// A split bundle as a length-0 model.
    pub fn split(ring: RingSpec, twists: Vec<i64>) -> Result<Self> {
        BundleModel::new(SplitComplex::single(ring, 0, twists))
    }

    pub fn ring(&self) -> RingSpec {
        self.resolution.ring
    }

    pub fn n(&self) -> usize {
        self.resolution.ring.n
    }

    /// Twists of the bottom (presenting) term.
    pub fn twists0(&self) -> Vec<i64> {
        self.resolution.term(0)
    }

    /// Rank of the presented bundle: alternating sum of term ranks.
    pub fn rank(&self) -> i64 {
        self.resolution
            .support()
            .iter()
            .map(|&i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                s * self.resolution.rank_at(i) as i64
            })
            .sum()
    }

    /// First Chern class: alternating sum of the twist sums of the terms.
    pub fn c1(&self) -> i64 {
        self.resolution
            .support()
            .iter()
            .map(|&i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                s * self.resolution.term(i).iter().sum::<i64>()
            })
            .sum()
    }

    /// True when the model is a bare split term (or zero).
    pub fn is_split(&self) -> bool {
        self.resolution.is_empty() || self.resolution.length() == 0
    }

    /// Vanishing lower cohomology: H^p(E(t)) = 0 for 1 ≤ p ≤ ⌊n/2⌋ and all t.
    pub fn is_vlc(&self) -> bool {
        let half = self.n() / 2;
        self.table
            .intermediate_entries()
            .iter()
            .all(|(q, _, _)| *q > half)
    }

    /// Vanishing upper cohomology: H^p(E(t)) = 0 for ⌈n/2⌉ ≤ p ≤ n−1 and all t.
    pub fn is_vuc(&self) -> bool {
        let ceil_half = self.n().div_ceil(2);
        self.table
            .intermediate_entries()
            .iter()
            .all(|(q, _, _)| *q < ceil_half)
    }

    /// Castelnuovo–Mumford regularity bound read off the resolution terms:
    /// max over terms O(a) at index i of (−a − i).
    pub fn reg_bound(&self) -> i64 {
        let mut r = i64::MIN;
        for i in self.resolution.support() {
            for a in self.resolution.term(i) {
                r = r.max(-a - i);
            }
        }
        if r == i64::MIN {
            0
        } else {
            r
        }
    }

    /// Regularity bound for the dual bundle, from Serre duality on the table:
    /// max of the bottom-term twists and of −t − q over nonzero intermediate
    /// H^q(E(t)).
    pub fn dual_reg_bound(&self) -> i64 {
        let mut r = self.twists0().iter().copied().max().unwrap_or(0);
        for (q, t, _) in self.table.intermediate_entries() {
            r = r.max(-t - q as i64);
        }
        r
    }

    /// Graded global-section functor of the presented bundle: at twist t the
    /// space is H⁰(L₀(t)) modulo the image of the degree-t slice of d₁.
    pub fn sections(&self) -> SectionFunctor<T> {
        let t0 = self.twists0();
        let cap = t0.iter().map(|a| -a).max().unwrap_or(0);
        let inc = if self.resolution.length() >= 1 {
            vec![self.resolution.diff(1)]
        } else {
            vec![]
        };
        SectionFunctor {
            ring: self.ring(),
            ambient: t0,
            out: vec![],
            thru: vec![],
            inc,
            reg_bound: cap,
        }
    }

    /// Graded global-section functor of the dual bundle: at twist t the space
    /// is the kernel of the degree-t slice of d₁^∨ on H⁰(L₀^∨(t)).
    pub fn dual_sections(&self) -> SectionFunctor<T> {
        let amb: Vec<i64> = self.twists0().iter().map(|a| -a).collect();
        let out = if self.resolution.length() >= 1 {
            vec![self.resolution.diff(1).dual()]
        } else {
            vec![]
        };
        SectionFunctor {
            ring: self.ring(),
            ambient: amb,
            out,
            thru: vec![],
            inc: vec![],
            reg_bound: self.dual_reg_bound(),
        }
    }

    /// dim H⁰(E(t)).
    pub fn h0_dim(&self, t: i64) -> usize {
        self.sections().space(t).dim()
    }

    /// Euler characteristic χ(E(t)) from the term census.
    pub fn euler(&self, t: i64) -> i64 {
        self.resolution
            .support()
            .iter()
            .map(|&i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                s * euler_char_bundle(self.n(), &self.resolution.term(i), t)
            })
            .sum()
    }

    /// Whether two models present sheaves with identical cohomology: same
    /// rank, first Chern class and Euler polynomial, identical intermediate
    /// cohomology everywhere, and identical H⁰/H^n rows on the overlap of the
    /// two validation windows.
    pub fn agrees_with(&self, other: &BundleModel<T>) -> bool {
        if self.n() != other.n() || self.rank() != other.rank() || self.c1() != other.c1() {
            return false;
        }
        let n = self.n();
        for t in 0..=(n as i64) {
            if self.euler(t) != other.euler(t) {
                return false;
            }
        }
        let mut a = self.table.intermediate_entries();
        a.sort_unstable();
        let mut b = other.table.intermediate_entries();
        b.sort_unstable();
        if a != b {
            return false;
        }
        let lo = self.table.window.0.max(other.table.window.0);
        let hi = self.table.window.1.min(other.table.window.1);
        for t in lo..=hi {
            if self.table.dim(0, t) != other.table.dim(0, t)
                || self.table.dim(n, t) != other.table.dim(n, t)
            {
                return false;
            }
        }
        true
    }

    /// Rebuilds the model as a split resolution of the requested length by
    /// iterated minimal epimorphisms on graded section spaces. Returns the new
    /// model and the comparison matrix from its bottom term into the old
    /// bottom term (the section columns of the chosen generators).
    pub fn reresolve(&self, target_length: i64) -> Result<Reresolved<T>> {
        let n = self.n() as i64;
        if target_length < 0 || target_length > n - 1 {
            return Err(Error::precondition(format!(
                "target length must lie in 0..={}",
                n - 1
            )));
        }
        if self.resolution.is_empty() || self.resolution.length() <= target_length {
            let comparison = PolyMatrix::identity(self.ring(), self.twists0());
            return Ok(Reresolved {
                model: self.clone(),
                comparison,
            });
        }
        for (q, t, _) in self.table.intermediate_entries() {
            if (q as i64) <= n - 1 - target_length {
                return Err(Error::precondition(format!(
                    "a length-{target_length} split resolution needs H^{q}(E({t})) = 0, but it is nonzero"
                )));
            }
        }
        let out = resolve_sheaf(
            &self.sections(),
            self.rank(),
            target_length,
            self.reg_bound(),
        )?;
        let model = BundleModel::new(out.resolution)?;
        if !model.agrees_with(self) {
            return Err(Error::internal(
                "re-resolved model presents a sheaf with a different cohomology table",
            ));
        }
        Ok(Reresolved {
            model,
            comparison: out.augmentation,
        })
    }
}

/// Result of re-resolving a bundle model.
#[derive(Debug, Clone)]
pub struct Reresolved<T> {
    pub model: BundleModel<T>,
    /// New bottom term → old bottom term; identity when the model was reused.
    pub comparison: PolyMatrix<T>,
}

/// Dimension of H⁰ of a split term at twist t.
pub fn ambient_h0_dim(ring: RingSpec, twists: &[i64], t: i64) -> usize {
    twists
        .iter()
        .map(|a| monomial_count(ring.nvars(), t + a))
        .sum()
}

/// Diagonal multiplication-by-x_var map on a split term; its degree-t slice
/// maps H⁰(term(t)) → H⁰(term(t+1)) in the monomial bases.
pub fn x_mult_matrix<T: Scalar>(ring: RingSpec, twists: &[i64], var: usize) -> PolyMatrix<T> {
    let rows: Vec<i64> = twists.iter().map(|a| a + 1).collect();
    let mut m = PolyMatrix::zero(ring, rows, twists.to_vec());
    for i in 0..twists.len() {
        m.set_entry(i, i, HomogPoly::variable(ring.nvars(), var));
    }
    m
}

/// Side-by-side concatenation of polynomial matrices with a common row term.
pub fn hstack_polymats<T: Scalar>(ring: RingSpec, mats: &[&PolyMatrix<T>]) -> PolyMatrix<T> {
    assert!(!mats.is_empty());
    let rows = mats[0].row_twists.clone();
    let col_groups: Vec<Vec<i64>> = mats.iter().map(|m| m.col_twists.clone()).collect();
    let blocks: Vec<Vec<Option<&PolyMatrix<T>>>> = vec![mats.iter().map(|m| Some(*m)).collect()];
    PolyMatrix::from_blocks(ring, &[rows], &col_groups, &blocks)
}

/// Graded global-section functor of a sheaf presented on the sections of a
/// split ambient term. At twist t the space is
///
///   { u ∈ H⁰(ambient(t)) : slice(out)·u = 0 and slice(M)·u ∈ im(slice(N))
///     for every (M, N) in thru }  modulo  Σ im(slice(inc)).
///
/// All presentations used by the resolver (quotients, kernels, subquotients,
/// kernels modulo an image) are instances of this shape.
#[derive(Debug, Clone)]
pub struct SectionFunctor<T> {
    pub ring: RingSpec,
    /// Twists of the ambient split term carrying the presentation.
    pub ambient: Vec<i64>,
    /// Maps out of the ambient whose slices vanish on the space.
    pub out: Vec<PolyMatrix<T>>,
    /// Pairs (M, N) imposing slice(M)·u ∈ im(slice(N)).
    pub thru: Vec<(PolyMatrix<T>, PolyMatrix<T>)>,
    /// Maps into the ambient whose slice images are quotiented out.
    pub inc: Vec<PolyMatrix<T>>,
    /// No minimal generator of the section module lives above this degree.
    pub reg_bound: i64,
}

impl<T: Scalar> SectionFunctor<T> {
    /// The section space at one twist, presented on the ambient monomial
    /// coordinates.
    pub fn space(&self, t: i64) -> HomologySpace<T> {
        let amb = ambient_h0_dim(self.ring, &self.ambient, t);
        let mut incoming = Mat::zero(amb, 0);
        for m in &self.inc {
            incoming = incoming.hstack(&m.graded_piece(t));
        }
        let outgoing = if self.thru.is_empty() {
            let mut out = Mat::zero(0, amb);
            for m in &self.out {
                out = out.vstack(&m.graded_piece(t));
            }
            out
        } else {
            // Solve the joint system over (u, z_1, …): hard constraints kill
            // u directly, each thru pair contributes slice(M)·u − slice(N)·z.
            let mslices: Vec<Mat<T>> = self.thru.iter().map(|(m, _)| m.graded_piece(t)).collect();
            let nslices: Vec<Mat<T>> = self.thru.iter().map(|(_, n)| n.graded_piece(t)).collect();
            let zcols: Vec<usize> = nslices.iter().map(|s| s.cols).collect();
            let total = amb + zcols.iter().sum::<usize>();
            let mut rows: Vec<Vec<T>> = Vec::new();
            for m in &self.out {
                let s = m.graded_piece(t);
                for r in 0..s.rows {
                    let mut row = vec![T::zero(); total];
                    for c in 0..amb {
                        row[c] = s[(r, c)].clone();
                    }
                    rows.push(row);
                }
            }
            for (k, ms) in mslices.iter().enumerate() {
                let zoff = amb + zcols[..k].iter().sum::<usize>();
                let ns = &nslices[k];
                for r in 0..ms.rows {
                    let mut row = vec![T::zero(); total];
                    for c in 0..amb {
                        row[c] = ms[(r, c)].clone();
                    }
                    for c in 0..ns.cols {
                        row[zoff + c] = -ns[(r, c)].clone();
                    }
                    rows.push(row);
                }
            }
            let big = if rows.is_empty() {
                Mat::zero(0, total)
            } else {
                Mat::from_rows(rows)
            };
            let ker = big.kernel_basis();
            let w_cols: Vec<Vec<T>> = ker.iter().map(|v| v[..amb].to_vec()).collect();
            let w = if w_cols.is_empty() {
                Mat::zero(amb, 0)
            } else {
                Mat::from_cols(w_cols)
            };
            // Annihilator of the projected solution space: its kernel is
            // exactly that subspace again.
            let ann = w.transpose().kernel_basis();
            if ann.is_empty() {
                Mat::zero(0, amb)
            } else {
                Mat::from_rows(ann)
            }
        };
        HomologySpace::new(&outgoing, &incoming)
    }

    pub fn dim(&self, t: i64) -> usize {
        self.space(t).dim()
    }
}

/// One minimal generator of a graded section module: its degree and its
/// ambient monomial-coordinate vector at that degree.
#[derive(Debug, Clone)]
pub struct SectionGenerator<T> {
    pub degree: i64,
    pub coords: Vec<T>,
}

/// Minimal generators of the section module of a functor, found degree by
/// degree as a complement of the image of multiplication by linear forms.
/// Deterministic: generators are earliest basis vectors in each degree.
pub fn minimal_generators<T: Scalar>(f: &SectionFunctor<T>) -> Vec<SectionGenerator<T>> {
    let mut gens = Vec::new();
    if f.ambient.is_empty() {
        return gens;
    }
    let lo = -f.ambient.iter().max().unwrap();
    let hi = f.reg_bound;
    let nv = f.ring.nvars();
    let mut prev: Option<HomologySpace<T>> = None;
    for d in lo..=hi {
        let sp = f.space(d);
        if sp.dim() == 0 {
            prev = Some(sp);
            continue;
        }
        let mut mult_cols: Vec<Vec<T>> = Vec::new();
        if let Some(p) = &prev {
            if p.dim() > 0 {
                for var in 0..nv {
                    let xs = x_mult_matrix::<T>(f.ring, &f.ambient, var).graded_piece(d - 1);
                    for j in 0..p.dim() {
                        let img = xs.mul_vec(&p.basis.col(j));
                        let coords = sp
                            .reduce(&img)
                            .expect("multiplication by a linear form maps sections to sections");
                        mult_cols.push(coords);
                    }
                }
            }
        }
        let k = sp.dim();
        let mc = mult_cols.len();
        let c = if mult_cols.is_empty() {
            Mat::identity(k)
        } else {
            Mat::from_cols(mult_cols).hstack(&Mat::identity(k))
        };
        for p in c.image_pivot_cols() {
            if p >= mc {
                gens.push(SectionGenerator {
                    degree: d,
                    coords: sp.basis.col(p - mc),
                });
            }
        }
        prev = Some(sp);
    }
    gens
}

/// Packs generator sections into the polynomial matrix ⊕O(−d_g) → ambient.
pub fn generators_matrix<T: Scalar>(
    ring: RingSpec,
    ambient: &[i64],
    gens: &[SectionGenerator<T>],
) -> PolyMatrix<T> {
    let col_twists: Vec<i64> = gens.iter().map(|g| -g.degree).collect();
    let mut m = PolyMatrix::zero(ring, ambient.to_vec(), col_twists);
    let nv = ring.nvars();
    for (gj, g) in gens.iter().enumerate() {
        let mut off = 0;
        for (i, a) in ambient.iter().enumerate() {
            let deg = g.degree + a;
            let cnt = monomial_count(nv, deg);
            if cnt > 0 {
                let basis = monomials(nv, deg);
                let p = HomogPoly::from_coeffs(nv, deg, &basis, &g.coords[off..off + cnt]);
                if !p.is_zero() {
                    m.set_entry(i, gj, p);
                }
                off += cnt;
            }
        }
    }
    m
}

/// A split resolution built from a section functor, with the augmentation
/// matrix from the new bottom term into the functor's ambient term.
#[derive(Debug, Clone)]
pub struct ResolvedSheaf<T> {
    pub resolution: SplitComplex<T>,
    pub augmentation: PolyMatrix<T>,
}

/// Builds a split left resolution of the sheaf whose sections the functor
/// computes, by iterated minimal epimorphisms: minimal generators give the
/// bottom term, then each syzygy sheaf is presented by its own kernel functor
/// and the process repeats up to the requested length, where the last syzygy
/// must itself be split. `sheaf_reg` is a regularity bound for the resolved
/// sheaf, driving the generator-degree windows of the syzygy stages.
pub fn resolve_sheaf<T: Scalar>(
    functor: &SectionFunctor<T>,
    expected_rank: i64,
    target_length: i64,
    sheaf_reg: i64,
) -> Result<ResolvedSheaf<T>> {
    let ring = functor.ring;
    if target_length < 0 {
        return Err(Error::precondition("resolution length must be nonnegative"));
    }
    let gens0 = minimal_generators(functor);
    if gens0.is_empty() {
        if expected_rank != 0 {
            return Err(Error::internal(
                "section module has no generators but the sheaf has nonzero rank",
            ));
        }
        return Ok(ResolvedSheaf {
            resolution: SplitComplex::empty(ring),
            augmentation: PolyMatrix::zero(ring, functor.ambient.clone(), vec![]),
        });
    }
    let u0 = generators_matrix(ring, &functor.ambient, &gens0);
    let mut terms: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    terms.insert(0, u0.col_twists.clone());
    let mut diffs: BTreeMap<i64, PolyMatrix<T>> = BTreeMap::new();
    // rank of the next syzygy sheaf K_1 = ker(L'_0 → sheaf)
    let mut rank_k = gens0.len() as i64 - expected_rank;
    let mut prev_u = u0.clone();
    let mut prev_maxdeg = gens0.iter().map(|g| g.degree).max().unwrap();
    let mut reg_prev = sheaf_reg;
    for stage in 1..=target_length {
        if rank_k < 0 {
            return Err(Error::internal(
                "rank bookkeeping went negative while resolving",
            ));
        }
        let regb = prev_maxdeg.max(reg_prev + 1);
        let ambient = terms[&(stage - 1)].clone();
        let fj = if stage == 1 && !functor.inc.is_empty() {
            // Kernel of the augmentation: sections v with u0·v in the image
            // part of the original presentation.
            let incs: Vec<&PolyMatrix<T>> = functor.inc.iter().collect();
            let n_stack = hstack_polymats(ring, &incs);
            SectionFunctor {
                ring,
                ambient,
                out: vec![],
                thru: vec![(prev_u.clone(), n_stack)],
                inc: vec![],
                reg_bound: regb,
            }
        } else {
            SectionFunctor {
                ring,
                ambient,
                out: vec![prev_u.clone()],
                thru: vec![],
                inc: vec![],
                reg_bound: regb,
            }
        };
        let gens = minimal_generators(&fj);
        if gens.is_empty() {
            if rank_k != 0 {
                return Err(Error::internal(format!(
                    "syzygy sheaf of rank {rank_k} has no section generators"
                )));
            }
            break;
        }
        if stage == target_length && gens.len() as i64 != rank_k {
            return Err(Error::internal(format!(
                "final syzygy is not split: {} generators for rank {rank_k}",
                gens.len()
            )));
        }
        let uj = generators_matrix(ring, &fj.ambient, &gens);
        terms.insert(stage, uj.col_twists.clone());
        diffs.insert(stage, uj.clone());
        rank_k = gens.len() as i64 - rank_k;
        prev_u = uj;
        prev_maxdeg = gens.iter().map(|g| g.degree).max().unwrap();
        reg_prev = regb;
    }
    let resolution = SplitComplex::new(ring, terms, diffs)?;
    Ok(ResolvedSheaf {
        resolution,
        augmentation: u0,
    })
}
