//! Linear solvers for chain maps and homotopies between split complexes.
//!
//! Both problems are linear in the unknown monomial coefficients of the
//! component matrices: commutation (or the homotopy identity) expands into
//! one scalar equation per monomial of each matrix cell, and prescribed
//! graded slices add inhomogeneous rows. Solutions are deterministic — the
//! unknown ordering is fixed (index, row, column, monomial) and all free
//! parameters are set to zero.

use std::collections::BTreeMap;

use crate::complex::{ChainMap, Homotopy, SplitComplex};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Mat;
use crate::poly::{monomials, Exponent, HomogPoly};
use crate::polymat::PolyMatrix;

/// Prescribes the graded slice of one component: the matrix of
/// `component(index).graded_piece(degree)` must equal `value`.
#[derive(Debug, Clone)]
pub struct SliceConstraint<T> {
    pub index: i64,
    pub degree: i64,
    pub value: Mat<T>,
}

/// Flat layout of unknown monomial coefficients, ordered by
/// (homological index, row, column, monomial).
struct Layout {
    blocks: BTreeMap<(i64, usize, usize), (usize, Vec<Exponent>)>,
    total: usize,
}

impl Layout {
    /// `shapes`: per index, (row twists, col twists) of the unknown matrix.
    fn new(nvars: usize, shapes: &BTreeMap<i64, (Vec<i64>, Vec<i64>)>) -> Self {
        let mut blocks = BTreeMap::new();
        let mut total = 0usize;
        for (&i, (rows, cols)) in shapes {
            for (r, rt) in rows.iter().enumerate() {
                for (c, ct) in cols.iter().enumerate() {
                    let basis = monomials(nvars, rt - ct);
                    if basis.is_empty() {
                        continue;
                    }
                    let len = basis.len();
                    blocks.insert((i, r, c), (total, basis));
                    total += len;
                }
            }
        }
        Layout { blocks, total }
    }

    fn coeff_index(&self, i: i64, r: usize, c: usize, expo: &[u16]) -> Option<usize> {
        let (off, basis) = self.blocks.get(&(i, r, c))?;
        let pos = basis.iter().position(|b| b.as_slice() == expo)?;
        Some(off + pos)
    }

    /// Writes a solution vector back into component matrices.
    fn decode<T: Scalar>(
        &self,
        ring: crate::poly::RingSpec,
        shapes: &BTreeMap<i64, (Vec<i64>, Vec<i64>)>,
        x: &[T],
    ) -> BTreeMap<i64, PolyMatrix<T>> {
        let mut comps = BTreeMap::new();
        for ((i, r, c), (off, basis)) in &self.blocks {
            let coeffs = &x[*off..off + basis.len()];
            if coeffs.iter().all(|v| v.is_zero()) {
                continue;
            }
            let (rows, cols) = &shapes[i];
            let w = rows[*r] - cols[*c];
            let poly = HomogPoly::from_coeffs(ring.nvars(), w, basis, coeffs);
            let comp = comps
                .entry(*i)
                .or_insert_with(|| PolyMatrix::zero(ring, rows.clone(), cols.clone()));
            comp.set_entry(*r, *c, poly);
        }
        comps
    }
}

/// Sparse accumulating system of scalar linear equations.
struct System<T> {
    rows: Vec<BTreeMap<usize, T>>,
    rhs: Vec<T>,
    cols: usize,
}

impl<T: Scalar> System<T> {
    fn new(cols: usize) -> Self {
        System {
            rows: Vec::new(),
            rhs: Vec::new(),
            cols,
        }
    }

    fn push_row(&mut self, row: BTreeMap<usize, T>, rhs: T) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    fn solve(self) -> Option<Vec<T>> {
        let mut m = Mat::zero(self.rows.len(), self.cols);
        let mut b = Mat::zero(self.rows.len(), 1);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                m[(i, j)] = v.clone();
            }
            b[(i, 0)] = self.rhs[i].clone();
        }
        let x = m.solve(&b)?;
        Some((0..self.cols).map(|j| x[(j, 0)].clone()).collect())
    }
}

/// Adds the equations saying `sum_s known[r,s]·unknown_i[s,c]` (if
/// `left` is true) or `sum_s unknown_i[r,s]·known[s,c]` contributes with the
/// given sign to the cell equations at `rows[(d, r, c, monomial)]`.
#[allow(clippy::too_many_arguments)]
fn add_composition_terms<T: Scalar>(
    eqs: &mut BTreeMap<(usize, usize, Vec<u16>), BTreeMap<usize, T>>,
    layout: &Layout,
    unknown_index: i64,
    known: &PolyMatrix<T>,
    left: bool,
    negate: bool,
    cell_rows: usize,
    cell_cols: usize,
) {
    for r in 0..cell_rows {
        for c in 0..cell_cols {
            let inner = if left { known.cols() } else { known.rows() };
            for s in 0..inner {
                let (p, ur, uc) = if left {
                    (known.entry(r, s), s, c)
                } else {
                    (known.entry(s, c), r, s)
                };
                if p.is_zero() {
                    continue;
                }
                let Some((_, basis)) = layout.blocks.get(&(unknown_index, ur, uc)) else {
                    continue;
                };
                let basis = basis.clone();
                for e in &basis {
                    let Some(uidx) = layout.coeff_index(unknown_index, ur, uc, e) else {
                        continue;
                    };
                    for (pe, coef) in p.terms() {
                        let target: Vec<u16> =
                            e.iter().zip(pe.iter()).map(|(a, b)| a + b).collect();
                        let entry = eqs.entry((r, c, target)).or_default();
                        let cur = entry.entry(uidx).or_insert_with(T::zero);
                        let add = if negate {
                            -coef.clone()
                        } else {
                            coef.clone()
                        };
                        *cur = cur.clone() + add;
                    }
                }
            }
        }
    }
}

/// Finds a degree-0 chain map A → B satisfying the slice constraints, or
/// None if the linear system is infeasible. Free parameters are zero.
pub fn solve_chain_map<T: Scalar>(
    a: &SplitComplex<T>,
    b: &SplitComplex<T>,
    constraints: &[SliceConstraint<T>],
) -> Result<Option<ChainMap<T>>> {
    assert_eq!(a.ring, b.ring, "chain map needs a common ring");
    let ring = a.ring;

    // Unknown components live where both complexes have terms.
    let mut shapes: BTreeMap<i64, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
    for i in a.support() {
        if !b.term(i).is_empty() && !a.term(i).is_empty() {
            shapes.insert(i, (b.term(i), a.term(i)));
        }
    }
    let layout = Layout::new(ring.nvars(), &shapes);
    let mut sys: System<T> = System::new(layout.total);

    // Commutation: d^B_i ∘ φ_i − φ_{i−1} ∘ d^A_i = 0 wherever the composite
    // can be nonzero.
    let lo = a.min_index().min(b.min_index());
    let hi = a.max_index().max(b.max_index());
    for i in lo..=(hi + 1) {
        let tgt_rows = b.term(i - 1);
        let src_cols = a.term(i);
        if tgt_rows.is_empty() || src_cols.is_empty() {
            continue;
        }
        let mut eqs: BTreeMap<(usize, usize, Vec<u16>), BTreeMap<usize, T>> = BTreeMap::new();
        add_composition_terms(
            &mut eqs,
            &layout,
            i,
            &b.diff(i),
            true,
            false,
            tgt_rows.len(),
            src_cols.len(),
        );
        add_composition_terms(
            &mut eqs,
            &layout,
            i - 1,
            &a.diff(i),
            false,
            true,
            tgt_rows.len(),
            src_cols.len(),
        );
        for (_, row) in eqs {
            sys.push_row(row, T::zero());
        }
    }

    // Slice constraints.
    for con in constraints {
        let rows = b.term(con.index);
        let cols = a.term(con.index);
        let mut row_coords = Vec::new();
        for (r, rt) in rows.iter().enumerate() {
            for m in monomials(ring.nvars(), con.degree + rt) {
                row_coords.push((r, m));
            }
        }
        let mut col_coords = Vec::new();
        for (c, ct) in cols.iter().enumerate() {
            for m in monomials(ring.nvars(), con.degree + ct) {
                col_coords.push((c, m));
            }
        }
        if con.value.rows != row_coords.len() || con.value.cols != col_coords.len() {
            return Err(Error::precondition(format!(
                "slice constraint at index {} degree {}: expected {}x{}, got {}x{}",
                con.index,
                con.degree,
                row_coords.len(),
                col_coords.len(),
                con.value.rows,
                con.value.cols
            )));
        }
        for (ri, (r, m_out)) in row_coords.iter().enumerate() {
            for (ci, (c, m_in)) in col_coords.iter().enumerate() {
                let expo: Option<Vec<u16>> = m_out
                    .iter()
                    .zip(m_in.iter())
                    .map(|(o, i)| o.checked_sub(*i))
                    .collect();
                let mut row = BTreeMap::new();
                if let Some(e) = expo {
                    if let Some(uidx) = layout.coeff_index(con.index, *r, *c, &e) {
                        row.insert(uidx, T::one());
                    }
                }
                sys.push_row(row, con.value[(ri, ci)].clone());
            }
        }
    }

    let Some(x) = sys.solve() else {
        return Ok(None);
    };
    let comps = layout.decode(ring, &shapes, &x);
    Ok(Some(ChainMap::new(a.clone(), b.clone(), comps)?))
}

/// Finds h with dh + hd = f − g, or None if f and g are not homotopic.
pub fn solve_homotopy<T: Scalar>(f: &ChainMap<T>, g: &ChainMap<T>) -> Result<Option<Homotopy<T>>> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::precondition(
            "homotopy requires maps with the same source and target",
        ));
    }
    let x = &f.source;
    let y = &f.target;
    let ring = x.ring;
    let diff = f.sub(g);

    // Unknowns h_i : X_i → Y_{i+1}.
    let mut shapes: BTreeMap<i64, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
    for i in x.support() {
        if !y.term(i + 1).is_empty() {
            shapes.insert(i, (y.term(i + 1), x.term(i)));
        }
    }
    let layout = Layout::new(ring.nvars(), &shapes);
    let mut sys: System<T> = System::new(layout.total);

    // Identity d^Y_{i+1} h_i + h_{i−1} d^X_i = (f−g)_i at each index with
    // X_i and Y_i nonzero.
    let lo = x.min_index().min(y.min_index());
    let hi = x.max_index().max(y.max_index());
    for i in lo..=hi {
        let tgt_rows = y.term(i);
        let src_cols = x.term(i);
        if tgt_rows.is_empty() || src_cols.is_empty() {
            continue;
        }
        let mut eqs: BTreeMap<(usize, usize, Vec<u16>), BTreeMap<usize, T>> = BTreeMap::new();
        add_composition_terms(
            &mut eqs,
            &layout,
            i,
            &y.diff(i + 1),
            true,
            false,
            tgt_rows.len(),
            src_cols.len(),
        );
        add_composition_terms(
            &mut eqs,
            &layout,
            i - 1,
            &x.diff(i),
            false,
            false,
            tgt_rows.len(),
            src_cols.len(),
        );
        // Right-hand side: coefficients of (f−g)_i, including cells with no
        // unknown contributions (forcing infeasibility when nonzero).
        let d = diff.component(i);
        for (r, rt) in tgt_rows.iter().enumerate() {
            for (c, ct) in src_cols.iter().enumerate() {
                let p = d.entry(r, c);
                let basis = monomials(ring.nvars(), rt - ct);
                if basis.is_empty() {
                    continue;
                }
                for e in &basis {
                    let row = eqs.remove(&(r, c, e.clone())).unwrap_or_default();
                    sys.push_row(row, p.coeff(e));
                }
            }
        }
        // Every contribution lands inside a declared cell basis because
        // degrees add exactly; nothing can be left over.
        debug_assert!(eqs.is_empty());
    }

    let Some(xsol) = sys.solve() else {
        return Ok(None);
    };
    let comps = layout.decode(ring, &shapes, &xsol);
    let mut h = Homotopy::zero(x.clone(), y.clone());
    h.components = comps;
    debug_assert!(h.witnesses(f, g), "solver produced a non-witnessing homotopy");
    Ok(Some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{induced_rown_map, TwoRow};
    use crate::field::FieldSpec;
    use crate::koszul::{full_contraction_complex, koszul_omega, tau_step_omega};
    use crate::poly::RingSpec;
    use crate::Rational;
    use num_traits::Zero;

    fn ring_q(n: usize) -> RingSpec {
        RingSpec::new(FieldSpec::Rationals, n).unwrap()
    }

    #[test]
    fn identity_recovered_from_bottom_slice() {
        let r = ring_q(2);
        let a = koszul_omega::<Rational>(r, 1, 0).unwrap();
        // Prescribing the bottom component's slice to be the identity at one
        // twist pins the scalar: the unique solution is the identity map.
        let slice_dim = a.diff(1).graded_piece(2).rows;
        let con = SliceConstraint {
            index: 0,
            degree: 2,
            value: Mat::<Rational>::identity(slice_dim),
        };
        let f = solve_chain_map(&a, &a, &[con]).unwrap().unwrap();
        let id = ChainMap::identity(&a);
        assert_eq!(f, id);
    }

    #[test]
    fn shifted_target_with_demands_is_infeasible() {
        let r = ring_q(2);
        let a = koszul_omega::<Rational>(r, 1, 0).unwrap();
        // Shifted out of overlap: only the zero map exists, found trivially.
        let f = solve_chain_map(&a, &a.shift(2), &[]).unwrap().unwrap();
        assert!(f.is_zero());
        // Twisted down, every component needs negative polynomial degree, so
        // demanding a nonzero slice value is infeasible.
        let b = a.twist(-1);
        let mut want = Mat::<Rational>::zero(3, 9);
        want[(0, 0)] = Rational::from_integer(1.into());
        let con = SliceConstraint {
            index: 0,
            degree: 3,
            value: want,
        };
        let sol = solve_chain_map(&a, &b, &[con]).unwrap();
        assert!(sol.is_none());
    }

    #[test]
    fn homotopy_of_equal_maps_is_zero() {
        let r = ring_q(2);
        let a = koszul_omega::<Rational>(r, 1, 0).unwrap();
        let id = ChainMap::identity(&a);
        let h = solve_homotopy(&id, &id).unwrap().unwrap();
        assert!(h.components.is_empty());
    }

    #[test]
    fn recovers_a_homotopy_from_a_planted_one() {
        let r = ring_q(2);
        let x = full_contraction_complex::<Rational>(r, 0);
        let y = x.twist(1);
        // Plant h0 : X_i → Y_{i+1} with deterministic nonzero constants.
        let mut h0 = Homotopy::zero(x.clone(), y.clone());
        for i in x.min_index()..x.max_index() {
            let rows = y.term(i + 1);
            let cols = x.term(i);
            let mut m = PolyMatrix::<Rational>::zero(r, rows.clone(), cols.clone());
            for rr in 0..rows.len() {
                for cc in 0..cols.len() {
                    if rows[rr] == cols[cc] {
                        let v = Rational::from_integer(((rr + 2 * cc + 1) as i64).into());
                        m.set_entry(rr, cc, HomogPoly::constant(r.nvars(), v));
                    }
                }
            }
            if !m.is_zero() {
                h0.components.insert(i, m);
            }
        }
        assert!(!h0.components.is_empty());
        // f = dh0 + h0d, g = 0.
        let mut comps = BTreeMap::new();
        for i in x.support() {
            let a_part = if h0.components.contains_key(&i) {
                y.diff(i + 1).compose(&h0.components[&i])
            } else {
                PolyMatrix::zero(r, y.term(i), x.term(i))
            };
            let b_part = if h0.components.contains_key(&(i - 1)) {
                h0.components[&(i - 1)].compose(&x.diff(i))
            } else {
                PolyMatrix::zero(r, y.term(i), x.term(i))
            };
            let s = a_part.add(&b_part);
            if !s.is_zero() {
                comps.insert(i, s);
            }
        }
        let f = ChainMap::new(x.clone(), y.clone(), comps).unwrap();
        assert!(!f.is_zero());
        let g = ChainMap::zero(x.clone(), y.clone());
        let h = solve_homotopy(&f, &g).unwrap().expect("planted homotopy exists");
        assert!(h.witnesses(&f, &g));
    }

    #[test]
    fn maps_with_distinct_cohomology_action_are_not_homotopic() {
        let r = ring_q(2);
        let a = koszul_omega::<Rational>(r, 1, 0).unwrap();
        let id = ChainMap::identity(&a);
        let zero = ChainMap::zero(a.clone(), a.clone());
        assert!(solve_homotopy(&id, &zero).unwrap().is_none());
    }

    #[test]
    fn koszul_step_lift_matches_on_cohomology() {
        let r = ring_q(3);
        let a = koszul_omega::<Rational>(r, 1, 0).unwrap();
        let tau = tau_step_omega::<Rational>(r, 1, 0).unwrap();
        let b = tau.target.clone();
        // Prescribe the index-1 component (a 4×4 constant block) to match
        // the connecting step, then solve for the rest.
        let want = tau.component(1).graded_piece(3);
        let con = SliceConstraint {
            index: 1,
            degree: 3,
            value: want,
        };
        let f = solve_chain_map(&a, &b, &[con]).unwrap().expect("lift exists");
        // Same induced map on cohomology as the connecting step itself.
        let src_page = TwoRow::compute(&a, 0);
        let tgt_page = TwoRow::compute(&b, 0);
        let m_f = induced_rown_map(&f, &src_page, &tgt_page, 2);
        let m_tau = induced_rown_map(&tau, &src_page, &tgt_page, 2);
        assert_eq!(m_f, m_tau);
        assert!(!m_tau[(0, 0)].is_zero());
        // And the two lifts are honestly homotopic.
        let h = solve_homotopy(&f, &tau).unwrap();
        assert!(h.is_some());
    }
}
