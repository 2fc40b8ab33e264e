//! Dense exact linear algebra over a [`Scalar`] field: reduced row echelon
//! form, rank, kernels, solving, inverses and determinants.
//!
//! All pivot choices scan rows and columns in index order, so every output
//! (kernel bases, particular solutions, complements) is deterministic.

use crate::field::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn neg(&self) -> Self {
        Mat::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() * c.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out: Mat<T> = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc + self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn from_cols(cols: Vec<Vec<T>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        assert!(cols.iter().all(|x| x.len() == r), "ragged cols");
        Mat::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Mat::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self[(row_idx[i], col_idx[j])].clone()
        })
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // First nonzero entry in column c at or below row r.
            let mut piv = None;
            for i in r..self.rows {
                if !self[(i, c)].is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            self.swap_rows(r, piv);
            let inv = self[(r, c)].inv();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        self[(i, j)] = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel, one column per free variable, in column order.
    /// The free variable is set to 1 and the pivot variables are back-filled.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                if pc < free {
                    v[pc] = -m[(r, free)].clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b` for each column of `b`. Returns the particular
    /// solution with all free variables zero, or None if inconsistent.
    pub fn solve(&self, b: &Mat<T>) -> Option<Mat<T>> {
        assert_eq!(self.rows, b.rows);
        let mut aug = self.hstack(b);
        let pivots = aug.rref_in_place();
        // Inconsistent iff a pivot lands in the appended block.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zero(self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(pc, j)] = aug[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self) -> Option<Mat<T>> {
        assert_eq!(self.rows, self.cols);
        let sol = self.solve(&Mat::identity(self.rows))?;
        // solve() guarantees self * sol = id on pivot columns; a rank check
        // distinguishes genuine inverses.
        if self.rank() == self.rows {
            Some(sol)
        } else {
            None
        }
    }

    /// Determinant by fraction-free-friendly Gaussian elimination over a field.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let mut piv = None;
            for i in c..n {
                if !m[(i, c)].is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { return T::zero() };
            if piv != c {
                m.swap_rows(c, piv);
                det = -det;
            }
            det = det * m[(c, c)].clone();
            let inv = m[(c, c)].inv();
            for i in (c + 1)..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                }
            }
        }
        det
    }

    /// Image basis: the columns of `self` at the pivot positions of rref(self).
    pub fn image_pivot_cols(&self) -> Vec<usize> {
        let mut m = self.clone();
        m.rref_in_place()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Dimension and chosen basis data for the homology of a pair of composable
/// maps `incoming` then `outgoing` (outgoing ∘ incoming = 0): ker(outgoing)/im(incoming).
#[derive(Debug, Clone)]
pub struct HomologySpace<T> {
    /// Ambient chain space dimension.
    pub ambient: usize,
    /// Columns: cycle representatives of the chosen homology basis.
    pub basis: Mat<T>,
    /// Columns: a basis of the boundary subspace.
    pub boundaries: Mat<T>,
    /// Columns: a basis of the cycle subspace.
    pub cycles: Mat<T>,
}

impl<T: Scalar> HomologySpace<T> {
    /// outgoing: ambient -> somewhere (may have 0 rows), incoming: somewhere -> ambient.
    pub fn new(outgoing: &Mat<T>, incoming: &Mat<T>) -> Self {
        let ambient = outgoing.cols;
        assert_eq!(incoming.rows, ambient);
        let cycles = Mat::from_cols(outgoing.kernel_basis());
        let img_cols = incoming.image_pivot_cols();
        let boundaries = incoming.submatrix(
            &(0..ambient).collect::<Vec<_>>(),
            &img_cols,
        );
        // Extend boundaries to a basis of cycles, preferring earlier cycle columns.
        let mut chosen: Vec<Vec<T>> = Vec::new();
        let mut span = boundaries.clone();
        let mut rank = span.rank();
        for j in 0..cycles.cols {
            let cand = cycles.col(j);
            let trial = span.hstack(&Mat::from_cols(vec![cand.clone()]));
            let r2 = trial.rank();
            if r2 > rank {
                rank = r2;
                span = trial;
                chosen.push(cand);
            }
        }
        let basis = if chosen.is_empty() {
            Mat::zero(ambient, 0)
        } else {
            Mat::from_cols(chosen)
        };
        HomologySpace {
            ambient,
            basis,
            boundaries,
            cycles,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// Coordinates of a cycle in the chosen homology basis, or None if the
    /// vector is not a cycle modulo boundaries (i.e. not in cycles + boundaries).
    pub fn reduce(&self, v: &[T]) -> Option<Vec<T>> {
        let a = self.basis.hstack(&self.boundaries);
        let b = Mat::from_cols(vec![v.to_vec()]);
        let x = a.solve(&b)?;
        Some((0..self.basis.cols).map(|i| x[(i, 0)].clone()).collect())
    }

    /// The representative vector of homology coordinates `c`.
    pub fn lift(&self, c: &[T]) -> Vec<T> {
        assert_eq!(c.len(), self.basis.cols);
        let mut v = vec![T::zero(); self.ambient];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for i in 0..self.ambient {
                v[i] = v[i].clone() + self.basis[(i, j)].clone() * cj.clone();
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Fp};
    use num_traits::Zero;

    fn f7(v: i64) -> Fp {
        Fp::new(v, 7)
    }

    #[test]
    fn rref_rank_kernel() {
        let m = Mat::from_rows(vec![
            vec![f7(1), f7(2), f7(3)],
            vec![f7(2), f7(4), f7(6)],
        ]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_rows(vec![vec![f7(2), f7(1)], vec![f7(1), f7(1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        let b = Mat::from_cols(vec![vec![f7(3), f7(5)]]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul(&x), b);
        assert_eq!(m.det(), f7(1));
    }

    #[test]
    fn homology_space_of_exact_pair_is_zero() {
        // 0 -> F^2 --id--> F^2 -> 0 has no homology in the middle.
        let id = Mat::<Fp>::from_rows(vec![vec![f7(1), f7(0)], vec![f7(0), f7(1)]]);
        let out = Mat::zero(0, 2);
        let h = HomologySpace::new(&out, &id);
        assert_eq!(h.dim(), 0);
    }

    #[test]
    fn homology_reduce_roundtrip() {
        let spec = FieldSpec::Prime(7);
        let _ = spec;
        // d_out = [1 0; 0 0] acting F^2 -> F^2 (kernel = e2), d_in = 0.
        let out = Mat::from_rows(vec![vec![f7(1), f7(0)], vec![f7(0), f7(0)]]);
        let inc = Mat::zero(2, 0);
        let h = HomologySpace::new(&out, &inc);
        assert_eq!(h.dim(), 1);
        let coords = h.reduce(&[f7(0), f7(5)]).unwrap();
        assert_eq!(coords, vec![f7(5)]);
        assert_eq!(h.reduce(&[f7(1), f7(0)]), None);
        let v = h.lift(&coords);
        assert_eq!(v, vec![f7(0), f7(5)]);
    }
}
