//! Deterministic random generation for tests, witness points and corpus
//! construction. Everything is seeded explicitly; identical seeds give
//! identical streams on all platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::field::{FieldSpec, Scalar};
use crate::poly::{monomials, HomogPoly, RingSpec};
use crate::polymat::PolyMatrix;

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// A "small" scalar: uniform in the prime field, or an integer in [-4, 4]
/// over the rationals.
pub fn random_scalar<T: Scalar>(spec: &FieldSpec, rng: &mut ChaCha20Rng) -> T {
    match spec {
        FieldSpec::Prime(p) => T::from_integer(spec, rng.gen_range(0..*p) as i64),
        FieldSpec::Rationals => T::from_integer(spec, rng.gen_range(-4..=4)),
    }
}

pub fn random_nonzero_scalar<T: Scalar>(spec: &FieldSpec, rng: &mut ChaCha20Rng) -> T {
    loop {
        let c: T = random_scalar(spec, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random homogeneous polynomial of the given degree (zero if degree < 0).
pub fn random_poly<T: Scalar>(
    ring: &RingSpec,
    degree: i64,
    rng: &mut ChaCha20Rng,
) -> HomogPoly<T> {
    let mut p = HomogPoly::zero_poly(ring.nvars(), degree);
    for e in monomials(ring.nvars(), degree) {
        p.add_term(e, random_scalar(&ring.field, rng));
    }
    p
}

/// Random matrix with the prescribed twists (entries of forced degree).
pub fn random_polymat<T: Scalar>(
    ring: &RingSpec,
    row_twists: Vec<i64>,
    col_twists: Vec<i64>,
    rng: &mut ChaCha20Rng,
) -> PolyMatrix<T> {
    let mut m = PolyMatrix::zero(*ring, row_twists, col_twists);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let d = m.row_twists[i] - m.col_twists[j];
            m.set_entry(i, j, random_poly(ring, d, rng));
        }
    }
    m
}

/// Random symmetric matrix presenting a form ⊕O(a_j)(−m) → ⊕(O(a_j))^∨:
/// row twists −a_i, column twists a_j − m, entry degrees m − a_i − a_j.
pub fn random_symmetric_form<T: Scalar>(
    ring: &RingSpec,
    twists: &[i64],
    m: i64,
    rng: &mut ChaCha20Rng,
) -> PolyMatrix<T> {
    let row: Vec<i64> = twists.iter().map(|a| -a).collect();
    let col: Vec<i64> = twists.iter().map(|a| a - m).collect();
    let mut q = PolyMatrix::zero(*ring, row, col);
    for i in 0..twists.len() {
        for j in i..twists.len() {
            let d = q.row_twists[i] - q.col_twists[j];
            let p: HomogPoly<T> = random_poly(ring, d, rng);
            q.set_entry(i, j, p.clone());
            if i != j {
                q.set_entry(j, i, p);
            }
        }
    }
    q
}

/// A random point of projective space with a nonzero first-active coordinate.
pub fn random_point<T: Scalar>(ring: &RingSpec, rng: &mut ChaCha20Rng) -> Vec<T> {
    loop {
        let pt: Vec<T> = (0..ring.nvars())
            .map(|_| random_scalar(&ring.field, rng))
            .collect();
        if pt.iter().any(|c| !c.is_zero()) {
            return pt;
        }
    }
}
