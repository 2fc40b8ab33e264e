//! Exact arithmetic for quadratic forms on vector bundles over projective
//! space.
//!
//! Everything here works over an exact field: the rationals or a prime field
//! of odd characteristic. Bundles are presented by split resolutions whose
//! terms are sums of line bundles, quadratic forms by symmetric polynomial
//! matrices on the presenting term, and all sheaf cohomology is computed from
//! graded pieces of polynomial matrices. On top of that sit Witt-theoretic
//! invariants, hyperbolic reduction and extension, elementary modifications,
//! a normal-form pipeline, and a decision procedure for hyperbolic
//! equivalence that emits replayable certificates.

pub mod bundle;
pub mod cech;
pub mod chainsolve;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod ext;
pub mod field;
pub mod form;
pub mod koszul;
pub mod matrix;
pub mod minimal;
pub mod poly;
pub mod polymat;
pub mod rng;
pub mod witt;

pub use error::{Error, ErrorKind, Result};
pub use field::{FieldSpec, Fp, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
