//! Ground fields for all exact computations: the rationals and odd prime fields.
//!
//! Every algorithm in this crate is generic over [`Scalar`], a field-like trait
//! built on `num-traits`. Two implementations are provided: `BigRational` for
//! characteristic zero and [`Fp`] for odd prime characteristic. Floating point
//! types are intentionally not supported; all invariants here are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Which ground field computations run over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FieldSpec {
    /// The field of rational numbers.
    Rationals,
    /// The prime field with `p` elements, `p` an odd prime (characteristic 2 is excluded).
    Prime(u64),
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime(p) => {
                if *p < 3 || !is_prime_u64(*p) || *p % 2 == 0 {
                    Err(Error::precondition(format!(
                        "field modulus must be an odd prime >= 3, got {p}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Parses "Q" or "Fp:<p>".
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad prime field spec {s:?}")))?;
            let spec = FieldSpec::Prime(p);
            spec.validate()?;
            return Ok(spec);
        }
        Err(Error::parse(format!(
            "unknown field {s:?}; expected \"Q\" or \"Fp:<p>\""
        )))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exact field scalar. `zero()`/`one()` are context free; prime-field elements
/// acquire their modulus on first contact with a reduced element.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Embeds a signed integer, reduced into the field described by `spec`.
    fn from_integer(spec: &FieldSpec, n: i64) -> Self;

    /// Multiplicative inverse. Panics on zero (callers must guard).
    fn inv(&self) -> Self;

    /// Parses the field's scalar syntax: "-3", "3/7", and for prime fields "5 mod 11".
    fn parse(spec: &FieldSpec, s: &str) -> Result<Self>;

    /// Canonical rendering, inverse to `parse`.
    fn render(&self) -> String {
        format!("{self}")
    }

    /// Short rendering for use inside polynomial strings, where the ambient
    /// field is clear from context: "3/7" over the rationals, "5" over a
    /// prime field (no "mod p" suffix).
    fn render_compact(&self) -> String {
        self.render()
    }

    /// True if the element is a nonzero square in the field.
    fn is_square(&self) -> bool;

    /// The field this element belongs to, if it has been pinned to one.
    fn field(&self) -> Option<FieldSpec>;
}

impl Scalar for BigRational {
    fn from_integer(_spec: &FieldSpec, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }

    fn parse(_spec: &FieldSpec, s: &str) -> Result<Self> {
        let t = s.trim();
        t.parse::<BigRational>()
            .or_else(|_| t.parse::<BigInt>().map(BigRational::from_integer))
            .map_err(|_| Error::parse(format!("bad rational scalar {s:?}")))
    }

    fn is_square(&self) -> bool {
        if self.is_zero() || self.is_negative() {
            return false;
        }
        // n/d is a square iff n*d is a perfect square for coprime n, d.
        let nd = self.numer() * self.denom();
        let r = nd.sqrt();
        &r * &r == nd
    }

    fn field(&self) -> Option<FieldSpec> {
        Some(FieldSpec::Rationals)
    }
}

/// Element of a prime field with runtime modulus. Modulus 0 marks an integer
/// constant not yet reduced (as produced by context-free `zero()`/`one()`);
/// binary operations coerce such constants to the partner's modulus.
#[derive(Clone, Copy)]
pub struct Fp {
    v: i64,
    p: u64,
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = Fp::join(*self, *other);
        a.v == b.v
    }
}

impl Eq for Fp {}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        debug_assert!(p >= 3);
        Fp {
            v: v.rem_euclid(p as i64),
            p,
        }
    }

    pub fn integer(v: i64) -> Self {
        Fp { v, p: 0 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> i64 {
        self.v
    }

    fn coerced(self, p: u64) -> Self {
        if self.p == p {
            self
        } else if self.p == 0 {
            Fp::new(self.v, p)
        } else {
            panic!("mixed prime moduli {} and {}", self.p, p)
        }
    }

    fn join(a: Fp, b: Fp) -> (Fp, Fp, u64) {
        let p = if a.p != 0 { a.p } else { b.p };
        if p == 0 {
            (a, b, 0)
        } else {
            (a.coerced(p), b.coerced(p), p)
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "{}", self.v)
        } else {
            write!(f, "{} mod {}", self.v, self.p)
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, p) = Fp::join(self, rhs);
        if p == 0 {
            Fp::integer(a.v.checked_add(b.v).expect("integer constant overflow"))
        } else {
            Fp::new(a.v + b.v, p)
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.p == 0 {
            Fp::integer(-self.v)
        } else {
            Fp::new(-self.v, self.p)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, p) = Fp::join(self, rhs);
        let wide = (a.v as i128) * (b.v as i128);
        if p == 0 {
            Fp::integer(i64::try_from(wide).expect("integer constant overflow"))
        } else {
            Fp::new((wide.rem_euclid(p as i128)) as i64, p)
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv()
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp::integer(0)
    }
    fn is_zero(&self) -> bool {
        if self.p == 0 {
            self.v == 0
        } else {
            self.v.rem_euclid(self.p as i64) == 0
        }
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp::integer(1)
    }
    fn is_one(&self) -> bool {
        if self.p == 0 {
            self.v == 1
        } else {
            self.v.rem_euclid(self.p as i64) == 1
        }
    }
}

impl PartialOrd for Fp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        // Ordering only used for deterministic tie-breaking in containers.
        let (a, b, _) = Fp::join(*self, *other);
        (a.v, a.p).partial_cmp(&(b.v, b.p))
    }
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl Scalar for Fp {
    fn from_integer(spec: &FieldSpec, n: i64) -> Self {
        match spec {
            FieldSpec::Prime(p) => Fp::new(n, *p),
            FieldSpec::Rationals => panic!("Fp scalar requested over the rationals"),
        }
    }

    fn inv(&self) -> Self {
        if self.p == 0 {
            // Unreduced constants are invertible only when they are units in Z.
            assert!(
                self.v == 1 || self.v == -1,
                "inverse of unreduced integer constant {}",
                self.v
            );
            return *self;
        }
        assert!(!self.is_zero(), "inverse of zero");
        let (g, x, _) = egcd(self.v, self.p as i64);
        debug_assert!(g == 1 || g == -1);
        Fp::new(x * g.signum(), self.p)
    }

    fn parse(spec: &FieldSpec, s: &str) -> Result<Self> {
        let p = match spec {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rationals => {
                return Err(Error::parse("prime-field scalar requested over Q"));
            }
        };
        let t = s.trim();
        let (num_part, mod_part) = match t.split_once(" mod ") {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t, None),
        };
        if let Some(mp) = mod_part {
            let q: u64 = mp
                .parse()
                .map_err(|_| Error::parse(format!("bad modulus in {s:?}")))?;
            if q != p {
                return Err(Error::parse(format!(
                    "scalar {s:?} has modulus {q}, field has {p}"
                )));
            }
        }
        if let Some((a, b)) = num_part.split_once('/') {
            let an: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad scalar {s:?}")))?;
            let bn: i64 = b
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad scalar {s:?}")))?;
            let den = Fp::new(bn, p);
            if den.is_zero() {
                return Err(Error::parse(format!("scalar {s:?} divides by zero mod {p}")));
            }
            Ok(Fp::new(an, p) / den)
        } else {
            let v: i64 = num_part
                .parse()
                .map_err(|_| Error::parse(format!("bad scalar {s:?}")))?;
            Ok(Fp::new(v, p))
        }
    }

    fn render_compact(&self) -> String {
        self.v.to_string()
    }

    fn is_square(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        assert!(self.p != 0, "squareness of unreduced constant");
        // Euler's criterion.
        pow_mod(self.v.rem_euclid(self.p as i64) as u64, (self.p - 1) / 2, self.p) == 1
    }

    fn field(&self) -> Option<FieldSpec> {
        if self.p == 0 {
            None
        } else {
            Some(FieldSpec::Prime(self.p))
        }
    }
}

pub fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb: u128 = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % p as u128;
        }
        bb = bb * bb % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// Legendre symbol (a/p) in {-1, 0, 1} for odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_coercion_and_ops() {
        let a = Fp::new(9, 7);
        assert_eq!(a.value(), 2);
        let b = Fp::one() + Fp::one(); // unreduced 2
        assert!(b.field().is_none());
        assert_eq!((a + b).value(), 4);
        assert_eq!((a * a).value(), 4);
        assert_eq!((a / a).value(), 1);
        assert!((a - a).is_zero());
        let inv3 = Fp::new(3, 7).inv();
        assert_eq!((Fp::new(3, 7) * inv3).value(), 1);
    }

    #[test]
    fn fp_parse_render() {
        let spec = FieldSpec::Prime(11);
        let x = <Fp as Scalar>::parse(&spec, "5 mod 11").unwrap();
        assert_eq!(x.value(), 5);
        let y = <Fp as Scalar>::parse(&spec, "-3").unwrap();
        assert_eq!(y.value(), 8);
        let z = <Fp as Scalar>::parse(&spec, "2/3").unwrap();
        assert_eq!((z * Fp::new(3, 11)).value(), 2);
        assert_eq!(x.render(), "5 mod 11");
    }

    #[test]
    fn rational_parse_and_square() {
        let spec = FieldSpec::Rationals;
        let x = <BigRational as Scalar>::parse(&spec, "3/7").unwrap();
        assert_eq!(x.render(), "3/7");
        assert!(<BigRational as Scalar>::parse(&spec, "4/9").unwrap().is_square());
        assert!(!<BigRational as Scalar>::parse(&spec, "-4/9").unwrap().is_square());
        assert!(!<BigRational as Scalar>::parse(&spec, "2").unwrap().is_square());
    }

    #[test]
    fn legendre_basics() {
        assert_eq!(legendre(2, 7), 1); // 3^2 = 2 mod 7
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(14, 7), 0);
    }

    #[test]
    fn field_spec_parse() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("Fp:11").unwrap(), FieldSpec::Prime(11));
        assert!(FieldSpec::parse("Fp:2").is_err());
        assert!(FieldSpec::parse("Fp:9").is_err());
        assert!(FieldSpec::parse("R").is_err());
    }
}
