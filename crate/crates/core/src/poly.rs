//! Homogeneous polynomials in the coordinate ring S = k[x0, ..., xn].
//!
//! Polynomials are sparse maps from exponent vectors to scalars and always
//! carry a formal degree (so the zero polynomial of any degree exists).
//! Monomial bases are ordered descending-lexicographically with x0 heaviest;
//! every deterministic choice downstream refers to this one ordering.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// The ambient graded ring: a ground field and the projective dimension `n`,
/// giving n+1 variables x0..xn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RingSpec {
    pub field: FieldSpec,
    pub n: usize,
}

impl RingSpec {
    pub fn new(field: FieldSpec, n: usize) -> Result<Self> {
        field.validate()?;
        if n < 1 {
            return Err(Error::precondition(format!(
                "projective dimension must be >= 1, got {n}"
            )));
        }
        Ok(RingSpec { field, n })
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }
}

/// Exponent vector of a monomial; length = number of variables.
pub type Exponent = Vec<u16>;

/// All exponent vectors of total degree `d` in `nvars` variables, in
/// descending lexicographic order (x0 exponent decreases first), so for
/// three variables and d = 1 the order is x0, x1, x2. Empty for d < 0.
pub fn monomials(nvars: usize, d: i64) -> Vec<Exponent> {
    if d < 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(monomial_count(nvars, d));
    let mut cur = vec![0u16; nvars];
    fill(&mut out, &mut cur, 0, d as u16);
    out
}

fn fill(out: &mut Vec<Exponent>, cur: &mut Exponent, var: usize, rem: u16) {
    if var + 1 == cur.len() {
        cur[var] = rem;
        out.push(cur.clone());
        return;
    }
    for e in (0..=rem).rev() {
        cur[var] = e;
        fill(out, cur, var + 1, rem - e);
    }
    cur[var] = 0;
}

/// dim S_d = C(d + nvars - 1, nvars - 1) for d >= 0, else 0.
pub fn monomial_count(nvars: usize, d: i64) -> usize {
    if d < 0 || nvars == 0 {
        return if nvars == 0 && d == 0 { 1 } else { 0 };
    }
    binomial(d as usize + nvars - 1, nvars - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Position of `expo` within `monomials(expo.len(), deg(expo))`, by search.
/// Degrees in this crate are small, so linear scan is fine and keeps a single
/// source of truth for the ordering.
pub fn monomial_index(basis: &[Exponent], expo: &[u16]) -> usize {
    basis
        .iter()
        .position(|b| b.as_slice() == expo)
        .expect("exponent not in basis")
}

/// Sparse homogeneous polynomial with a formal degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly<T> {
    pub nvars: usize,
    pub degree: i64,
    terms: BTreeMap<Exponent, T>,
}

impl<T: Scalar> HomogPoly<T> {
    pub fn zero_poly(nvars: usize, degree: i64) -> Self {
        HomogPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: T) -> Self {
        let mut p = HomogPoly::zero_poly(nvars, 0);
        p.add_term(vec![0; nvars], value);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut p = HomogPoly::zero_poly(nvars, 1);
        p.add_term(e, T::one());
        p
    }

    pub fn monomial(nvars: usize, expo: Exponent, coeff: T) -> Self {
        assert_eq!(expo.len(), nvars);
        let deg = expo.iter().map(|&e| e as i64).sum();
        let mut p = HomogPoly::zero_poly(nvars, deg);
        p.add_term(expo, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * x^expo`, dropping the term if the sum cancels.
    pub fn add_term(&mut self, expo: Exponent, coeff: T) {
        assert_eq!(expo.len(), self.nvars, "exponent arity mismatch");
        if coeff.is_zero() {
            return;
        }
        let deg: i64 = expo.iter().map(|&e| e as i64).sum();
        if self.is_zero() && deg != self.degree {
            // A zero polynomial adopts the degree of its first real term.
            self.degree = deg;
        }
        assert_eq!(deg, self.degree, "inhomogeneous term");
        match self.terms.remove(&expo) {
            None => {
                self.terms.insert(expo, coeff);
            }
            Some(old) => {
                let s = old + coeff;
                if !s.is_zero() {
                    self.terms.insert(expo, s);
                }
            }
        }
    }

    pub fn coeff(&self, expo: &[u16]) -> T {
        self.terms.get(expo).cloned().unwrap_or_else(T::zero)
    }

    /// Terms in descending lexicographic (basis) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter().rev()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        assert!(
            self.is_zero() || other.is_zero() || self.degree == other.degree,
            "degree mismatch {} vs {}",
            self.degree,
            other.degree
        );
        let mut out = self.clone();
        if out.is_zero() && !other.is_zero() {
            out.degree = other.degree;
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return HomogPoly::zero_poly(self.nvars, self.degree);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = HomogPoly::zero_poly(self.nvars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Multiplies by the monomial x^expo (shifts every exponent).
    pub fn shift_by(&self, expo: &[u16]) -> Self {
        assert_eq!(expo.len(), self.nvars);
        let extra: i64 = expo.iter().map(|&e| e as i64).sum();
        let mut out = HomogPoly::zero_poly(self.nvars, self.degree + extra);
        for (e, c) in &self.terms {
            let ne: Exponent = e.iter().zip(expo).map(|(a, b)| a + b).collect();
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Exact division by a nonzero homogeneous divisor: returns `Some(h)`
    /// with `self = divisor * h` when the division is exact, else `None`.
    /// Uses lexicographic long division; since lex order is multiplicative,
    /// exact divisibility guarantees every leading term divides.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(HomogPoly::zero_poly(self.nvars, self.degree - divisor.degree));
        }
        if self.degree < divisor.degree {
            return None;
        }
        let (dexp, dcoef) = {
            let (e, c) = divisor.terms().next().expect("nonzero divisor");
            (e.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = HomogPoly::zero_poly(self.nvars, self.degree - divisor.degree);
        while !rem.is_zero() {
            let (rexp, rcoef) = {
                let (e, c) = rem.terms().next().expect("nonzero remainder");
                (e.clone(), c.clone())
            };
            if rexp.iter().zip(&dexp).any(|(a, b)| a < b) {
                return None;
            }
            let qexp: Exponent = rexp.iter().zip(&dexp).map(|(a, b)| a - b).collect();
            let qcoef = rcoef / dcoef.clone();
            rem = rem.sub(&divisor.shift_by(&qexp).scale(&qcoef));
            quot.add_term(qexp, qcoef);
        }
        Some(quot)
    }

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars);
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    term = term * point[i].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Coefficient vector in the `monomials(nvars, degree)` order.
    pub fn to_coeffs(&self, basis: &[Exponent]) -> Vec<T> {
        basis.iter().map(|e| self.coeff(e)).collect()
    }

    pub fn from_coeffs(nvars: usize, degree: i64, basis: &[Exponent], coeffs: &[T]) -> Self {
        assert_eq!(basis.len(), coeffs.len());
        let mut p = HomogPoly::zero_poly(nvars, degree);
        for (e, c) in basis.iter().zip(coeffs) {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    /// If `self = c * other` for a scalar c, returns c. Both nonzero required.
    pub fn constant_ratio(&self, other: &Self) -> Option<T> {
        if self.is_zero() || other.is_zero() || self.degree != other.degree {
            return None;
        }
        let (e0, c0) = other.terms.iter().next_back()?;
        let ratio = self.coeff(e0) / c0.clone();
        if self == &other.scale(&ratio) {
            Some(ratio)
        } else {
            None
        }
    }

    /// Parses the term grammar "3*x0^2*x1 - x2^3" (no parentheses; explicit
    /// `*` between factors; `^` powers; scalar literals in the field syntax).
    pub fn parse(ring: &RingSpec, src: &str, expected_degree: Option<i64>) -> Result<Self> {
        let nvars = ring.nvars();
        let src = src.trim();
        if src.is_empty() {
            return Err(Error::parse("empty polynomial string"));
        }
        let mut poly = HomogPoly::zero_poly(nvars, expected_degree.unwrap_or(0));
        let mut committed = expected_degree;
        for (sign, term) in split_terms(src)? {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::parse(format!("dangling sign in {src:?}")));
            }
            let mut coeff = T::from_integer(&ring.field, sign);
            let mut expo = vec![0u16; nvars];
            for factor in term.split('*') {
                let f = factor.trim();
                if f.is_empty() {
                    return Err(Error::parse(format!("empty factor in term {term:?}")));
                }
                if let Some(rest) = f.strip_prefix('x') {
                    if rest.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                        let (idx, pow) = match rest.split_once('^') {
                            Some((i, p)) => (i, p),
                            None => (rest, "1"),
                        };
                        let i: usize = idx.parse().map_err(|_| {
                            Error::parse(format!("bad variable {f:?} in {src:?}"))
                        })?;
                        let p: u16 = pow.trim().parse().map_err(|_| {
                            Error::parse(format!("bad exponent {f:?} in {src:?}"))
                        })?;
                        if i >= nvars {
                            return Err(Error::parse(format!(
                                "variable x{i} out of range (ring has x0..x{})",
                                nvars - 1
                            )));
                        }
                        expo[i] += p;
                        continue;
                    }
                }
                let c = T::parse(&ring.field, f)?;
                coeff = coeff * c;
            }
            let deg: i64 = expo.iter().map(|&e| e as i64).sum();
            if !coeff.is_zero() {
                match committed {
                    None => committed = Some(deg),
                    Some(want) if deg != want => {
                        return Err(Error::parse(format!(
                            "term {term:?} has degree {deg}, expected {want}"
                        )));
                    }
                    _ => {}
                }
            }
            poly.add_term(expo, coeff);
        }
        Ok(poly)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let mono = render_monomial(e);
            let cs = c.render_compact();
            let (neg, cs_abs) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            match (&mono, cs_abs.as_str()) {
                (None, _) => out.push_str(&cs_abs),
                (Some(m), "1") => out.push_str(m),
                (Some(m), _) => {
                    out.push_str(&cs_abs);
                    out.push('*');
                    out.push_str(m);
                }
            }
        }
        out
    }
}

fn render_monomial(e: &[u16]) -> Option<String> {
    if e.iter().all(|&x| x == 0) {
        return None;
    }
    let mut parts = Vec::new();
    for (i, &ei) in e.iter().enumerate() {
        if ei == 1 {
            parts.push(format!("x{i}"));
        } else if ei > 1 {
            parts.push(format!("x{i}^{ei}"));
        }
    }
    Some(parts.join("*"))
}

/// Splits an expression into (sign, term) pairs at top-level + and -.
fn split_terms(src: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign: i64 = 1;
    let mut prev_is_operand = false;
    for ch in src.chars() {
        match ch {
            '+' | '-' if prev_is_operand => {
                out.push((sign, std::mem::take(&mut cur)));
                sign = if ch == '-' { -1 } else { 1 };
                prev_is_operand = false;
            }
            '-' => {
                // Sign prefix (possibly stacked).
                sign = -sign;
            }
            '+' => {}
            c if c.is_whitespace() => {
                cur.push(c);
            }
            c => {
                cur.push(c);
                // A '/' or '*' keeps us inside a term; any operand char counts.
                prev_is_operand = c != '*' && c != '/' && c != '^';
            }
        }
    }
    out.push((sign, cur));
    Ok(out)
}

impl<T: Scalar> fmt::Display for HomogPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
