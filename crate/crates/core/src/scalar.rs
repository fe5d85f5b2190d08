//! Coefficient fields.
//!
//! Polynomials and multivectors are generic over [`Coeff`]. Three fields are
//! used: [`Rational`] for most exact work, [`ExactScalar`] (the quadratic
//! extension Q(sqrt r)) wherever the matrix operators introduce square roots,
//! and `f64` for numeric evaluation of the fundamental solutions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{HscaError, Result};
use crate::rational::Rational;

pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n))
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(n, d))
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_rational(q: &Rational) -> Self {
        q.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Splits `n = s^2 * t` with `t` square-free.
pub fn square_free_split(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut t = n;
    let mut p = 2u64;
    while p * p <= t {
        while t.is_multiple_of(p * p) {
            t /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, t)
}

/// An element `a + b*sqrt(r)` of Q(sqrt r).
///
/// `r` is square-free. When `b == 0` the radicand is normalised to 1 so that a
/// plain rational compares equal regardless of which extension produced it.
/// Mixing two different non-trivial radicands is a logic error and panics.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactScalar {
    a: Rational,
    b: Rational,
    r: u64,
}

impl ExactScalar {
    pub fn rational(a: Rational) -> Self {
        ExactScalar { a, b: Rational::zero(), r: 1 }
    }

    /// `a + b*sqrt(r)` for an arbitrary non-negative integer `r`.
    pub fn new(a: Rational, b: Rational, r: u64) -> Self {
        let (s, t) = square_free_split(r);
        let b = b * Rational::from_integer(s as i64);
        if t == 1 || r == 0 {
            let a = if r == 0 { a } else { a + b };
            return ExactScalar::rational(a);
        }
        let mut out = ExactScalar { a, b, r: t };
        out.normalize();
        out
    }

    /// `sqrt(q)` for a non-negative rational `q = n/d`, written as `sqrt(n d)/d`.
    pub fn sqrt_of(n: u64, d: u64) -> Self {
        assert!(d != 0);
        ExactScalar::new(Rational::zero(), Rational::new(1, d as i64), n * d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.r
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.r = 1;
        }
    }

    fn join(&self, other: &Self) -> u64 {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.r,
            (_, true) => self.r,
            _ if self.r == other.r => self.r,
            _ => panic!("{}", HscaError::RadicandMismatch(self.r, other.r)),
        }
    }

    /// Fallible addition for callers that cannot guarantee a shared radicand.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !self.is_rational() && !other.is_rational() && self.r != other.r {
            return Err(HscaError::RadicandMismatch(self.r, other.r));
        }
        Ok(self.clone() + other.clone())
    }

    /// Multiplicative inverse `(a - b sqrt r) / (a^2 - r b^2)`.
    pub fn recip(&self) -> Result<Self> {
        let r = Rational::from_integer(self.r as i64);
        let norm = self.a.clone() * self.a.clone() - r * self.b.clone() * self.b.clone();
        if norm.is_zero() {
            return Err(HscaError::Singular);
        }
        let mut out = ExactScalar { a: self.a.clone() / norm.clone(), b: -(self.b.clone() / norm), r: self.r };
        out.normalize();
        Ok(out)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        let r = self.join(&rhs);
        let mut out = ExactScalar { a: self.a + rhs.a, b: self.b + rhs.b, r };
        out.normalize();
        out
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        ExactScalar { a: -self.a, b: -self.b, r: self.r }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> Self {
        if self.is_rational() && rhs.is_rational() {
            return ExactScalar::rational(self.a * rhs.a);
        }
        let r = self.join(&rhs);
        let rr = Rational::from_integer(r as i64);
        let a = self.a.clone() * rhs.a.clone() + rr * self.b.clone() * rhs.b.clone();
        let b = self.a * rhs.b + self.b * rhs.a;
        let mut out = ExactScalar { a, b, r };
        out.normalize();
        out
    }
}

impl Coeff for ExactScalar {
    fn zero() -> Self {
        ExactScalar::rational(Rational::zero())
    }
    fn one() -> Self {
        ExactScalar::rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn from_rational(q: &Rational) -> Self {
        ExactScalar::rational(q.clone())
    }
    fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.r as f64).sqrt()
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        ExactScalar::rational(q)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.r)
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
