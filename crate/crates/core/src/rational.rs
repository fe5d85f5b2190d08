//! Exact rationals with a machine-word fast path.
//!
//! Almost every coefficient that shows up in the operator identities fits in
//! an `i64` numerator/denominator pair, so arithmetic is attempted there first
//! with checked operations and only promoted to `BigRational` on overflow.
//! Values that fit back into `i64` are demoted again so equality stays
//! structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::HscaError;

#[derive(Clone)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational::Small(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational::Small(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational::Small(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational::Small(Ratio::one())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(b) => b.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_negative(),
            Rational::Big(b) => b.is_negative(),
        }
    }

    pub fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(Ratio::new_raw(n, d)),
            _ => Rational::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.numer()),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.denom()),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rational::Big(b) => {
                // Scale down huge operands before converting so the quotient
                // does not turn into inf/inf.
                let n = b.numer();
                let d = b.denom();
                let shift = n.bits().max(d.bits()).saturating_sub(1000);
                let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        Rational::one() / self.clone()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    fn binop(
        a: &Self,
        b: &Self,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (Rational::Small(x), Rational::Small(y)) = (a, b) {
            if let Some(r) = small(x, y) {
                return Rational::Small(r);
            }
        }
        Rational::from_big(big(a.to_big(), b.to_big()))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a == b,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => {
                // i64 cross-multiplication can overflow; widen.
                let l = *a.numer() as i128 * *b.denom() as i128;
                let r = *b.numer() as i128 * *a.denom() as i128;
                l.cmp(&r)
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        Rational::binop(&self, &rhs, |a, b| a.checked_add(b), |a, b| a + b)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        if rhs.is_zero() {
            return self;
        }
        Rational::binop(&self, &rhs, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        if self.is_zero() || rhs.is_zero() {
            return Rational::zero();
        }
        Rational::binop(&self, &rhs, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational::binop(&self, &rhs, |a, b| a.checked_div(b), |a, b| a / b)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-r),
            other => Rational::from_big(-other.to_big()),
        }
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        let lhs = std::mem::take(self);
        *self = lhs + rhs;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        let lhs = std::mem::take(self);
        *self = lhs - rhs;
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = HscaError;

    /// Accepts `p` or `p/q` with optional sign on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HscaError::Parse(format!("invalid rational literal {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sum = big.clone() + big.clone();
        assert!(matches!(sum, Rational::Big(_)));
        let back = sum - big.clone();
        assert!(matches!(back, Rational::Small(_)));
        assert_eq!(back, big);
    }

    #[test]
    fn mixed_equality_and_order() {
        let a = Rational::from_big(BigRational::new(BigInt::from(3), BigInt::from(6)));
        assert_eq!(a, Rational::new(1, 2));
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert!(Rational::new(-7, 2) < Rational::zero());
    }

    #[test]
    fn parse_and_display() {
        let q: Rational = "-6/4".parse().unwrap();
        assert_eq!(q, Rational::new(-3, 2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!("12".parse::<Rational>().unwrap().to_string(), "12");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn neg_min_does_not_overflow() {
        let q = Rational::from_integer(i64::MIN);
        let n = -q.clone();
        assert_eq!(n.clone() + q, Rational::zero());
        assert!(!n.is_negative());
    }
}
