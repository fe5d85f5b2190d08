//! The real Clifford algebra Cl_m with negative-definite signature
//! (`e_i e_j + e_j e_i = -2 delta_ij`), for 2 <= m <= 8.
//!
//! Basis blades are stored as bitmasks with ascending indices; bit `j-1` set
//! means `e_j` is a factor.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{HscaError, Result};
use crate::scalar::Coeff;

pub const MAX_DIM: usize = 8;

pub fn check_dim(m: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&m) {
        Ok(())
    } else {
        Err(HscaError::UnsupportedDimension(m))
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(pub u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// The generator `e_j`, 1-based.
    pub fn generator(j: usize) -> Blade {
        debug_assert!((1..=MAX_DIM).contains(&j));
        Blade(1 << (j - 1))
    }

    pub fn from_indices(indices: &[usize]) -> Result<Blade> {
        let mut mask = 0u8;
        for &j in indices {
            if !(1..=MAX_DIM).contains(&j) || mask & (1 << (j - 1)) != 0 {
                return Err(HscaError::Parse(format!("invalid blade indices {indices:?}")));
            }
            mask |= 1 << (j - 1);
        }
        Ok(Blade(mask))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..8).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// `e_A e_B = sign * e_{A xor B}`; returns `(negative, A xor B)`.
    #[inline]
    pub fn product(self, other: Blade) -> (bool, Blade) {
        (SIGN_TABLE[self.0 as usize][other.0 as usize], Blade(self.0 ^ other.0))
    }

    /// Sign picked up by this blade under Clifford conjugation,
    /// `(-1)^{g(g+1)/2}`.
    pub fn conjugation_negates(self) -> bool {
        matches!(self.grade() % 4, 1 | 2)
    }

    /// Sign picked up under reversion, `(-1)^{g(g-1)/2}`.
    pub fn reversion_negates(self) -> bool {
        matches!(self.grade() % 4, 2 | 3)
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        for j in self.indices() {
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

const fn blade_product_negative(a: u8, b: u8) -> bool {
    // transpositions needed to sort e_A e_B, then one -1 per squared generator
    let mut swaps = 0u32;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    swaps += (a & b).count_ones();
    swaps % 2 == 1
}

const fn build_sign_table() -> [[bool; 256]; 256] {
    let mut t = [[false; 256]; 256];
    let mut a = 0;
    while a < 256 {
        let mut b = 0;
        while b < 256 {
            t[a][b] = blade_product_negative(a as u8, b as u8);
            b += 1;
        }
        a += 1;
    }
    t
}

static SIGN_TABLE: [[bool; 256]; 256] = build_sign_table();

/// An element of Cl_m. Absent blades are zero; no explicit zeros are stored.
#[derive(Clone, PartialEq)]
pub struct Multivector<S: Coeff> {
    dim: usize,
    terms: BTreeMap<Blade, S>,
}

impl<S: Coeff> Multivector<S> {
    pub fn zero(dim: usize) -> Self {
        Multivector { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, s: S) -> Self {
        Self::blade(dim, Blade::SCALAR, s)
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    pub fn blade(dim: usize, blade: Blade, s: S) -> Self {
        let mut mv = Self::zero(dim);
        mv.add_term(blade, s);
        mv
    }

    /// The generator `e_j` (1-based).
    pub fn generator(dim: usize, j: usize) -> Self {
        Self::blade(dim, Blade::generator(j), S::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Blade, S)>) -> Self {
        let mut mv = Self::zero(dim);
        for (b, s) in terms {
            mv.add_term(b, s);
        }
        mv
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.terms.iter().map(|(b, s)| (*b, s))
    }

    pub fn coeff(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    pub fn scalar_part(&self) -> S {
        self.coeff(Blade::SCALAR)
    }

    pub fn add_term(&mut self, blade: Blade, s: S) {
        if s.is_zero() {
            return;
        }
        match self.terms.remove(&blade) {
            Some(old) => {
                let sum = old + s;
                if !sum.is_zero() {
                    self.terms.insert(blade, sum);
                }
            }
            None => {
                self.terms.insert(blade, s);
            }
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(HscaError::DimensionMismatch { left: self.dim, right: other.dim })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (b, s) in other.terms() {
            out.add_term(b, s.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|s| -s.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|s| s.clone() * k.clone())
    }

    pub fn map<T: Coeff>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        Multivector::from_terms(self.dim, self.terms().map(|(b, s)| (b, f(s))))
    }

    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let (neg, c) = a.product(b);
                let p = x.clone() * y.clone();
                out.add_term(c, if neg { -p } else { p });
            }
        }
        Ok(out)
    }

    /// Clifford conjugation: the anti-automorphism with `e_j -> -e_j`.
    pub fn conjugate(&self) -> Self {
        Multivector::from_terms(
            self.dim,
            self.terms().map(|(b, s)| (b, if b.conjugation_negates() { -s.clone() } else { s.clone() })),
        )
    }

    pub fn grade_project(&self, g: usize) -> Result<Self> {
        if g > self.dim {
            return Err(HscaError::GradeOutOfRange { grade: g, dim: self.dim });
        }
        Ok(Multivector::from_terms(self.dim, self.terms().filter(|(b, _)| b.grade() == g).map(|(b, s)| (b, s.clone()))))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms().map(|(_, s)| s.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl<S: Coeff + fmt::Display> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(b, s)| format!("({s}){b:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Coeff> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// A vector of R^m, embedded in Cl_m as `sum_j x_j e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorM<S: Coeff> {
    pub coords: Vec<S>,
}

impl<S: Coeff> VectorM<S> {
    pub fn new(coords: Vec<S>) -> Self {
        VectorM { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> S {
        self.coords.iter().fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn to_multivector(&self) -> Multivector<S> {
        Multivector::from_terms(
            self.dim(),
            self.coords.iter().enumerate().map(|(j, c)| (Blade::generator(j + 1), c.clone())),
        )
    }

    /// Reads the grade-1 part of a multivector.
    pub fn from_multivector(mv: &Multivector<S>) -> Self {
        VectorM::new((1..=mv.dim()).map(|j| mv.coeff(Blade::generator(j))).collect())
    }
}

/// Reflection `a x a` of `x` across the hyperplane orthogonal to the unit
/// vector `a`.
pub fn reflect<S: Coeff>(a: &VectorM<S>, x: &VectorM<S>) -> Result<VectorM<S>> {
    if a.dim() != x.dim() {
        return Err(HscaError::DimensionMismatch { left: a.dim(), right: x.dim() });
    }
    if a.norm_sq() != S::one() {
        return Err(HscaError::NonUnitVector);
    }
    let am = a.to_multivector();
    let axa = am.geometric_product(&x.to_multivector())?.geometric_product(&am)?;
    debug_assert!(axa.sub(&axa.grade_project(1)?)?.is_zero());
    Ok(VectorM::from_multivector(&axa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::scalar::ExactScalar;

    type Mv = Multivector<Rational>;

    fn e(m: usize, j: usize) -> Mv {
        Mv::generator(m, j)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let sq = e(3, 1).geometric_product(&e(3, 1)).unwrap();
        assert_eq!(sq, Mv::scalar(3, q(-1)));
    }

    #[test]
    fn bivector_times_reversed_is_one() {
        let e12 = Mv::blade(3, Blade(0b011), q(1));
        let e21 = e12.neg();
        assert_eq!(e12.geometric_product(&e21).unwrap(), Mv::one(3));
    }

    #[test]
    fn vector_square_is_minus_norm() {
        let v = e(3, 1).add(&e(3, 2)).unwrap();
        assert_eq!(v.geometric_product(&v).unwrap(), Mv::scalar(3, q(-2)));
    }

    #[test]
    fn anticommutation_all_pairs() {
        for m in 2..=MAX_DIM {
            for i in 1..=m {
                for j in 1..=m {
                    let ij = e(m, i).geometric_product(&e(m, j)).unwrap();
                    let ji = e(m, j).geometric_product(&e(m, i)).unwrap();
                    let expect = if i == j { Mv::scalar(m, q(-2)) } else { Mv::zero(m) };
                    assert_eq!(ij.add(&ji).unwrap(), expect, "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(e(3, 1).conjugate(), e(3, 1).neg());
        let e12 = Mv::blade(3, Blade(0b011), q(1));
        assert_eq!(e12.conjugate(), e12.neg());
        let x = Mv::one(3).add(&Mv::blade(3, Blade(0b111), q(1))).unwrap();
        assert_eq!(x.conjugate(), x);
        // grade-3 sign checked against bar(e3) bar(e2) bar(e1)
        let e123 = e(3, 1).geometric_product(&e(3, 2)).unwrap().geometric_product(&e(3, 3)).unwrap();
        let expanded =
            e(3, 3).neg().geometric_product(&e(3, 2).neg()).unwrap().geometric_product(&e(3, 1).neg()).unwrap();
        assert_eq!(e123.conjugate(), expanded);
    }

    #[test]
    fn grade_projection() {
        let x = Mv::from_terms(3, [(Blade(0), q(1)), (Blade(1), q(1)), (Blade(3), q(1))]);
        assert_eq!(x.grade_project(1).unwrap(), e(3, 1));
        assert!(Mv::blade(3, Blade(3), q(1)).grade_project(0).unwrap().is_zero());
        let sq = e(3, 1).geometric_product(&e(3, 1)).unwrap();
        assert_eq!(sq.grade_project(0).unwrap(), Mv::scalar(3, q(-1)));
        assert!(x.grade_project(4).is_err());
    }

    #[test]
    fn reflection_examples() {
        let v = |c: &[i64]| VectorM::new(c.iter().map(|&x| q(x)).collect::<Vec<_>>());
        assert_eq!(reflect(&v(&[1, 0, 0]), &v(&[2, 3, 0])).unwrap(), v(&[-2, 3, 0]));
        assert_eq!(reflect(&v(&[1, 0, 0]), &v(&[1, 0, 0])).unwrap(), v(&[-1, 0, 0]));
        assert_eq!(reflect(&v(&[1, 1, 0]), &v(&[1, 0, 0])), Err(HscaError::NonUnitVector));

        // a = (e1 + e2)/sqrt 2 needs the quadratic extension
        let h = ExactScalar::sqrt_of(1, 2);
        let a = VectorM::new(vec![h.clone(), h, ExactScalar::zero()]);
        let x = VectorM::new(vec![ExactScalar::one(), ExactScalar::zero(), ExactScalar::zero()]);
        let y = reflect(&a, &x).unwrap();
        assert_eq!(y.coords, vec![ExactScalar::zero(), -ExactScalar::one(), ExactScalar::zero()]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(e(3, 1).geometric_product(&e(4, 1)), Err(HscaError::DimensionMismatch { left: 3, right: 4 })));
    }
}
