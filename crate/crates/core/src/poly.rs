//! Polynomials in two vector variables `x, u` of R^m with Clifford-algebra
//! coefficients.
//!
//! Terms are kept in a sorted vector keyed by `(Monomial, Blade)`; each
//! monomial packs the `x` and `u` exponents one byte per variable. Operations
//! emit raw terms into a [`TermBuilder`], which sorts and merges them back into
//! canonical form. Scalar variables commute with every blade, so coefficients
//! always sit to the right of the monomial and products only have to track the
//! order of the blade factors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::clifford::{check_dim, Blade, Multivector};
use crate::error::{HscaError, Result};
use crate::scalar::Coeff;

/// Exponents of up to eight variables, one byte each.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponents(u64);

impl Exponents {
    pub const ZERO: Exponents = Exponents(0);

    pub fn from_slice(e: &[u8]) -> Self {
        assert!(e.len() <= 8);
        let mut v = 0u64;
        for (j, &x) in e.iter().enumerate() {
            v |= (x as u64) << (8 * j);
        }
        Exponents(v)
    }

    /// Exponent of variable `j` (0-based).
    #[inline]
    pub fn get(self, j: usize) -> u8 {
        (self.0 >> (8 * j)) as u8
    }

    #[inline]
    pub fn with(self, j: usize, e: u8) -> Self {
        let mask = !(0xffu64 << (8 * j));
        Exponents((self.0 & mask) | ((e as u64) << (8 * j)))
    }

    #[inline]
    pub fn raise(self, j: usize) -> Self {
        let e = self.get(j);
        assert!(e < u8::MAX, "exponent overflow");
        self.with(j, e + 1)
    }

    #[inline]
    pub fn lower(self, j: usize) -> Self {
        let e = self.get(j);
        debug_assert!(e > 0);
        self.with(j, e - 1)
    }

    pub fn degree(self) -> usize {
        self.0.to_le_bytes().iter().map(|&b| b as usize).sum()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_vec(self, dim: usize) -> Vec<u8> {
        (0..dim).map(|j| self.get(j)).collect()
    }

    pub fn all_even(self) -> bool {
        self.0 & 0x0101_0101_0101_0101 == 0
    }

    pub fn checked_add(self, other: Exponents) -> Exponents {
        let mut out = Exponents::ZERO;
        for j in 0..8 {
            let s = self.get(j) as u16 + other.get(j) as u16;
            assert!(s <= u8::MAX as u16, "exponent overflow");
            out = out.with(j, s as u8);
        }
        out
    }

    /// All exponent vectors of total degree `d` in `dim` variables, in
    /// graded-lexicographic order (`x1` most significant).
    pub fn of_degree(dim: usize, d: usize) -> Vec<Exponents> {
        fn rec(dim: usize, j: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Exponents>) {
            if j + 1 == dim {
                cur[j] = left as u8;
                out.push(Exponents::from_slice(cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[j] = e as u8;
                rec(dim, j + 1, left - e, cur, out);
            }
            cur[j] = 0;
        }
        let mut out = Vec::new();
        let mut cur = vec![0u8; dim];
        rec(dim, 0, d, &mut cur, &mut out);
        out
    }

    /// Graded-lexicographic comparison key.
    pub fn grlex_key(self, dim: usize) -> (usize, Vec<std::cmp::Reverse<u8>>) {
        (self.degree(), (0..dim).map(|j| std::cmp::Reverse(self.get(j))).collect())
    }
}

impl fmt::Debug for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec(8))
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    pub x: Exponents,
    pub u: Exponents,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: Exponents::ZERO, u: Exponents::ZERO };

    pub fn new(x: Exponents, u: Exponents) -> Self {
        Monomial { x, u }
    }

    pub fn family(&self, fam: Family) -> Exponents {
        match fam {
            Family::X => self.x,
            Family::U => self.u,
        }
    }

    pub fn with_family(self, fam: Family, e: Exponents) -> Self {
        match fam {
            Family::X => Monomial { x: e, ..self },
            Family::U => Monomial { u: e, ..self },
        }
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial { x: self.x.checked_add(other.x), u: self.u.checked_add(other.u) }
    }
}

/// Which vector variable a derivative or integral acts on.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Family {
    X,
    U,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::X => Family::U,
            Family::U => Family::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::X => "x",
            Family::U => "u",
        }
    }
}

/// A single scalar variable `x_j` or `u_j` (0-based index).
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Var {
    pub family: Family,
    pub index: usize,
}

impl Var {
    pub fn x(index: usize) -> Self {
        Var { family: Family::X, index }
    }
    pub fn u(index: usize) -> Self {
        Var { family: Family::U, index }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Term<S> {
    pub mono: Monomial,
    pub blade: Blade,
    pub coeff: S,
}

/// Accumulates unsorted terms and canonicalises them.
pub struct TermBuilder<S> {
    dim: usize,
    raw: Vec<Term<S>>,
}

impl<S: Coeff> TermBuilder<S> {
    pub fn new(dim: usize) -> Self {
        TermBuilder { dim, raw: Vec::new() }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        TermBuilder { dim, raw: Vec::with_capacity(n) }
    }

    #[inline]
    pub fn push(&mut self, mono: Monomial, blade: Blade, coeff: S) {
        if !coeff.is_zero() {
            self.raw.push(Term { mono, blade, coeff });
        }
    }

    /// Pushes `sign * coeff`.
    #[inline]
    pub fn push_signed(&mut self, mono: Monomial, blade: Blade, negative: bool, coeff: S) {
        self.push(mono, blade, if negative { -coeff } else { coeff });
    }

    pub fn extend_poly(&mut self, p: &CliffPoly<S>) {
        self.raw.extend(p.terms.iter().cloned());
    }

    pub fn finish(mut self) -> CliffPoly<S> {
        self.raw.sort_unstable_by_key(|t| (t.mono, t.blade));
        let mut terms: Vec<Term<S>> = Vec::with_capacity(self.raw.len());
        for t in self.raw {
            match terms.last_mut() {
                Some(last) if last.mono == t.mono && last.blade == t.blade => {
                    let c = std::mem::replace(&mut last.coeff, S::zero());
                    last.coeff = c + t.coeff;
                }
                _ => {
                    if let Some(last) = terms.last() {
                        if last.coeff.is_zero() {
                            terms.pop();
                        }
                    }
                    terms.push(t);
                }
            }
        }
        if terms.last().is_some_and(|t| t.coeff.is_zero()) {
            terms.pop();
        }
        CliffPoly { dim: self.dim, terms }
    }
}

/// A polynomial in `x, u` with `Cl_m` coefficients.
#[derive(Clone, PartialEq)]
pub struct CliffPoly<S: Coeff> {
    dim: usize,
    terms: Vec<Term<S>>,
}

impl<S: Coeff> CliffPoly<S> {
    pub fn zero(dim: usize) -> Self {
        CliffPoly { dim, terms: Vec::new() }
    }

    pub fn try_zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::zero(dim))
    }

    pub fn constant(mv: &Multivector<S>) -> Self {
        let mut b = TermBuilder::new(mv.dim());
        for (blade, s) in mv.terms() {
            b.push(Monomial::ONE, blade, s.clone());
        }
        b.finish()
    }

    pub fn scalar(dim: usize, s: S) -> Self {
        Self::term(dim, Monomial::ONE, Blade::SCALAR, s)
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    pub fn term(dim: usize, mono: Monomial, blade: Blade, s: S) -> Self {
        let mut b = TermBuilder::new(dim);
        b.push(mono, blade, s);
        b.finish()
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = Term<S>>) -> Self {
        let mut b = TermBuilder::new(dim);
        for t in terms {
            b.push(t.mono, t.blade, t.coeff);
        }
        b.finish()
    }

    pub fn var(dim: usize, v: Var) -> Self {
        let e = Exponents::ZERO.raise(v.index);
        Self::term(dim, Monomial::ONE.with_family(v.family, e), Blade::SCALAR, S::one())
    }

    /// `sum_j v_j e_j` for the chosen family.
    pub fn vector(dim: usize, fam: Family) -> Self {
        let mut b = TermBuilder::new(dim);
        for j in 0..dim {
            let mono = Monomial::ONE.with_family(fam, Exponents::ZERO.raise(j));
            b.push(mono, Blade::generator(j + 1), S::one());
        }
        b.finish()
    }

    /// `|v|^2 = sum_j v_j^2` for the chosen family.
    pub fn norm_sq(dim: usize, fam: Family) -> Self {
        let mut b = TermBuilder::new(dim);
        for j in 0..dim {
            let mono = Monomial::ONE.with_family(fam, Exponents::ZERO.with(j, 2));
            b.push(mono, Blade::SCALAR, S::one());
        }
        b.finish()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term<S>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(HscaError::DimensionMismatch { left: self.dim, right: other.dim })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        // both inputs are sorted: merge
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            let ka = (a[i].mono, a[i].blade);
            let kb = (b[j].mono, b[j].blade);
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].coeff.clone() + b[j].coeff.clone();
                    if !c.is_zero() {
                        out.push(Term { mono: a[i].mono, blade: a[i].blade, coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        CliffPoly { dim: self.dim, terms: out }
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero(self.dim);
        }
        CliffPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term { mono: t.mono, blade: t.blade, coeff: t.coeff.clone() * k.clone() })
                .collect(),
        }
    }

    pub fn map_coeffs<T: Coeff>(&self, f: impl Fn(&S) -> T) -> CliffPoly<T> {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len());
        for t in &self.terms {
            b.push(t.mono, t.blade, f(&t.coeff));
        }
        b.finish()
    }

    /// Geometric product `p q`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * other.terms.len());
        for s in &self.terms {
            for t in &other.terms {
                let (neg, blade) = s.blade.product(t.blade);
                b.push_signed(s.mono.times(t.mono), blade, neg, s.coeff.clone() * t.coeff.clone());
            }
        }
        b.finish()
    }

    /// `mv * p` with a constant multivector on the left.
    pub fn left_mul(&self, mv: &Multivector<S>) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * 2);
        for (blade, s) in mv.terms() {
            for t in &self.terms {
                let (neg, c) = blade.product(t.blade);
                b.push_signed(t.mono, c, neg, s.clone() * t.coeff.clone());
            }
        }
        b.finish()
    }

    /// `p * mv` with a constant multivector on the right.
    pub fn right_mul(&self, mv: &Multivector<S>) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * 2);
        for t in &self.terms {
            for (blade, s) in mv.terms() {
                let (neg, c) = t.blade.product(blade);
                b.push_signed(t.mono, c, neg, t.coeff.clone() * s.clone());
            }
        }
        b.finish()
    }

    pub fn partial(&self, v: Var) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len());
        for t in &self.terms {
            let e = t.mono.family(v.family);
            let p = e.get(v.index);
            if p > 0 {
                let mono = t.mono.with_family(v.family, e.lower(v.index));
                b.push(mono, t.blade, t.coeff.clone() * S::from_i64(p as i64));
            }
        }
        b.finish()
    }

    /// Left Dirac operator `sum_j e_j d/dv_j`.
    pub fn dirac(&self, fam: Family) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * self.dim);
        for t in &self.terms {
            let e = t.mono.family(fam);
            for j in 0..self.dim {
                let p = e.get(j);
                if p == 0 {
                    continue;
                }
                let mono = t.mono.with_family(fam, e.lower(j));
                let (neg, blade) = Blade::generator(j + 1).product(t.blade);
                b.push_signed(mono, blade, neg, t.coeff.clone() * S::from_i64(p as i64));
            }
        }
        b.finish()
    }

    pub fn laplacian(&self, fam: Family) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * self.dim);
        for t in &self.terms {
            let e = t.mono.family(fam);
            for j in 0..self.dim {
                let p = e.get(j) as i64;
                if p < 2 {
                    continue;
                }
                let mono = t.mono.with_family(fam, e.with(j, (p - 2) as u8));
                b.push(mono, t.blade, t.coeff.clone() * S::from_i64(p * (p - 1)));
            }
        }
        b.finish()
    }

    /// `<u, grad_x> p = sum_j u_j dp/dx_j`.
    pub fn u_dot_grad_x(&self) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * self.dim);
        for t in &self.terms {
            for j in 0..self.dim {
                let p = t.mono.x.get(j);
                if p == 0 {
                    continue;
                }
                let mono = Monomial { x: t.mono.x.lower(j), u: t.mono.u.raise(j) };
                b.push(mono, t.blade, t.coeff.clone() * S::from_i64(p as i64));
            }
        }
        b.finish()
    }

    /// `<grad_u, grad_x> p = sum_j d^2 p / du_j dx_j`.
    pub fn grad_u_dot_grad_x(&self) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * self.dim);
        for t in &self.terms {
            for j in 0..self.dim {
                let (px, pu) = (t.mono.x.get(j), t.mono.u.get(j));
                if px == 0 || pu == 0 {
                    continue;
                }
                let mono = Monomial { x: t.mono.x.lower(j), u: t.mono.u.lower(j) };
                b.push(mono, t.blade, t.coeff.clone() * S::from_i64(px as i64 * pu as i64));
            }
        }
        b.finish()
    }

    /// Multiplication by `|u|^2`.
    pub fn mul_u_norm_sq(&self) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * self.dim);
        for t in &self.terms {
            for j in 0..self.dim {
                let e = t.mono.u.get(j);
                let mono = Monomial { x: t.mono.x, u: t.mono.u.with(j, e + 2) };
                b.push(mono, t.blade, t.coeff.clone());
            }
        }
        b.finish()
    }

    /// Left multiplication by the Clifford vector `sum_j v_j e_j` of a family.
    pub fn vector_left_mul(&self, fam: Family) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len() * self.dim);
        for t in &self.terms {
            let e = t.mono.family(fam);
            for j in 0..self.dim {
                let mono = t.mono.with_family(fam, e.raise(j));
                let (neg, blade) = Blade::generator(j + 1).product(t.blade);
                b.push_signed(mono, blade, neg, t.coeff.clone());
            }
        }
        b.finish()
    }

    /// Clifford conjugation applied to every coefficient (the scalar variables
    /// are real, so this is the pointwise conjugate).
    pub fn conjugate(&self) -> Self {
        CliffPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono,
                    blade: t.blade,
                    coeff: if t.blade.conjugation_negates() { -t.coeff.clone() } else { t.coeff.clone() },
                })
                .collect(),
        }
    }

    /// Scalar part of `bar(self) * other`, computed without forming the full
    /// product: only equal blades contribute.
    pub fn scalar_pairing(&self, other: &Self) -> Self {
        let mut by_blade: std::collections::HashMap<Blade, Vec<&Term<S>>> = Default::default();
        for t in &other.terms {
            by_blade.entry(t.blade).or_default().push(t);
        }
        let mut b = TermBuilder::new(self.dim);
        for s in &self.terms {
            let Some(ts) = by_blade.get(&s.blade) else { continue };
            let (sq_neg, _) = s.blade.product(s.blade);
            let negative = sq_neg ^ s.blade.conjugation_negates();
            for t in ts {
                b.push_signed(s.mono.times(t.mono), Blade::SCALAR, negative, s.coeff.clone() * t.coeff.clone());
            }
        }
        b.finish()
    }

    /// Keeps only terms whose blade has grade `g`.
    pub fn grade_part(&self, g: usize) -> Self {
        CliffPoly { dim: self.dim, terms: self.terms.iter().filter(|t| t.blade.grade() == g).cloned().collect() }
    }

    pub fn scalar_part(&self) -> Self {
        self.grade_part(0)
    }

    /// Coefficient of a single blade as a scalar-valued polynomial.
    pub fn blade_part(&self, blade: Blade) -> Self {
        CliffPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|t| t.blade == blade)
                .map(|t| Term { mono: t.mono, blade: Blade::SCALAR, coeff: t.coeff.clone() })
                .collect(),
        }
    }

    /// Exchanges the roles of `x` and `u`.
    pub fn swap_families(&self) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len());
        for t in &self.terms {
            b.push(Monomial { x: t.mono.u, u: t.mono.x }, t.blade, t.coeff.clone());
        }
        b.finish()
    }

    /// The set of total degrees in the chosen family.
    pub fn degrees(&self, fam: Family) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.iter().map(|t| t.mono.family(fam).degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn max_degree(&self, fam: Family) -> usize {
        self.terms.iter().map(|t| t.mono.family(fam).degree()).max().unwrap_or(0)
    }

    /// True when every term has degree exactly `k` in the family (the zero
    /// polynomial is homogeneous of every degree).
    pub fn is_homogeneous(&self, fam: Family, k: usize) -> bool {
        self.terms.iter().all(|t| t.mono.family(fam).degree() == k)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Numeric substitution of every variable present in the point.
    pub fn evaluate(&self, pt: &PointM) -> Result<Multivector<f64>> {
        if pt.x.len() != self.dim {
            return Err(HscaError::DimensionMismatch { left: self.dim, right: pt.x.len() });
        }
        let u = pt.u.as_deref();
        if let Some(u) = u {
            if u.len() != self.dim {
                return Err(HscaError::DimensionMismatch { left: self.dim, right: u.len() });
            }
        }
        let mut out = Multivector::zero(self.dim);
        for t in &self.terms {
            let mut val = t.coeff.to_f64();
            for j in 0..self.dim {
                let ex = t.mono.x.get(j);
                if ex > 0 {
                    val *= pt.x[j].powi(ex as i32);
                }
                let eu = t.mono.u.get(j);
                if eu > 0 {
                    let u = u.ok_or(HscaError::MissingFamily("u"))?;
                    val *= u[j].powi(eu as i32);
                }
            }
            out.add_term(t.blade, val);
        }
        Ok(out)
    }

    /// Substitutes numeric values for one family, leaving a polynomial in the
    /// other.
    pub fn evaluate_family(&self, fam: Family, values: &[f64]) -> CliffPoly<f64> {
        assert_eq!(values.len(), self.dim);
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len());
        for t in &self.terms {
            let e = t.mono.family(fam);
            let mut val = t.coeff.to_f64();
            for (j, v) in values.iter().enumerate() {
                let p = e.get(j);
                if p > 0 {
                    val *= v.powi(p as i32);
                }
            }
            b.push(t.mono.with_family(fam, Exponents::ZERO), t.blade, val);
        }
        b.finish()
    }

    /// Groups terms by their exponent in one family.
    pub fn split_by(&self, fam: Family) -> Vec<(Exponents, CliffPoly<S>)> {
        let mut groups: std::collections::BTreeMap<Exponents, TermBuilder<S>> = Default::default();
        for t in &self.terms {
            groups.entry(t.mono.family(fam)).or_insert_with(|| TermBuilder::new(self.dim)).push(
                t.mono.with_family(fam, Exponents::ZERO),
                t.blade,
                t.coeff.clone(),
            );
        }
        groups.into_iter().map(|(e, b)| (e, b.finish())).collect()
    }

    /// Multiplies every term by the monomial `v^e` of one family.
    pub fn shift(&self, fam: Family, e: Exponents) -> Self {
        let mut b = TermBuilder::with_capacity(self.dim, self.terms.len());
        for t in &self.terms {
            let mono = t.mono.with_family(fam, t.mono.family(fam).checked_add(e));
            b.push(mono, t.blade, t.coeff.clone());
        }
        b.finish()
    }
}

impl<S: Coeff> Add for &CliffPoly<S> {
    type Output = CliffPoly<S>;
    /// Panics on dimension mismatch; use [`CliffPoly::try_add`] otherwise.
    fn add(self, rhs: &CliffPoly<S>) -> CliffPoly<S> {
        self.try_add(rhs).expect("polynomial dimensions differ")
    }
}

impl<S: Coeff> Sub for &CliffPoly<S> {
    type Output = CliffPoly<S>;
    fn sub(self, rhs: &CliffPoly<S>) -> CliffPoly<S> {
        self.try_add(&-rhs).expect("polynomial dimensions differ")
    }
}

impl<S: Coeff> Neg for &CliffPoly<S> {
    type Output = CliffPoly<S>;
    fn neg(self) -> CliffPoly<S> {
        CliffPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|t| Term { mono: t.mono, blade: t.blade, coeff: -t.coeff.clone() }).collect(),
        }
    }
}

impl<S: Coeff> Mul for &CliffPoly<S> {
    type Output = CliffPoly<S>;
    fn mul(self, rhs: &CliffPoly<S>) -> CliffPoly<S> {
        self.try_mul(rhs).expect("polynomial dimensions differ")
    }
}

/// `poly_mul` with an explicit dimension check.
pub fn poly_mul<S: Coeff>(p: &CliffPoly<S>, q: &CliffPoly<S>) -> Result<CliffPoly<S>> {
    p.try_mul(q)
}

impl<S: Coeff> fmt::Debug for CliffPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let d = self.dim;
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", t.coeff)?;
            for (fam, e) in [("x", t.mono.x), ("u", t.mono.u)] {
                for j in 0..d {
                    match e.get(j) {
                        0 => {}
                        1 => write!(f, "{fam}{}", j + 1)?,
                        p => write!(f, "{fam}{}^{p}", j + 1)?,
                    }
                }
            }
            if t.blade != Blade::SCALAR {
                write!(f, "{:?}", t.blade)?;
            }
        }
        Ok(())
    }
}

/// A numeric evaluation point. `v` is carried for kernels whose second
/// argument is supplied separately.
#[derive(Clone, Debug, PartialEq)]
pub struct PointM {
    pub x: Vec<f64>,
    pub u: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
}

impl PointM {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        let p = PointM { x, u: None, v: None };
        p.check_finite()?;
        Ok(p)
    }

    pub fn with_u(mut self, u: Vec<f64>) -> Result<Self> {
        self.u = Some(u);
        self.check_finite()?;
        Ok(self)
    }

    pub fn with_v(mut self, v: Vec<f64>) -> Result<Self> {
        self.v = Some(v);
        self.check_finite()?;
        Ok(self)
    }

    fn check_finite(&self) -> Result<()> {
        let all = self.x.iter().chain(self.u.iter().flatten()).chain(self.v.iter().flatten());
        for c in all {
            if !c.is_finite() {
                return Err(HscaError::Parse("non-finite coordinate".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    type P = CliffPoly<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn x(m: usize, j: usize) -> P {
        P::var(m, Var::x(j - 1))
    }

    fn u(m: usize, j: usize) -> P {
        P::var(m, Var::u(j - 1))
    }

    fn e(m: usize, j: usize) -> P {
        P::constant(&Multivector::generator(m, j))
    }

    #[test]
    fn product_examples() {
        let m = 3;
        let a = &x(m, 1) * &e(m, 1);
        assert_eq!(&a * &a, (&x(m, 1) * &x(m, 1)).scale(&q(-1)));

        let e12 = P::constant(&Multivector::blade(m, Blade(0b011), q(1)));
        assert_eq!(&u(m, 1) * &(&u(m, 2) * &e12), &(&u(m, 1) * &u(m, 2)) * &e12);

        // (e1 + e2) * (x1 e1) = x1 (-1 + e2 e1)
        let lhs = &(&e(m, 1) + &e(m, 2)) * &(&x(m, 1) * &e(m, 1));
        let e21 = &e(m, 2) * &e(m, 1);
        let rhs = &x(m, 1) * &(&P::scalar(m, q(-1)) + &e21);
        assert_eq!(lhs, rhs);
        assert!(poly_mul(&x(3, 1), &x(4, 1)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let m = 3;
        let p = &(&x(m, 1) * &x(m, 1)) * &u(m, 2);
        assert_eq!(p.partial(Var::x(0)), (&x(m, 1) * &u(m, 2)).scale(&q(2)));
        assert!((&x(m, 1) * &x(m, 1)).partial(Var::u(0)).is_zero());
        let r = &(&x(m, 1) * &x(m, 2)) * &e(m, 1);
        assert_eq!(r.partial(Var::x(1)), &x(m, 1) * &e(m, 1));
    }

    #[test]
    fn dirac_examples() {
        let m = 3;
        let x1sq = &x(m, 1) * &x(m, 1);
        assert_eq!(x1sq.dirac(Family::X), (&x(m, 1) * &e(m, 1)).scale(&q(2)));

        // D_u (u c) = -m c for constant c
        let c = P::constant(&Multivector::from_terms(m, [(Blade(0), q(2)), (Blade(0b101), q(-1))]));
        let uc = &P::vector(m, Family::U) * &c;
        assert_eq!(uc.dirac(Family::U), c.scale(&q(-3)));

        let x1x2 = &x(m, 1) * &x(m, 2);
        assert!(x1x2.dirac(Family::X).dirac(Family::X).is_zero());
        assert!(x1x2.laplacian(Family::X).is_zero());
    }

    #[test]
    fn laplacian_examples() {
        let m = 3;
        assert_eq!((&x(m, 1) * &x(m, 1)).laplacian(Family::X), P::scalar(m, q(2)));
        let h = &(&u(m, 1) * &u(m, 1)) - &(&u(m, 2) * &u(m, 2));
        assert!(h.laplacian(Family::U).is_zero());
        let x1c = &(&x(m, 1) * &x(m, 1)) * &x(m, 1);
        assert_eq!(x1c.laplacian(Family::X), x(m, 1).scale(&q(6)));
    }

    #[test]
    fn mixed_operator_examples() {
        let m = 3;
        assert_eq!((&u(m, 1) * &x(m, 1)).grad_u_dot_grad_x(), P::one(m));
        assert_eq!(x(m, 1).u_dot_grad_x(), u(m, 1));
        let ux: P = (1..=m).map(|j| &u(m, j) * &x(m, j)).fold(P::zero(m), |a, b| &a + &b);
        assert_eq!(ux.grad_u_dot_grad_x(), P::scalar(m, q(m as i64)));
        assert_eq!(P::one(m).mul_u_norm_sq(), P::norm_sq(m, Family::U));
    }

    #[test]
    fn evaluate_examples() {
        let m = 3;
        let p = &x(m, 1) * &u(m, 1);
        let pt = PointM::new(vec![2.0, 0.0, 0.0]).unwrap().with_u(vec![3.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.evaluate(&pt).unwrap().scalar_part(), 6.0);

        let s = 1.0 / 3f64.sqrt();
        let pt = PointM::new(vec![0.0; 3]).unwrap().with_u(vec![s, s, s]).unwrap();
        let n = P::norm_sq(m, Family::U).evaluate(&pt).unwrap().scalar_part();
        assert!((n - 1.0).abs() < 1e-12);

        let p = &(&e(m, 1) + &e(m, 2)) * &x(m, 1);
        let pt = PointM::new(vec![1.0, 5.0, 7.0]).unwrap();
        let val = p.evaluate(&pt).unwrap();
        assert_eq!(val.coeff(Blade(1)), 1.0);
        assert_eq!(val.coeff(Blade(2)), 1.0);
        assert!(u(m, 1).evaluate(&pt).is_err());
    }

    #[test]
    fn builder_cancels_to_zero() {
        let m = 2;
        let p = &x(m, 1) - &x(m, 1);
        assert!(p.is_zero());
        let z = P::zero(m);
        assert!(z.laplacian(Family::X).is_zero());
    }

    #[test]
    fn grlex_enumeration() {
        let ms = Exponents::of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0].to_vec(3), vec![2, 0, 0]);
        assert_eq!(ms[5].to_vec(3), vec![0, 0, 2]);
    }
}
