//! Second-order forward-mode differentiation in `x`.
//!
//! A [`Jet2`] carries a value together with its gradient and Hessian at a fixed
//! base point. Values may be plain floats or float-coefficient polynomials in
//! `u`; products keep operand order, so Clifford-valued jets multiply
//! correctly.

use crate::poly::CliffPoly;

pub trait JetValue: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, s: f64) -> Self;
}

impl JetValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
}

impl JetValue for CliffPoly<f64> {
    fn zero_like(&self) -> Self {
        CliffPoly::zero(self.dim())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: f64) -> Self {
        CliffPoly::scale(self, &s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<T> {
    pub value: T,
    pub grad: Vec<T>,
    /// Row-major `n x n`.
    pub hess: Vec<T>,
}

impl<T: JetValue> Jet2<T> {
    /// A jet with vanishing derivatives.
    pub fn constant(value: T, n: usize) -> Self {
        let z = value.zero_like();
        Jet2 { grad: vec![z.clone(); n], hess: vec![z; n * n], value }
    }

    pub fn n(&self) -> usize {
        self.grad.len()
    }

    pub fn h(&self, i: usize, j: usize) -> &T {
        &self.hess[i * self.n() + j]
    }

    pub fn add(&self, other: &Self) -> Self {
        Jet2 {
            value: self.value.add(&other.value),
            grad: self.grad.iter().zip(&other.grad).map(|(a, b)| a.add(b)).collect(),
            hess: self.hess.iter().zip(&other.hess).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet2 {
            value: self.value.scale(s),
            grad: self.grad.iter().map(|a| a.scale(s)).collect(),
            hess: self.hess.iter().map(|a| a.scale(s)).collect(),
        }
    }

    /// Product rule, preserving the order `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n();
        let (f, g) = (self, other);
        let value = f.value.mul(&g.value);
        let grad: Vec<T> = (0..n).map(|i| f.grad[i].mul(&g.value).add(&f.value.mul(&g.grad[i]))).collect();
        let mut hess = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let t = f
                    .h(i, j)
                    .mul(&g.value)
                    .add(&f.grad[i].mul(&g.grad[j]))
                    .add(&f.grad[j].mul(&g.grad[i]))
                    .add(&f.value.mul(g.h(i, j)));
                hess.push(t);
            }
        }
        Jet2 { value, grad, hess }
    }

    /// Keeps the first `n` derivative directions; `n = 0` leaves a plain
    /// value whose products skip all derivative work.
    pub fn truncate(&self, n: usize) -> Self {
        let old = self.n();
        assert!(n <= old);
        let mut hess = Vec::with_capacity(n * n);
        for i in 0..n {
            hess.extend_from_slice(&self.hess[i * old..i * old + n]);
        }
        Jet2 { value: self.value.clone(), grad: self.grad[..n].to_vec(), hess }
    }

    /// Maps every component through a linear function.
    pub fn map_linear<U: JetValue>(&self, f: impl Fn(&T) -> U) -> Jet2<U> {
        Jet2 {
            value: f(&self.value),
            grad: self.grad.iter().map(&f).collect(),
            hess: self.hess.iter().map(&f).collect(),
        }
    }
}

impl Jet2<f64> {
    /// The coordinate function `x_i` at base point `x`.
    pub fn coordinate(x: &[f64], i: usize) -> Self {
        let mut j = Jet2::constant(x[i], x.len());
        j.grad[i] = 1.0;
        j
    }

    /// `|x|^2`.
    pub fn norm_sq(x: &[f64]) -> Self {
        let n = x.len();
        let mut j = Jet2::constant(x.iter().map(|v| v * v).sum(), n);
        for i in 0..n {
            j.grad[i] = 2.0 * x[i];
            j.hess[i * n + i] = 2.0;
        }
        j
    }

    /// Chain rule for a scalar function with value and first two derivatives
    /// `(phi, phi', phi'')` at `self.value`.
    pub fn compose(&self, phi: (f64, f64, f64)) -> Self {
        let n = self.n();
        let (p0, p1, p2) = phi;
        let mut out = Jet2::constant(p0, n);
        for i in 0..n {
            out.grad[i] = p1 * self.grad[i];
            for j in 0..n {
                out.hess[i * n + j] = p2 * self.grad[i] * self.grad[j] + p1 * self.h(i, j);
            }
        }
        out
    }

    /// `self^p` for real `p`; requires a positive value.
    pub fn powf(&self, p: f64) -> Self {
        let s = self.value;
        self.compose((s.powf(p), p * s.powf(p - 1.0), p * (p - 1.0) * s.powf(p - 2.0)))
    }

    /// Lifts a scalar jet to a polynomial-valued one.
    pub fn lift(&self, dim: usize) -> Jet2<CliffPoly<f64>> {
        self.map_linear(|v| CliffPoly::scalar(dim, *v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_power_hessian() {
        for m in 3..=6usize {
            let x = [0.7, -0.4, 1.1, 0.3, -0.9, 0.2];
            let x = &x[..m];
            let p = 2.0 - m as f64;
            let jet = Jet2::norm_sq(x).powf(p / 2.0);
            let r2: f64 = x.iter().map(|v| v * v).sum();
            for i in 0..m {
                for j in 0..m {
                    let d = if i == j { 1.0 } else { 0.0 };
                    let exact = p * r2.powf(p / 2.0 - 1.0) * (d + (p - 2.0) * x[i] * x[j] / r2);
                    let got = *jet.h(i, j);
                    assert!((got - exact).abs() <= 1e-10 * exact.abs().max(1e-300), "{got} vs {exact}");
                    assert!((jet.h(i, j) - jet.h(j, i)).abs() <= 1e-12 * exact.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn product_rule() {
        let x = [1.5, 2.0];
        let a = Jet2::coordinate(&x, 0);
        let b = Jet2::coordinate(&x, 1);
        let ab = a.mul(&b).mul(&a);
        // x0^2 x1
        assert_eq!(ab.value, 4.5);
        assert_eq!(ab.grad, vec![6.0, 2.25]);
        assert_eq!(ab.hess, vec![4.0, 3.0, 3.0, 0.0]);
    }
}
