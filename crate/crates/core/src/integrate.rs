//! Exact integration of polynomials over the unit sphere and unit ball.
//!
//! Results are kept as a rational-coefficient polynomial times a power of
//! `omega_m`, the surface area of the unit sphere in R^m, so that normalised
//! quantities such as kernel constants stay exact.

use std::fmt;

use crate::poly::{CliffPoly, Exponents, Family, TermBuilder};
use crate::rational::Rational;
use crate::scalar::Coeff;

/// `value * omega_m^omega_power`.
#[derive(Clone, PartialEq, Debug)]
pub struct OmegaScaled<T> {
    pub value: T,
    pub omega_power: i32,
}

impl<T> OmegaScaled<T> {
    pub fn new(value: T, omega_power: i32) -> Self {
        OmegaScaled { value, omega_power }
    }
}

impl<S: Coeff> OmegaScaled<CliffPoly<S>> {
    /// Numeric value with `omega_m` substituted.
    pub fn to_f64_poly(&self, m: usize) -> CliffPoly<f64> {
        let w = omega(m).powi(self.omega_power);
        self.value.map_coeffs(|c| c.to_f64() * w)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl<T: fmt::Display> fmt::Display for OmegaScaled<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.omega_power {
            0 => write!(f, "{}", self.value),
            1 => write!(f, "({}) * omega", self.value),
            p => write!(f, "({}) * omega^{p}", self.value),
        }
    }
}

/// Surface area of the unit sphere `S^{m-1}`: `2 pi^{m/2} / Gamma(m/2)`.
pub fn omega(m: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(m as f64 / 2.0) / gamma_half(m)
}

/// `Gamma(n / 2)` for `n >= 1`, by the recurrence from `Gamma(1/2)` or `Gamma(1)`.
pub fn gamma_half(n: usize) -> f64 {
    assert!(n >= 1);
    let mut g = if n % 2 == 1 { std::f64::consts::PI.sqrt() } else { 1.0 };
    let mut t = 2 - n % 2;
    while t < n {
        g *= t as f64 / 2.0;
        t += 2;
    }
    g
}

/// Mean value of `u^alpha` over `S^{m-1}`, i.e. the integral divided by
/// `omega_m`. Zero unless every exponent is even; otherwise
/// `prod (alpha_j - 1)!! / prod_{i < |alpha|/2} (m + 2i)`.
pub fn sphere_mean(m: usize, alpha: Exponents) -> Rational {
    if !alpha.all_even() {
        return Rational::zero();
    }
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 0..m {
        let a = alpha.get(j) as i128;
        let mut t = a - 1;
        while t > 1 {
            num *= t;
            t -= 2;
        }
    }
    let half = alpha.degree() / 2;
    for i in 0..half {
        den *= (m + 2 * i) as i128;
    }
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => Rational::new(n, d),
        _ => {
            let n: Rational = num.to_string().parse().expect("integer literal");
            let d: Rational = den.to_string().parse().expect("integer literal");
            n / d
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Mean over the unit ball weighted so that `ball_integral = omega_m * mean`:
/// `sphere_mean / (|alpha| + m)`.
pub fn ball_factor(m: usize, alpha: Exponents) -> Rational {
    let s = sphere_mean(m, alpha);
    if s.is_zero() {
        return s;
    }
    s / Rational::from_integer((alpha.degree() + m) as i64)
}

fn integrate_family<S: Coeff>(
    p: &CliffPoly<S>,
    fam: Family,
    weight: impl Fn(usize, Exponents) -> Rational,
) -> CliffPoly<S> {
    let m = p.dim();
    let mut b = TermBuilder::with_capacity(m, p.len());
    for t in p.terms() {
        let e = t.mono.family(fam);
        let w = weight(m, e);
        if w.is_zero() {
            continue;
        }
        b.push(t.mono.with_family(fam, Exponents::ZERO), t.blade, t.coeff.clone() * S::from_rational(&w));
    }
    b.finish()
}

/// `int_{S^{m-1}} p dS` in one family; the other family stays free.
pub fn sphere_integral<S: Coeff>(p: &CliffPoly<S>, fam: Family) -> OmegaScaled<CliffPoly<S>> {
    OmegaScaled::new(integrate_family(p, fam, sphere_mean), 1)
}

/// `int_{B^m} p dx` over the unit ball in one family.
pub fn ball_integral<S: Coeff>(p: &CliffPoly<S>, fam: Family) -> OmegaScaled<CliffPoly<S>> {
    OmegaScaled::new(integrate_family(p, fam, ball_factor), 1)
}

/// `int_{S^{m-1}} bar(f) g dS` in one family.
pub fn sphere_pairing<S: Coeff>(f: &CliffPoly<S>, g: &CliffPoly<S>, fam: Family) -> OmegaScaled<CliffPoly<S>> {
    sphere_integral(&(&f.conjugate() * g), fam)
}
