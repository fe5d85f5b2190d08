//! Numerical probe of the Borel-Pompeiu formula for the matrix operator on the
//! unit ball.
//!
//! The `u`-integrals are exact sphere means. The `x`-integrals use tensor
//! Gauss-Legendre rules in hyperspherical angles; the volume integral is taken
//! in polar coordinates centred at `y`, where the kernel's homogeneity of
//! degree `1 - m` cancels the radial Jacobian.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use serde::Serialize;

use crate::clifford::{Blade, Multivector, VectorM};
use crate::error::{HscaError, Result};
use crate::fundamental::{FundamentalKind, FundamentalSolution};
use crate::harmonic::HPair;
use crate::integrate::{omega, sphere_mean};
use crate::operators::SpinContext;
use crate::poly::{CliffPoly, Exponents, Family, PointM};
use crate::rational::Rational;
use crate::scalar::Coeff;

/// Largest admissible `|y|`.
pub const MAX_CENTER_NORM: f64 = 0.9;

/// Default quadrature order per dimension.
pub fn default_order(m: usize) -> usize {
    match m {
        0..=3 => 24,
        4 => 16,
        _ => 10,
    }
}

/// Nodes and weights on `S^{m-1}`, exact for polynomials of degree below
/// `2 * order`: each polar coordinate `t = cos(theta)` of `S^{d-1}` uses
/// Gauss-Jacobi with weight `(1 - t^2)^{(d-3)/2}`, the azimuth `2 * order`
/// uniform points.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub points: Vec<(Vec<f64>, f64)>,
}

impl SphereRule {
    pub fn new(m: usize, order: usize) -> Self {
        assert!(m >= 2 && order >= 1);
        let nphi = 2 * order;
        let dphi = 2.0 * PI / nphi as f64;
        let mut points: Vec<(Vec<f64>, f64)> =
            (0..nphi).map(|i| (vec![(i as f64 * dphi).cos(), (i as f64 * dphi).sin()], dphi)).collect();
        for d in 3..=m {
            let ab = FiniteAboveNegOneF64::new((d as f64 - 3.0) / 2.0).expect("finite exponent");
            let polar = GaussJacobi::new(NonZeroUsize::new(order).expect("order >= 1"), ab, ab);
            let mut next = Vec::with_capacity(points.len() * order);
            for &(t, wt) in polar.as_node_weight_pairs() {
                let s = (1.0 - t * t).sqrt();
                for (p, w) in &points {
                    let mut q = Vec::with_capacity(d);
                    q.push(t);
                    q.extend(p.iter().map(|z| s * z));
                    next.push((q, w * wt));
                }
            }
            points = next;
        }
        SphereRule { points }
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.1).sum()
    }
}

fn legendre(order: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(order).expect("order >= 1")).as_node_weight_pairs().to_vec()
}

/// Exact `int_S a(u) b(u) dS(u)` for `u`-only polynomials, computed over
/// monomial groups with dense multivector products.
struct USphere {
    m: usize,
    omega: f64,
    means: HashMap<Exponents, f64>,
    /// `(negative, product)` for every pair of blades, row-major.
    table: Vec<(bool, usize)>,
}

type Groups = Vec<(Exponents, Vec<f64>)>;

impl USphere {
    fn new(m: usize) -> Self {
        let nb = 1usize << m;
        let table = (0..nb * nb)
            .map(|i| {
                let (neg, out) = Blade((i / nb) as u8).product(Blade((i % nb) as u8));
                (neg, out.0 as usize)
            })
            .collect();
        USphere { m, omega: omega(m), means: HashMap::new(), table }
    }

    fn groups(&self, p: &CliffPoly<f64>) -> Groups {
        let nb = 1usize << self.m;
        let mut idx: HashMap<Exponents, usize> = HashMap::new();
        let mut out: Groups = Vec::new();
        for t in p.terms() {
            let i = *idx.entry(t.mono.u).or_insert_with(|| {
                out.push((t.mono.u, vec![0.0; nb]));
                out.len() - 1
            });
            out[i].1[t.blade.0 as usize] += t.coeff;
        }
        out
    }

    fn pair(&mut self, a: &Groups, b: &Groups) -> Multivector<f64> {
        let (m, nb) = (self.m, 1usize << self.m);
        let mut out = vec![0.0; nb];
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e = ea.checked_add(*eb);
                let mean = *self.means.entry(e).or_insert_with(|| sphere_mean(m, e).to_f64());
                if mean == 0.0 {
                    continue;
                }
                for (i, &x) in ca.iter().enumerate() {
                    if x == 0.0 {
                        continue;
                    }
                    let row = &self.table[i * nb..(i + 1) * nb];
                    for (j, &y) in cb.iter().enumerate() {
                        if y != 0.0 {
                            let (neg, o) = row[j];
                            let v = x * y * mean;
                            out[o] += if neg { -v } else { v };
                        }
                    }
                }
            }
        }
        Multivector::from_terms(m, out.into_iter().enumerate().map(|(i, c)| (Blade(i as u8), c * self.omega)))
    }
}

/// Which assembly of the formula was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeForm {
    /// `k = 0`: boundary term plus `int G (-D_x f)`, the classical
    /// Cauchy-kernel formula.
    Classical,
    /// `k >= 1`: kernel column `(E_k, F_k)` in the formula as displayed.
    Candidate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeOutcome {
    pub m: usize,
    pub k: usize,
    pub order: usize,
    pub form: ProbeForm,
    pub reconstructed: Vec<f64>,
    pub reference: Vec<f64>,
    pub abs_error: f64,
    /// `abs_error / max(|reference|, 1)`.
    pub scaled_error: f64,
    /// Distance between the results at `order` and `3 * order / 4`.
    pub coarse_gap: f64,
    pub converged: bool,
}

/// Relative gap between two orders below which the quadrature counts as
/// converged.
pub const CONVERGENCE_TOL: f64 = 1e-4;

struct Probe<'a> {
    m: usize,
    y: &'a [f64],
    v: &'a [f64],
    form: ProbeForm,
    f1: CliffPoly<f64>,
    f2: CliffPoly<f64>,
    vol1: CliffPoly<f64>,
    vol2: CliffPoly<f64>,
    boundary_weight: f64,
    e: FundamentalSolution,
    f: Option<FundamentalSolution>,
}

fn to_float<S: Coeff>(p: &CliffPoly<S>) -> CliffPoly<f64> {
    p.map_coeffs(|c| c.to_f64())
}

fn dense(mv: &Multivector<f64>) -> Vec<f64> {
    (0..1usize << mv.dim()).map(|b| mv.coeff(crate::clifford::Blade(b as u8))).collect()
}

fn accumulate(acc: &mut Multivector<f64>, part: &Multivector<f64>, w: f64) {
    for (b, c) in part.terms() {
        acc.add_term(b, c * w);
    }
}

impl Probe<'_> {
    fn u_pairing(
        &self,
        us: &mut USphere,
        kernel: &CliffPoly<f64>,
        mid: Option<&Multivector<f64>>,
        g: &CliffPoly<f64>,
    ) -> Multivector<f64> {
        let mut k = kernel.conjugate();
        if let Some(n) = mid {
            k = k.right_mul(n);
        }
        let (ka, gb) = (us.groups(&k), us.groups(g));
        us.pair(&ka, &gb)
    }

    fn evaluate(&self, order: usize) -> Multivector<f64> {
        let m = self.m;
        let mut us = USphere::new(m);
        let rule = SphereRule::new(m, order);
        let radial = legendre(order);
        let e_bound = self.e.bind(self.v);
        let f_bound = self.f.as_ref().map(|f| f.bind(self.v));

        let mut boundary = Multivector::zero(m);
        for (x, w) in &rule.points {
            let n = VectorM::new(x.clone()).to_multivector();
            let shifted: Vec<f64> = x.iter().zip(self.y).map(|(a, b)| a - b).collect();
            let e = e_bound.value_at(&shifted);
            let f1x = self.f1.evaluate_family(Family::X, x);
            accumulate(&mut boundary, &self.u_pairing(&mut us, &e, Some(&n), &f1x), *w);
            if let Some(fs) = &f_bound {
                let f2x = self.f2.evaluate_family(Family::X, x);
                if !f2x.is_zero() {
                    let fk = fs.value_at(&shifted);
                    accumulate(&mut boundary, &self.u_pairing(&mut us, &fk, Some(&n), &f2x), -self.boundary_weight * w);
                }
            }
        }

        let mut volume = Multivector::zero(m);
        for (theta, w) in &rule.points {
            let yt: f64 = self.y.iter().zip(theta).map(|(a, b)| a * b).sum();
            let yy: f64 = self.y.iter().map(|a| a * a).sum();
            let rho_max = -yt + (yt * yt - yy + 1.0).sqrt();
            let mut g1 = CliffPoly::zero(m);
            let mut g2 = CliffPoly::zero(m);
            for &(t, wr) in &radial {
                let rho = 0.5 * rho_max * (t + 1.0);
                let x: Vec<f64> = self.y.iter().zip(theta).map(|(a, b)| a + rho * b).collect();
                let s = 0.5 * rho_max * wr;
                g1 = &g1 + &self.vol1.evaluate_family(Family::X, &x).scale(&s);
                if self.f.is_some() {
                    g2 = &g2 + &self.vol2.evaluate_family(Family::X, &x).scale(&s);
                }
            }
            // E(rho theta) rho^{m-1} = E(theta)
            let e = e_bound.value_at(theta);
            accumulate(&mut volume, &self.u_pairing(&mut us, &e, None, &g1), *w);
            if let (Some(fs), false) = (&f_bound, g2.is_zero()) {
                let fk = fs.value_at(theta);
                accumulate(&mut volume, &self.u_pairing(&mut us, &fk, None, &g2), *w);
            }
        }

        match self.form {
            ProbeForm::Classical => boundary.add(&volume),
            ProbeForm::Candidate => boundary.sub(&volume),
        }
        .expect("same dimension")
    }
}

/// Evaluates the right-hand side of the Borel-Pompeiu formula for `f` on the
/// unit ball at the interior point `y` and second variable `v`, and compares
/// it with `f(y, v)`.
pub fn borel_pompeiu_probe(f: &HPair<Rational>, y: &[f64], v: &[f64], order: usize) -> Result<ProbeOutcome> {
    let m = f.dim();
    let k = f.k;
    if y.len() != m || v.len() != m {
        return Err(HscaError::DimensionMismatch { left: m, right: if y.len() != m { y.len() } else { v.len() } });
    }
    let ynorm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
    if ynorm.is_nan() || ynorm >= MAX_CENTER_NORM {
        return Err(HscaError::OutOfDomain(format!("|y| = {ynorm} must be below {MAX_CENTER_NORM}")));
    }
    if order < 2 {
        return Err(HscaError::UnsupportedParams { m, k, reason: "quadrature order must be at least 2".into() });
    }
    if !f.components_valid() {
        return Err(HscaError::WrongSummand { expected: "M_k x u M_(k-1)" });
    }
    let e = FundamentalSolution::new(FundamentalKind::E, m, k)?;
    let probe = if k == 0 {
        Probe {
            m,
            y,
            v,
            form: ProbeForm::Classical,
            f1: to_float(&f.f1),
            f2: CliffPoly::zero(m),
            vol1: to_float(&-&f.f1.dirac(Family::X)),
            vol2: CliffPoly::zero(m),
            boundary_weight: 0.0,
            e,
            f: None,
        }
    } else {
        let ctx = SpinContext::new(m, k)?;
        let d1f = ctx.matrix_d1().apply(f);
        Probe {
            m,
            y,
            v,
            form: ProbeForm::Candidate,
            f1: to_float(&f.f1),
            f2: to_float(&f.f2),
            vol1: to_float(&d1f.f1),
            vol2: to_float(&d1f.f2),
            boundary_weight: ctx.boundary_weight().to_f64(),
            e,
            f: Some(FundamentalSolution::new(FundamentalKind::F, m, k)?),
        }
    };

    let reference = f.recombine().evaluate(&PointM::new(y.to_vec())?.with_u(v.to_vec())?)?;
    let fine = probe.evaluate(order);
    let coarse = probe.evaluate((3 * order / 4).max(1));
    let abs_error = fine.sub(&reference)?.max_abs();
    let scaled_error = abs_error / reference.max_abs().max(1.0);
    let coarse_gap = fine.sub(&coarse)?.max_abs();
    Ok(ProbeOutcome {
        m,
        k,
        order,
        form: probe.form,
        reconstructed: dense(&fine),
        reference: dense(&reference),
        abs_error,
        scaled_error,
        coarse_gap,
        converged: coarse_gap <= CONVERGENCE_TOL * fine.max_abs().max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Blade;
    use crate::harmonic::{almansi_split, harmonic_basis};
    use crate::poly::{Monomial, Var};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn sphere_rule_is_exact_on_polynomials() {
        for m in 2..=5 {
            let order = 6;
            let rule = SphereRule::new(m, order);
            assert!((rule.total_weight() - omega(m)).abs() < 1e-12 * omega(m));
            for d in 1..2 * order {
                for e in Exponents::of_degree(m, d) {
                    let got: f64 = rule
                        .points
                        .iter()
                        .map(|(p, w)| w * (0..m).map(|j| p[j].powi(e.get(j) as i32)).product::<f64>())
                        .sum();
                    let exact = omega(m) * sphere_mean(m, e).to_f64();
                    assert!((got - exact).abs() < 1e-12 * omega(m), "m={m} {e:?}");
                }
            }
        }
    }

    #[test]
    fn zero_field_gives_zero() {
        let f = HPair::zero(3, 0);
        let out = borel_pompeiu_probe(&f, &[0.1, 0.2, -0.1], &[0.0, 0.0, 1.0], 8).unwrap();
        assert_eq!(out.abs_error, 0.0);
        assert!(out.reconstructed.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn classical_reconstruction_m3() {
        let m = 3;
        // x_1^2 e_2 + x_2 x_3 + 3 x_1 e_13: not monogenic, so the volume term matters
        let mono = |e: [u8; 3]| Monomial::new(Exponents::from_slice(&e), Exponents::ZERO);
        let f1 = CliffPoly::from_terms(
            m,
            [
                crate::poly::Term { mono: mono([2, 0, 0]), blade: Blade::generator(2), coeff: q(1) },
                crate::poly::Term { mono: mono([0, 1, 1]), blade: Blade::SCALAR, coeff: q(1) },
                crate::poly::Term { mono: mono([1, 0, 0]), blade: Blade(0b101), coeff: q(3) },
            ],
        );
        let f = HPair::new(0, f1, CliffPoly::zero(m));
        let out = borel_pompeiu_probe(&f, &[0.2, -0.3, 0.1], &[0.0, 1.0, 0.0], 24).unwrap();
        assert_eq!(out.form, ProbeForm::Classical);
        assert!(out.abs_error < 1e-4, "{out:?}");
        assert!(out.converged);
    }

    #[test]
    fn candidate_reports_for_k1() {
        let m = 3;
        let h = &harmonic_basis(m, 1).unwrap().elems[0] * &CliffPoly::var(m, Var::x(0));
        let f = almansi_split(&h, 1).unwrap();
        let out = borel_pompeiu_probe(&f, &[0.1, 0.0, 0.2], &[0.6, 0.0, 0.8], 12).unwrap();
        assert_eq!(out.form, ProbeForm::Candidate);
        assert!(out.abs_error.is_finite());
    }

    #[test]
    fn rejects_far_center() {
        let f = HPair::zero(3, 0);
        assert!(matches!(
            borel_pompeiu_probe(&f, &[0.95, 0.0, 0.0], &[1.0, 0.0, 0.0], 8),
            Err(HscaError::OutOfDomain(_))
        ));
    }
}
