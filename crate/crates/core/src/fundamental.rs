//! Fundamental solutions of the Rarita-Schwinger operator, the remaining
//! operator and the bosonic Laplacian, evaluated through second-order jets.
//!
//! Each solution is a closed-form expression in `x` built from `|x|`, the
//! vector `x` itself and a reproducing kernel evaluated at the reflected
//! variable `w = x u x / |x|^2 = u - 2 <u,x> x / |x|^2`. For a numeric `x` and
//! `v` the result is a polynomial in `u` with float Clifford coefficients.

use std::collections::BTreeMap;

use crate::clifford::{Multivector, VectorM};
use crate::error::{HscaError, Result};
use crate::harmonic::{project_minus_unchecked, project_plus_unchecked};
use crate::integrate::{gamma_half, omega};
use crate::jet::Jet2;
use crate::kernels::{zonal_harmonic_kernel, zonal_monogenic_kernel, BiKernel};
use crate::poly::{CliffPoly, Exponents, Family, PointM, Var};

type UPoly = CliffPoly<f64>;
type Jet = Jet2<UPoly>;

#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum FundamentalKind {
    /// Annihilated by the Rarita-Schwinger operator `R_k`.
    E,
    /// Annihilated by the remaining operator `Q_k`.
    F,
    /// Annihilated by the bosonic Laplacian `D_k`.
    H,
}

impl FundamentalKind {
    pub fn name(self) -> &'static str {
        match self {
            FundamentalKind::E => "E",
            FundamentalKind::F => "F",
            FundamentalKind::H => "H",
        }
    }
}

/// `a_k = (m - 2) / (m + 2k - 2)`.
pub fn a_k(m: usize, k: usize) -> f64 {
    (m as f64 - 2.0) / (m as f64 + 2.0 * k as f64 - 2.0)
}

/// `c_{m,k} = (m + 2k - 4) Gamma(m/2 - 1) / (4 (4 - m) pi^{m/2})`; undefined at
/// `m = 4`.
pub fn c_mk(m: usize, k: usize) -> Result<f64> {
    if m == 4 {
        return Err(HscaError::UnsupportedParams { m, k, reason: "constant divides by 4-m".into() });
    }
    let mf = m as f64;
    Ok((mf + 2.0 * k as f64 - 4.0) * gamma_half(m - 2) / (4.0 * (4.0 - mf) * std::f64::consts::PI.powf(mf / 2.0)))
}

#[derive(Clone, Debug)]
pub struct FundamentalSolution {
    pub kind: FundamentalKind,
    pub m: usize,
    pub k: usize,
    /// Overall scalar factor of the closed form, with the `1/omega_m` of the
    /// kernel already folded in.
    factor: f64,
    kernel: std::sync::Arc<BiKernel>,
}

impl FundamentalSolution {
    pub fn new(kind: FundamentalKind, m: usize, k: usize) -> Result<Self> {
        crate::clifford::check_dim(m)?;
        if m < 3 {
            return Err(HscaError::UnsupportedParams { m, k, reason: "requires m >= 3".into() });
        }
        let w = omega(m);
        let (factor, kernel) = match kind {
            FundamentalKind::E => (1.0 / (w * a_k(m, k)) / w, zonal_monogenic_kernel(m, k)?),
            FundamentalKind::F => {
                if k == 0 {
                    return Err(HscaError::UnsupportedParams { m, k, reason: "F_k needs k >= 1".into() });
                }
                (-1.0 / (w * a_k(m, k)) / w, zonal_monogenic_kernel(m, k - 1)?)
            }
            FundamentalKind::H => (c_mk(m, k)? / w, zonal_harmonic_kernel(m, k)?),
        };
        Ok(FundamentalSolution { kind, m, k, factor, kernel })
    }

    fn coords<'a>(&self, pt: &'a PointM) -> Result<(&'a [f64], &'a [f64])> {
        let x = pt.x.as_slice();
        let v = pt.v.as_deref().ok_or(HscaError::MissingFamily("v"))?;
        if x.len() != self.m || v.len() != self.m {
            return Err(HscaError::DimensionMismatch { left: self.m, right: x.len().max(v.len()) });
        }
        if x.iter().all(|c| *c == 0.0) {
            return Err(HscaError::SingularPoint("x = 0".into()));
        }
        Ok((x, v))
    }

    /// The solution and its first two `x`-derivatives at `pt.x`, for the
    /// second variable `pt.v`.
    pub fn jet(&self, pt: &PointM) -> Result<Jet> {
        let (x, v) = self.coords(pt)?;
        Ok(self.build(x, v, self.m))
    }

    /// The value at `pt` as a polynomial in `u`.
    pub fn eval(&self, pt: &PointM) -> Result<UPoly> {
        let (x, v) = self.coords(pt)?;
        Ok(self.build(x, v, 0).value)
    }

    /// Value at raw coordinates, for quadrature loops.
    pub fn value_at(&self, x: &[f64], v: &[f64]) -> UPoly {
        self.build(x, v, 0).value
    }

    /// Fixes the second variable, so repeated evaluations in `x` reuse the
    /// substituted kernel.
    pub fn bind(&self, v: &[f64]) -> BoundSolution<'_> {
        BoundSolution { sol: self, v: v.to_vec(), groups: kernel_groups(&self.kernel, v) }
    }

    fn build(&self, x: &[f64], v: &[f64], dirs: usize) -> Jet {
        self.build_with(x, v, &kernel_groups(&self.kernel, v), dirs)
    }

    fn build_with(&self, x: &[f64], v: &[f64], groups: &[(Exponents, Multivector<f64>)], dirs: usize) -> Jet {
        let m = self.m;
        let s = Jet2::norm_sq(x);
        let kern = kernel_at_reflection(groups, x, dirs);
        let radial = |p: f64| s.powf(p).truncate(dirs).lift(m);
        let out = match self.kind {
            FundamentalKind::E => vector_jet(x, dirs).mul(&radial(-(m as f64) / 2.0)).mul(&kern),
            FundamentalKind::F => {
                let u = Jet2::constant(UPoly::vector(m, Family::U), dirs);
                let vmv = VectorM::new(v.to_vec()).to_multivector();
                u.mul(&vector_jet(x, dirs)).mul(&radial(-(m as f64) / 2.0)).mul(&kern).map_linear(|p| p.right_mul(&vmv))
            }
            FundamentalKind::H => radial((2.0 - m as f64) / 2.0).mul(&kern),
        };
        out.scale(self.factor)
    }

    /// Applies the matching operator in `x` (`R_k`, `Q_k` or `D_k`) and
    /// returns the largest output coefficient relative to the largest
    /// coefficient of the value.
    pub fn residual(&self, pt: &PointM) -> Result<f64> {
        let r: f64 = pt.x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(0.5..=2.0).contains(&r) {
            return Err(HscaError::SingularPoint(format!("|x| = {r} outside [0.5, 2]")));
        }
        let jet = self.jet(pt)?;
        let applied = match self.kind {
            FundamentalKind::E => project_plus_unchecked(&dirac_of(&jet), self.k),
            FundamentalKind::F => project_minus_unchecked(&dirac_of(&jet), self.k),
            FundamentalKind::H => laplacian_of(&jet, self.k),
        };
        let scale = jet.value.max_abs_coeff();
        if scale == 0.0 {
            return Ok(applied.max_abs_coeff());
        }
        Ok(applied.max_abs_coeff() / scale)
    }
}

/// A [`FundamentalSolution`] with its second variable fixed.
#[derive(Clone, Debug)]
pub struct BoundSolution<'a> {
    sol: &'a FundamentalSolution,
    v: Vec<f64>,
    groups: Vec<(Exponents, Multivector<f64>)>,
}

impl BoundSolution<'_> {
    /// Value at `x` as a polynomial in `u`.
    pub fn value_at(&self, x: &[f64]) -> UPoly {
        self.sol.build_with(x, &self.v, &self.groups, 0).value
    }
}

/// `sum_j e_j d/dx_j` applied to a jet's value.
fn dirac_of(jet: &Jet) -> UPoly {
    let m = jet.value.dim();
    let mut acc = UPoly::zero(m);
    for (j, g) in jet.grad.iter().enumerate() {
        acc = &acc + &g.left_mul(&Multivector::generator(m, j + 1));
    }
    acc
}

/// The explicit second-order bosonic Laplacian from the jet's Hessian.
fn laplacian_of(jet: &Jet, k: usize) -> UPoly {
    let m = jet.value.dim();
    let c = (m + 2 * k) as f64 - 2.0;
    let b = (m + 2 * k) as f64 - 4.0;
    let mut lap = UPoly::zero(m);
    let mut t2 = UPoly::zero(m);
    let mut t3 = UPoly::zero(m);
    for i in 0..m {
        lap = &lap + jet.h(i, i);
        for j in 0..m {
            let d = jet.h(i, j).partial(Var::u(j));
            t2 = &t2 + &(&UPoly::var(m, Var::u(i)) * &d);
            t3 = &t3 + &d.partial(Var::u(i));
        }
    }
    let t3 = t3.mul_u_norm_sq();
    &(&lap + &t2.scale(&(-4.0 / c))) + &t3.scale(&(4.0 / (c * b)))
}

/// The Clifford vector `x` as a jet.
fn vector_jet(x: &[f64], dirs: usize) -> Jet {
    let m = x.len();
    let value = UPoly::constant(&VectorM::new(x.to_vec()).to_multivector());
    let mut j = Jet2::constant(value, dirs);
    for i in 0..dirs {
        j.grad[i] = UPoly::constant(&Multivector::generator(m, i + 1));
    }
    j
}

/// Jets of the components `w_j = u_j - 2 <u,x> x_j / |x|^2` of `x u x / |x|^2`.
fn reflected_u(x: &[f64], dirs: usize) -> Vec<Jet> {
    let m = x.len();
    let inv_s = Jet2::norm_sq(x).powf(-1.0);
    let mut ux = Jet2::constant(UPoly::zero(m), dirs);
    for i in 0..m {
        let ui = UPoly::var(m, Var::u(i));
        ux.value = &ux.value + &ui.scale(&x[i]);
        if i < dirs {
            ux.grad[i] = ui;
        }
    }
    (0..m)
        .map(|j| {
            let coef = Jet2::coordinate(x, j).mul(&inv_s).scale(-2.0).truncate(dirs).lift(m);
            let uj = Jet2::constant(UPoly::var(m, Var::u(j)), dirs);
            uj.add(&ux.mul(&coef))
        })
        .collect()
}

/// The kernel grouped by its `u`-monomial, with `v` substituted numerically.
fn kernel_groups(kern: &BiKernel, v: &[f64]) -> Vec<(Exponents, Multivector<f64>)> {
    let m = kern.m;
    let mut groups: BTreeMap<Exponents, Multivector<f64>> = BTreeMap::new();
    for t in kern.poly.evaluate_family(Family::X, v).terms() {
        groups.entry(t.mono.u).or_insert_with(|| Multivector::zero(m)).add_term(t.blade, t.coeff);
    }
    groups.into_iter().collect()
}

/// `omega_m * Z(w, v)` as a jet in `x`, with the kernel's `u` variable replaced
/// by the reflection `w`.
fn kernel_at_reflection(groups: &[(Exponents, Multivector<f64>)], x: &[f64], dirs: usize) -> Jet {
    let m = x.len();
    let w = reflected_u(x, dirs);
    let mut powers: Vec<Vec<Jet>> = w.iter().map(|wj| vec![Jet2::constant(UPoly::one(m), dirs), wj.clone()]).collect();
    let mut power = |j: usize, p: usize| -> Jet {
        while powers[j].len() <= p {
            let next = powers[j].last().unwrap().mul(&w[j]);
            powers[j].push(next);
        }
        powers[j][p].clone()
    };
    let mut acc = Jet2::constant(UPoly::zero(m), dirs);
    for (alpha, c) in groups {
        let mut mono = Jet2::constant(UPoly::one(m), dirs);
        for j in 0..m {
            let p = alpha.get(j) as usize;
            if p > 0 {
                mono = mono.mul(&power(j, p));
            }
        }
        acc = acc.add(&mono.map_linear(|q| q.right_mul(c)));
    }
    acc
}

pub fn eval_e_k(m: usize, k: usize, pt: &PointM) -> Result<UPoly> {
    FundamentalSolution::new(FundamentalKind::E, m, k)?.eval(pt)
}

pub fn eval_f_k(m: usize, k: usize, pt: &PointM) -> Result<UPoly> {
    FundamentalSolution::new(FundamentalKind::F, m, k)?.eval(pt)
}

pub fn eval_h_k(m: usize, k: usize, pt: &PointM) -> Result<UPoly> {
    FundamentalSolution::new(FundamentalKind::H, m, k)?.eval(pt)
}

pub fn residual_annihilation(kind: FundamentalKind, m: usize, k: usize, pt: &PointM) -> Result<f64> {
    FundamentalSolution::new(kind, m, k)?.residual(pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Blade;

    fn pt(x: Vec<f64>, v: Vec<f64>) -> PointM {
        PointM::new(x).unwrap().with_v(v).unwrap()
    }

    #[test]
    fn constants() {
        assert!((a_k(3, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((c_mk(3, 1).unwrap() - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(c_mk(4, 1).is_err());
        assert!(FundamentalSolution::new(FundamentalKind::H, 4, 1).is_err());
    }

    #[test]
    fn cauchy_kernel_at_k0() {
        let p = pt(vec![0.3, -1.2, 0.5], vec![1.0, 0.0, 0.0]);
        let e0 = eval_e_k(3, 0, &p).unwrap();
        let r2: f64 = p.x.iter().map(|c| c * c).sum();
        let w = omega(3);
        for j in 0..3 {
            let got = e0.blade_part(Blade::generator(j + 1)).terms()[0].coeff;
            assert!((got - p.x[j] / (w * w * r2.powf(1.5))).abs() < 1e-14);
        }
        assert!(residual_annihilation(FundamentalKind::E, 3, 0, &p).unwrap() < 1e-10);
    }

    #[test]
    fn annihilation_m3() {
        let v = vec![0.6, 0.0, 0.8];
        for k in 1..=2 {
            for x in [vec![1.0, 0.0, 0.0], vec![0.4, -0.7, 0.9], vec![0.8, 1.2, -0.6]] {
                let p = pt(x, v.clone());
                for kind in [FundamentalKind::E, FundamentalKind::F, FundamentalKind::H] {
                    let r = residual_annihilation(kind, 3, k, &p).unwrap();
                    assert!(r < 1e-9, "{kind:?} k={k} residual {r}");
                }
            }
        }
    }

    #[test]
    fn scaling_in_x() {
        let m = 3;
        let p1 = pt(vec![0.4, -0.2, 0.5], vec![0.0, 1.0, 0.0]);
        let p2 = pt(vec![0.8, -0.4, 1.0], vec![0.0, 1.0, 0.0]);
        let e1 = eval_e_k(m, 1, &p1).unwrap();
        let e2 = eval_e_k(m, 1, &p2).unwrap();
        let diff = &e2 - &e1.scale(&2f64.powi(1 - m as i32));
        assert!(diff.max_abs_coeff() < 1e-12 * e1.max_abs_coeff());
        let f = eval_f_k(m, 1, &PointM::new(vec![0.5, 0.5, 0.0]).unwrap().with_v(vec![1.0, 0.0, 0.0]).unwrap());
        let at_zero = f.unwrap().evaluate(&PointM::new(vec![0.0; 3]).unwrap().with_u(vec![0.0; 3]).unwrap());
        assert!(at_zero.unwrap().max_abs() == 0.0);
    }

    #[test]
    fn value_path_matches_jet() {
        let p = pt(vec![0.4, -0.7, 0.9], vec![0.6, 0.0, 0.8]);
        for kind in [FundamentalKind::E, FundamentalKind::F, FundamentalKind::H] {
            let fs = FundamentalSolution::new(kind, 3, 2).unwrap();
            let diff = &fs.eval(&p).unwrap() - &fs.jet(&p).unwrap().value;
            assert!(diff.max_abs_coeff() < 1e-14);
        }
    }

    #[test]
    fn rejects_origin() {
        let p = pt(vec![0.0; 3], vec![1.0, 0.0, 0.0]);
        assert!(matches!(eval_h_k(3, 1, &p), Err(HscaError::SingularPoint(_))));
    }
}
