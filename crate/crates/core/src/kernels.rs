//! Reproducing kernels of `H_k` and `M_k` on the unit sphere.
//!
//! A kernel is a polynomial in two vector variables `u` and `v`. It is stored
//! as a [`CliffPoly`] with `u` in the `u` slot and `v` in the `x` slot, times
//! `omega_m^{-1}`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::clifford::{Blade, Multivector};
use crate::error::{HscaError, Result};
use crate::harmonic::{harmonic_basis, monogenic_basis, SpaceKind};
use crate::integrate::{sphere_integral, sphere_mean};
use crate::linalg::RationalMatrix;
use crate::poly::{CliffPoly, Family, TermBuilder};
use crate::rational::Rational;

/// A reproducing kernel `K(u, v) = poly(u, v) / omega_m`.
#[derive(Clone, Debug)]
pub struct BiKernel {
    pub m: usize,
    pub k: usize,
    pub kind: SpaceKind,
    /// `omega_m * K`, with `v` in the `x` slot.
    pub poly: CliffPoly<Rational>,
}

impl BiKernel {
    /// `int_S bar(K(u, v)) f(u) dS(u)` for the monogenic kernel, and
    /// `int_S K(u, v) f(u) dS(u)` for the (scalar, self-conjugate) harmonic one;
    /// the result is a polynomial in `v`, returned in the `u` slot.
    pub fn reproduce(&self, f: &CliffPoly<Rational>) -> Result<CliffPoly<Rational>> {
        if f.dim() != self.m {
            return Err(HscaError::DimensionMismatch { left: self.m, right: f.dim() });
        }
        let kern = match self.kind {
            SpaceKind::Harmonic => self.poly.clone(),
            SpaceKind::Monogenic => self.poly.conjugate(),
        };
        // omega^{-1} from the kernel cancels omega from the integral
        let integ = sphere_integral(&kern.try_mul(f)?, Family::U);
        debug_assert_eq!(integ.omega_power, 1);
        Ok(integ.value.swap_families())
    }

    /// True when swapping `u` and `v` leaves the kernel unchanged.
    pub fn is_symmetric(&self) -> bool {
        self.poly.swap_families() == self.poly
    }
}

/// Harmonic kernel `sum_ij h_i(u) (G^{-1})_ij h_j(v) / omega_m` over the scalar
/// basis of `H_k`, with `G` the Gram matrix of sphere means.
fn build_harmonic_kernel(m: usize, k: usize) -> Result<BiKernel> {
    let basis = harmonic_basis(m, k)?;
    let ginv = basis.gram.inverse()?;
    let vs: Vec<_> = basis.elems.iter().map(|h| h.swap_families()).collect();
    let mut b = TermBuilder::new(m);
    for (i, hi) in basis.elems.iter().enumerate() {
        for (j, hj) in vs.iter().enumerate() {
            let c = ginv.get(i, j);
            if c.is_zero() {
                continue;
            }
            b.extend_poly(&(hi * hj).scale(c));
        }
    }
    Ok(BiKernel { m, k, kind: SpaceKind::Harmonic, poly: b.finish() })
}

type Mv = Multivector<Rational>;

/// Solves `c y = 1` in `Cl_m` through the real left-multiplication matrix.
pub fn multivector_inverse(c: &Mv) -> Result<Mv> {
    let m = c.dim();
    let nb = 1usize << m;
    let mut lm = RationalMatrix::zeros(nb);
    for (blade, s) in c.terms() {
        for col in 0..nb {
            let (neg, out) = blade.product(Blade(col as u8));
            let v = if neg { -s.clone() } else { s.clone() };
            lm.set(out.0 as usize, col, lm.get(out.0 as usize, col).clone() + v);
        }
    }
    let inv = lm.inverse()?;
    // y = inv * e_0: the first column
    Ok(Multivector::from_terms(m, (0..nb).map(|i| (Blade(i as u8), inv.get(i, 0).clone()))))
}

/// Left inverse of a square matrix over `Cl_m` by Gauss-Jordan elimination
/// with row operations applied from the left.
pub fn clifford_matrix_inverse(g: &[Vec<Mv>]) -> Result<Vec<Vec<Mv>>> {
    let n = g.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = g[0][0].dim();
    let mut a: Vec<Vec<Mv>> = g.to_vec();
    let mut inv: Vec<Vec<Mv>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Mv::one(m) } else { Mv::zero(m) }).collect()).collect();
    let mul = |x: &Mv, y: &Mv| x.geometric_product(y).expect("same dimension");
    for col in 0..n {
        let (piv, pinv) = (col..n)
            .find_map(|r| if a[r][col].is_zero() { None } else { multivector_inverse(&a[r][col]).ok().map(|p| (r, p)) })
            .ok_or(HscaError::Singular)?;
        a.swap(piv, col);
        inv.swap(piv, col);
        for j in 0..n {
            a[col][j] = mul(&pinv, &a[col][j]);
            inv[col][j] = mul(&pinv, &inv[col][j]);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].sub(&mul(&f, &a[col][j]))?;
                inv[r][j] = inv[r][j].sub(&mul(&f, &inv[col][j]))?;
            }
        }
    }
    Ok(inv)
}

fn sphere_mean_mv(p: &CliffPoly<Rational>) -> Mv {
    let m = p.dim();
    let mut out = Mv::zero(m);
    for t in p.terms() {
        let w = sphere_mean(m, t.mono.u);
        if !w.is_zero() {
            out.add_term(t.blade, t.coeff.clone() * w);
        }
    }
    out
}

/// Monogenic kernel: with `G_il` the Clifford-valued sphere mean of
/// `bar(p_i) p_l` over the module basis and `A = G^{-1}`,
/// `bar(K(u, v)) = sum_ij p_i(v) A_ij bar(p_j(u)) / omega_m`, so that
/// `K = sum_j p_j(u) sum_i bar(A_ij) bar(p_i(v)) / omega_m`.
fn build_monogenic_kernel(m: usize, k: usize) -> Result<BiKernel> {
    let basis = monogenic_basis(m, k)?;
    let n = basis.len();
    let conj: Vec<_> = basis.elems.iter().map(|p| p.conjugate()).collect();
    let gram: Vec<Vec<Mv>> =
        (0..n).map(|i| (0..n).map(|l| sphere_mean_mv(&(&conj[i] * &basis.elems[l]))).collect()).collect();
    let a = clifford_matrix_inverse(&gram)?;
    let conj_v: Vec<_> = conj.iter().map(|p| p.swap_families()).collect();
    let mut b = TermBuilder::new(m);
    for j in 0..n {
        let mut bj = TermBuilder::new(m);
        for i in 0..n {
            bj.extend_poly(&conj_v[i].left_mul(&a[i][j].conjugate()));
        }
        b.extend_poly(&(&basis.elems[j] * &bj.finish()));
    }
    Ok(BiKernel { m, k, kind: SpaceKind::Monogenic, poly: b.finish() })
}

type Memo = RwLock<HashMap<(usize, usize, SpaceKind), Arc<BiKernel>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn cached(m: usize, k: usize, kind: SpaceKind) -> Result<Arc<BiKernel>> {
    let key = (m, k, kind);
    if let Some(z) = memo().read().expect("kernel memo poisoned").get(&key) {
        return Ok(z.clone());
    }
    let built = Arc::new(match kind {
        SpaceKind::Harmonic => build_harmonic_kernel(m, k)?,
        SpaceKind::Monogenic => build_monogenic_kernel(m, k)?,
    });
    Ok(memo().write().expect("kernel memo poisoned").entry(key).or_insert(built).clone())
}

/// Reproducing kernel of the scalar harmonics `H_k`.
pub fn zonal_harmonic_kernel(m: usize, k: usize) -> Result<Arc<BiKernel>> {
    crate::clifford::check_dim(m)?;
    cached(m, k, SpaceKind::Harmonic)
}

/// Reproducing kernel of `M_k` for the pairing `int bar(K(u, v)) f(u) dS(u)`.
pub fn zonal_monogenic_kernel(m: usize, k: usize) -> Result<Arc<BiKernel>> {
    crate::clifford::check_dim(m)?;
    if m < 3 {
        return Err(HscaError::UnsupportedParams { m, k, reason: "monogenic kernel needs m >= 3".into() });
    }
    cached(m, k, SpaceKind::Monogenic)
}
