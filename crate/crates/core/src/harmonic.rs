//! Spaces of homogeneous harmonic (`H_k`) and monogenic (`M_k`) polynomials in
//! `u`, and the splitting `H_k = M_k + u M_{k-1}`.
//!
//! Bases come from the exact nullspace of the constraint systems `Delta_u p = 0`
//! and `D_u p = 0` on monomial coordinates. Columns are ordered by descending
//! exponent of `u_1`: each constraint then has its leading entry on a distinct
//! column whose `u_1` exponent is one or two above that of the constraint, so
//! the free columns are exactly the monomials of low `u_1` degree.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::clifford::{check_dim, Blade};
use crate::error::{HscaError, Result};
use crate::integrate::sphere_mean;
use crate::linalg::{RationalMatrix, SparseEchelon, SparseRow};
use crate::poly::{CliffPoly, Exponents, Family, Monomial, TermBuilder};
use crate::rational::Rational;
use crate::scalar::Coeff;

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum SpaceKind {
    Harmonic,
    Monogenic,
}

/// An ordered basis of `H_k` (real scalar basis, whose right `Cl_m`-span is the
/// Clifford-valued space) or of `M_k` (a basis of the right `Cl_m`-module).
#[derive(Clone, Debug)]
pub struct SpaceBasis {
    pub m: usize,
    pub k: usize,
    pub kind: SpaceKind,
    pub elems: Vec<CliffPoly<Rational>>,
    /// `gram[i][j]` is the scalar part of the sphere mean of `bar(b_i) b_j`,
    /// i.e. the surface integral divided by `omega_m`.
    pub gram: RationalMatrix,
}

impl SpaceBasis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim H_k` for real scalar harmonics in `m` variables.
pub fn harmonic_dim(m: usize, k: usize) -> usize {
    let all = binomial(m + k - 1, k);
    if k >= 2 {
        all - binomial(m + k - 3, k - 2)
    } else {
        all
    }
}

/// Rank of `M_k` as a right `Cl_m`-module.
pub fn monogenic_rank(m: usize, k: usize) -> usize {
    binomial(m + k - 2, k)
}

/// Monomials of degree `k` ordered by descending `u_1` exponent, then grlex.
fn column_order(m: usize, k: usize) -> Vec<Exponents> {
    let mut cols = Exponents::of_degree(m, k);
    cols.sort_by_key(|e| (std::cmp::Reverse(e.get(0)), e.grlex_key(m)));
    cols
}

fn gram_of(m: usize, elems: &[CliffPoly<Rational>]) -> RationalMatrix {
    let n = elems.len();
    let mut g = RationalMatrix::zeros(n);
    let conj: Vec<_> = elems.iter().map(|e| e.conjugate()).collect();
    for i in 0..n {
        for j in i..n {
            let v = sphere_mean_scalar(m, &(&conj[i] * &elems[j]));
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    g
}

fn sphere_mean_scalar(m: usize, p: &CliffPoly<Rational>) -> Rational {
    let mut acc = Rational::zero();
    for t in p.terms() {
        if t.blade == Blade::SCALAR {
            acc += t.coeff.clone() * sphere_mean(m, t.mono.u);
        }
    }
    acc
}

fn build_harmonic(m: usize, k: usize) -> SpaceBasis {
    let cols = column_order(m, k);
    let index: HashMap<Exponents, usize> = cols.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut rows: Vec<SparseRow> = Vec::new();
    if k >= 2 {
        for g in Exponents::of_degree(m, k - 2) {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let gj = g.get(j) as i64;
                let target = g.with(j, (gj + 2) as u8);
                row.push((index[&target], Rational::from_integer((gj + 2) * (gj + 1))));
            }
            rows.push(row);
        }
    }
    let ech = SparseEchelon::new(cols.len(), rows);
    let mut free: Vec<usize> = ech.free_columns();
    free.sort_by_key(|&c| cols[c].grlex_key(m));
    let elems: Vec<CliffPoly<Rational>> = free
        .iter()
        .map(|&f| {
            let mut b = TermBuilder::new(m);
            for (c, v) in ech.null_vector(f) {
                b.push(Monomial::new(Exponents::ZERO, cols[c]), Blade::SCALAR, v);
            }
            b.finish()
        })
        .collect();
    let gram = gram_of(m, &elems);
    SpaceBasis { m, k, kind: SpaceKind::Harmonic, elems, gram }
}

fn build_monogenic(m: usize, k: usize) -> SpaceBasis {
    let cols = column_order(m, k);
    let nb = 1usize << m;
    let index: HashMap<Exponents, usize> = cols.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let col = |e: Exponents, blade: Blade| index[&e] * nb + blade.0 as usize;
    // sum_j e_j (g_j + 1) c_{g + e_j} = 0 for every g of degree k-1, one real
    // equation per output blade.
    let mut rows: Vec<SparseRow> = Vec::new();
    if k >= 1 {
        for g in Exponents::of_degree(m, k - 1) {
            for out in 0..nb {
                let out = Blade(out as u8);
                let mut row = Vec::with_capacity(m);
                for j in 0..m {
                    let ej = Blade::generator(j + 1);
                    let src = Blade(ej.0 ^ out.0);
                    let (neg, prod) = ej.product(src);
                    debug_assert_eq!(prod, out);
                    let gj = g.get(j) as i64;
                    let v = Rational::from_integer(if neg { -(gj + 1) } else { gj + 1 });
                    row.push((col(g.raise(j), src), v));
                }
                row.sort_by_key(|e| e.0);
                rows.push(row);
            }
        }
    }
    let ech = SparseEchelon::new(cols.len() * nb, rows);
    let mut free: Vec<Exponents> = cols.iter().copied().filter(|e| e.get(0) == 0).collect();
    free.sort_by_key(|e| e.grlex_key(m));
    let elems: Vec<CliffPoly<Rational>> = free
        .iter()
        .map(|&e| {
            let f = col(e, Blade::SCALAR);
            debug_assert!(!ech.is_pivot(f));
            let mut b = TermBuilder::new(m);
            for (c, v) in ech.null_vector(f) {
                b.push(Monomial::new(Exponents::ZERO, cols[c / nb]), Blade((c % nb) as u8), v);
            }
            b.finish()
        })
        .collect();
    let gram = gram_of(m, &elems);
    SpaceBasis { m, k, kind: SpaceKind::Monogenic, elems, gram }
}

type Memo = RwLock<HashMap<(usize, usize, SpaceKind), Arc<SpaceBasis>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn cached(m: usize, k: usize, kind: SpaceKind) -> Result<Arc<SpaceBasis>> {
    check_dim(m)?;
    let key = (m, k, kind);
    if let Some(b) = memo().read().expect("basis memo poisoned").get(&key) {
        return Ok(b.clone());
    }
    let built = Arc::new(match kind {
        SpaceKind::Harmonic => build_harmonic(m, k),
        SpaceKind::Monogenic => build_monogenic(m, k),
    });
    let mut w = memo().write().expect("basis memo poisoned");
    Ok(w.entry(key).or_insert(built).clone())
}

/// Real scalar basis of `H_k` in `m` variables.
pub fn harmonic_basis(m: usize, k: usize) -> Result<Arc<SpaceBasis>> {
    cached(m, k, SpaceKind::Harmonic)
}

/// Right `Cl_m`-module basis of `M_k`.
pub fn monogenic_basis(m: usize, k: usize) -> Result<Arc<SpaceBasis>> {
    cached(m, k, SpaceKind::Monogenic)
}

/// Checks that `h` is homogeneous of degree `k` in `u` and harmonic in `u`.
pub fn check_harmonic<S: Coeff>(h: &CliffPoly<S>, k: usize) -> Result<()> {
    if h.is_homogeneous(Family::U, k) && h.laplacian(Family::U).is_zero() {
        Ok(())
    } else {
        Err(HscaError::NotHarmonic { k })
    }
}

/// `u D_u h / (m + 2k - 2)`, the part removed by `P_k^+`.
fn u_dirac_scaled<S: Coeff>(h: &CliffPoly<S>, k: usize) -> CliffPoly<S> {
    if k == 0 {
        return CliffPoly::zero(h.dim());
    }
    let denom = (h.dim() + 2 * k - 2) as i64;
    h.dirac(Family::U).vector_left_mul(Family::U).scale(&S::ratio(1, denom))
}

/// `P_k^+ h = h + u D_u h / (m + 2k - 2)` without validating the input.
pub fn project_plus_unchecked<S: Coeff>(h: &CliffPoly<S>, k: usize) -> CliffPoly<S> {
    h + &u_dirac_scaled(h, k)
}

/// `P_k^- h = -u D_u h / (m + 2k - 2)` without validating the input.
pub fn project_minus_unchecked<S: Coeff>(h: &CliffPoly<S>, k: usize) -> CliffPoly<S> {
    -&u_dirac_scaled(h, k)
}

pub fn project_plus<S: Coeff>(h: &CliffPoly<S>, k: usize) -> Result<CliffPoly<S>> {
    check_harmonic(h, k)?;
    Ok(project_plus_unchecked(h, k))
}

pub fn project_minus<S: Coeff>(h: &CliffPoly<S>, k: usize) -> Result<CliffPoly<S>> {
    check_harmonic(h, k)?;
    Ok(project_minus_unchecked(h, k))
}

/// The two Almansi-Fischer components of an `H_k`-valued field: `f1` takes
/// values in `M_k`, `f2` in `u M_{k-1}`.
#[derive(Clone, PartialEq, Debug)]
pub struct HPair<S: Coeff> {
    pub k: usize,
    pub f1: CliffPoly<S>,
    pub f2: CliffPoly<S>,
}

impl<S: Coeff> HPair<S> {
    pub fn new(k: usize, f1: CliffPoly<S>, f2: CliffPoly<S>) -> Self {
        HPair { k, f1, f2 }
    }

    pub fn zero(m: usize, k: usize) -> Self {
        HPair { k, f1: CliffPoly::zero(m), f2: CliffPoly::zero(m) }
    }

    pub fn dim(&self) -> usize {
        self.f1.dim()
    }

    pub fn recombine(&self) -> CliffPoly<S> {
        &self.f1 + &self.f2
    }

    pub fn is_zero(&self) -> bool {
        self.f1.is_zero() && self.f2.is_zero()
    }

    /// True when `P^- f1 = 0` and `P^+ f2 = 0`.
    pub fn components_valid(&self) -> bool {
        u_dirac_scaled(&self.f1, self.k).is_zero() && project_plus_unchecked(&self.f2, self.k).is_zero()
    }
}

pub fn almansi_split<S: Coeff>(h: &CliffPoly<S>, k: usize) -> Result<HPair<S>> {
    check_harmonic(h, k)?;
    let minus = project_minus_unchecked(h, k);
    Ok(HPair { k, f1: h - &minus, f2: minus })
}

/// For `w = u p` with `p in M_{k-1}`, recovers `p` from the eigenvalue relation
/// `D_u(u p) = -(m + 2k - 2) p` and checks the reconstruction; `None` if `w`
/// is not of that form.
pub fn u_preimage<S: Coeff>(w: &CliffPoly<S>, k: usize) -> Option<CliffPoly<S>> {
    if k == 0 {
        return if w.is_zero() { Some(CliffPoly::zero(w.dim())) } else { None };
    }
    let denom = (w.dim() + 2 * k - 2) as i64;
    let p = w.dirac(Family::U).scale(&S::ratio(-1, denom));
    let ok = p.is_homogeneous(Family::U, k - 1) && p.dirac(Family::U).is_zero() && p.vector_left_mul(Family::U) == *w;
    ok.then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Multivector;
    use crate::poly::Var;

    type P = CliffPoly<Rational>;

    fn u(m: usize, j: usize) -> P {
        P::var(m, Var::u(j - 1))
    }

    #[test]
    fn harmonic_ranks() {
        let b = harmonic_basis(3, 1).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.elems, vec![u(3, 1), u(3, 2), u(3, 3)]);
        assert_eq!(harmonic_basis(3, 2).unwrap().len(), 5);
        assert_eq!(harmonic_basis(2, 0).unwrap().elems, vec![P::one(2)]);
        for m in 2..=6 {
            for k in 0..=4 {
                let b = harmonic_basis(m, k).unwrap();
                assert_eq!(b.len(), harmonic_dim(m, k), "m={m} k={k}");
                for e in &b.elems {
                    assert!(e.laplacian(Family::U).is_zero());
                    assert!(e.is_homogeneous(Family::U, k));
                }
                assert!(b.gram.inverse().is_ok());
            }
        }
    }

    #[test]
    fn monogenic_ranks() {
        assert_eq!(monogenic_basis(3, 0).unwrap().elems, vec![P::one(3)]);
        assert_eq!(monogenic_basis(3, 1).unwrap().len(), 2);
        assert_eq!(monogenic_basis(4, 2).unwrap().len(), 6);
        for m in 2..=5 {
            for k in 0..=3 {
                let b = monogenic_basis(m, k).unwrap();
                assert_eq!(b.len(), monogenic_rank(m, k));
                for e in &b.elems {
                    assert!(e.dirac(Family::U).is_zero());
                    assert!(e.is_homogeneous(Family::U, k));
                }
            }
        }
    }

    #[test]
    fn rank_identity() {
        // real dimensions: dim_R H_k(Cl) = 2^m dim H_k; M_k module ranks add up
        for m in 3..=6 {
            for k in 1..=4 {
                assert_eq!(harmonic_dim(m, k), monogenic_rank(m, k) + monogenic_rank(m, k - 1));
            }
        }
    }

    #[test]
    fn projection_examples() {
        let m = 3;
        let third = P::scalar(m, Rational::new(1, 3));
        let ue1 = &P::vector(m, Family::U) * &P::constant(&Multivector::generator(m, 1));
        let plus = project_plus(&u(m, 1), 1).unwrap();
        assert_eq!(plus, &u(m, 1) + &(&ue1 * &third));
        assert!(plus.dirac(Family::U).is_zero());
        assert_eq!(project_minus(&u(m, 1), 1).unwrap(), -&(&ue1 * &third));

        // P^+ fixes M_k and kills u M_{k-1}
        for e in &monogenic_basis(m, 2).unwrap().elems {
            assert_eq!(project_plus(e, 2).unwrap(), *e);
        }
        let up = P::vector(m, Family::U);
        assert!(project_plus(&up, 1).unwrap().is_zero());
        assert_eq!(project_minus(&up, 1).unwrap(), up);

        let split = almansi_split(&u(m, 1), 1).unwrap();
        assert_eq!(split.recombine(), u(m, 1));
        assert!(split.components_valid());
        assert!(almansi_split(&P::zero(m), 1).unwrap().is_zero());
        assert!(project_plus(&(&u(m, 1) * &u(m, 1)), 2).is_err());
        assert!(project_plus(&u(m, 1), 2).is_err());
    }

    #[test]
    fn preimage_recovers_factor() {
        let m = 4;
        for p in &monogenic_basis(m, 1).unwrap().elems {
            let w = p.vector_left_mul(Family::U);
            assert_eq!(u_preimage(&w, 2).as_ref(), Some(p));
        }
        assert!(u_preimage(&u(m, 1), 1).is_none());
    }
}
