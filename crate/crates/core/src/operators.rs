//! Rarita-Schwinger-type operators, the bosonic Laplacian and its matrix form.
//!
//! Every operator here is a composition of three primitives acting on
//! polynomial fields: the Dirac operator in `x` and the two Almansi-Fischer
//! projections in `u`. Compositions are written left to right and applied
//! right to left, so `[PPlus, Dx]` is `P^+ D_x`, the Rarita-Schwinger operator.

use std::collections::HashMap;

use crate::error::{HscaError, Result};
use crate::harmonic::{check_harmonic, project_minus_unchecked, project_plus_unchecked, HPair};
use crate::integrate::{ball_factor, sphere_mean, OmegaScaled};
use crate::poly::{CliffPoly, Family};
use crate::rational::Rational;
use crate::scalar::{Coeff, ExactScalar};

/// Validated `(m, k)` for the second-order operators: `m >= 3` and
/// `m + 2k - 4 >= 1`, so that no denominator vanishes.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub struct SpinContext {
    m: usize,
    k: usize,
}

impl SpinContext {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        crate::clifford::check_dim(m)?;
        if m < 3 {
            return Err(HscaError::UnsupportedParams { m, k, reason: "requires m >= 3".into() });
        }
        if m + 2 * k <= 4 {
            return Err(HscaError::UnsupportedParams { m, k, reason: "m + 2k - 4 must be positive".into() });
        }
        Ok(SpinContext { m, k })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `m + 2k`.
    pub fn a(&self) -> i64 {
        (self.m + 2 * self.k) as i64
    }

    /// `m + 2k - 4`.
    pub fn b(&self) -> i64 {
        self.a() - 4
    }

    /// Square-free part of `(m + 2k)(m + 2k - 4)`: the field `Q(sqrt r)` that
    /// holds the matrix operator weights.
    pub fn radicand(&self) -> u64 {
        crate::scalar::square_free_split((self.a() * self.b()) as u64).1
    }
}

/// A `u`-harmonic field, homogeneous of degree `k` in `u`.
#[derive(Clone, PartialEq, Debug)]
pub struct HField<S: Coeff> {
    k: usize,
    poly: CliffPoly<S>,
}

impl<S: Coeff> HField<S> {
    pub fn new(poly: CliffPoly<S>, k: usize) -> Result<Self> {
        check_harmonic(&poly, k)?;
        Ok(HField { k, poly })
    }

    pub fn poly(&self) -> &CliffPoly<S> {
        &self.poly
    }

    pub fn into_poly(self) -> CliffPoly<S> {
        self.poly
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn xdeg(&self) -> usize {
        self.poly.max_degree(Family::X)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Op {
    Dx,
    PPlus,
    PMinus,
}

pub const R: [Op; 2] = [Op::PPlus, Op::Dx];
pub const Q: [Op; 2] = [Op::PMinus, Op::Dx];

/// Applies a primitive operator chain, rightmost first.
pub fn apply_chain<S: Coeff>(chain: &[Op], f: &CliffPoly<S>, k: usize) -> CliffPoly<S> {
    let mut cur = f.clone();
    for op in chain.iter().rev() {
        if cur.is_zero() {
            break;
        }
        cur = match op {
            Op::Dx => cur.dirac(Family::X),
            Op::PPlus => project_plus_unchecked(&cur, k),
            Op::PMinus => project_minus_unchecked(&cur, k),
        };
    }
    cur
}

/// Applies many chains to one input, sharing common suffixes.
pub struct ChainCache<'a> {
    k: usize,
    input: &'a CliffPoly<Rational>,
    memo: HashMap<Vec<Op>, CliffPoly<Rational>>,
}

impl<'a> ChainCache<'a> {
    pub fn new(input: &'a CliffPoly<Rational>, k: usize) -> Self {
        ChainCache { k, input, memo: HashMap::new() }
    }

    pub fn get(&mut self, chain: &[Op]) -> CliffPoly<Rational> {
        if chain.is_empty() {
            return self.input.clone();
        }
        if let Some(p) = self.memo.get(chain) {
            return p.clone();
        }
        let inner = self.get(&chain[1..]);
        let out = apply_chain(&chain[..1], &inner, self.k);
        self.memo.insert(chain.to_vec(), out.clone());
        out
    }
}

/// A weighted composition of primitive operators.
#[derive(Clone, PartialEq, Debug)]
pub struct OpTerm {
    pub weight: ExactScalar,
    pub chain: Vec<Op>,
}

/// A finite sum of weighted compositions.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct OpExpr {
    pub terms: Vec<OpTerm>,
}

impl OpExpr {
    pub fn zero() -> Self {
        OpExpr { terms: Vec::new() }
    }

    pub fn single(weight: ExactScalar, chain: &[Op]) -> Self {
        OpExpr { terms: vec![OpTerm { weight, chain: chain.to_vec() }] }
    }

    pub fn plus(mut self, weight: ExactScalar, chain: &[Op]) -> Self {
        self.terms.push(OpTerm { weight, chain: chain.to_vec() });
        self
    }

    pub fn add(&self, other: &OpExpr) -> OpExpr {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OpExpr) -> OpExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut chain = a.chain.clone();
                chain.extend_from_slice(&b.chain);
                terms.push(OpTerm { weight: a.weight.clone() * b.weight.clone(), chain });
            }
        }
        OpExpr { terms }
    }

    pub fn apply_cached(&self, cache: &mut ChainCache<'_>) -> CliffPoly<ExactScalar> {
        let m = cache.input.dim();
        let mut acc = CliffPoly::zero(m);
        for t in &self.terms {
            let p = cache.get(&t.chain);
            if p.is_zero() {
                continue;
            }
            let w = t.weight.clone();
            acc = &acc + &p.map_coeffs(|c| ExactScalar::rational(c.clone()) * w.clone());
        }
        acc
    }

    pub fn apply(&self, f: &CliffPoly<Rational>, k: usize) -> CliffPoly<ExactScalar> {
        self.apply_cached(&mut ChainCache::new(f, k))
    }

    /// Application when every weight is rational.
    pub fn apply_rational(&self, cache: &mut ChainCache<'_>) -> Result<CliffPoly<Rational>> {
        let m = cache.input.dim();
        let mut acc = CliffPoly::zero(m);
        for t in &self.terms {
            if !t.weight.is_rational() {
                return Err(HscaError::RadicandMismatch(1, t.weight.radicand()));
            }
            let p = cache.get(&t.chain);
            acc = &acc + &p.scale(t.weight.rational_part());
        }
        Ok(acc)
    }
}

/// A 2x2 matrix of operator expressions acting on Almansi-Fischer pairs.
#[derive(Clone, PartialEq, Debug)]
pub struct OperatorMatrix2 {
    pub k: usize,
    pub entries: [[OpExpr; 2]; 2],
}

impl OperatorMatrix2 {
    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        OperatorMatrix2 { k: self.k, entries: [[e[0][0].clone(), e[1][0].clone()], [e[0][1].clone(), e[1][1].clone()]] }
    }

    pub fn product(&self, other: &Self) -> Self {
        let entry = |i: usize, j: usize| {
            self.entries[i][0].compose(&other.entries[0][j]).add(&self.entries[i][1].compose(&other.entries[1][j]))
        };
        OperatorMatrix2 { k: self.k, entries: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
    }

    /// The four entries applied to their column inputs: `out[i][j] = E_ij f_j`.
    pub fn apply_entries(&self, fp: &HPair<Rational>) -> [[CliffPoly<ExactScalar>; 2]; 2] {
        let mut c1 = ChainCache::new(&fp.f1, self.k);
        let mut c2 = ChainCache::new(&fp.f2, self.k);
        let e = &self.entries;
        [
            [e[0][0].apply_cached(&mut c1), e[0][1].apply_cached(&mut c2)],
            [e[1][0].apply_cached(&mut c1), e[1][1].apply_cached(&mut c2)],
        ]
    }

    pub fn apply(&self, fp: &HPair<Rational>) -> HPair<ExactScalar> {
        let [[a, b], [c, d]] = self.apply_entries(fp);
        HPair::new(self.k, &a + &b, &c + &d)
    }
}

fn rat(n: i64, d: i64) -> ExactScalar {
    ExactScalar::ratio(n, d)
}

fn chain(parts: &[&[Op]]) -> Vec<Op> {
    parts.concat()
}

impl SpinContext {
    fn check_summand<S: Coeff>(&self, f: &HField<S>, plus: bool) -> Result<()> {
        if f.k != self.k || f.dim() != self.m {
            return Err(HscaError::NotHarmonic { k: self.k });
        }
        if plus {
            if !project_minus_unchecked(&f.poly, self.k).is_zero() {
                return Err(HscaError::WrongSummand { expected: "M_k" });
            }
        } else if !project_plus_unchecked(&f.poly, self.k).is_zero() {
            return Err(HscaError::WrongSummand { expected: "u M_(k-1)" });
        }
        Ok(())
    }

    fn wrap<S: Coeff>(&self, p: CliffPoly<S>) -> Result<HField<S>> {
        HField::new(p, self.k)
    }

    /// `R_k = P^+ D_x` on `M_k`-valued fields.
    pub fn rarita_schwinger<S: Coeff>(&self, f: &HField<S>) -> Result<HField<S>> {
        self.check_summand(f, true)?;
        self.wrap(apply_chain(&R, &f.poly, self.k))
    }

    /// `T_k = P^+ D_x` on `u M_{k-1}`-valued fields.
    pub fn twistor<S: Coeff>(&self, f: &HField<S>) -> Result<HField<S>> {
        self.check_summand(f, false)?;
        self.wrap(apply_chain(&R, &f.poly, self.k))
    }

    /// `T_k^* = P^- D_x` on `M_k`-valued fields.
    pub fn dual_twistor<S: Coeff>(&self, f: &HField<S>) -> Result<HField<S>> {
        self.check_summand(f, true)?;
        self.wrap(apply_chain(&Q, &f.poly, self.k))
    }

    /// `Q_k = P^- D_x` on `u M_{k-1}`-valued fields.
    pub fn remaining<S: Coeff>(&self, f: &HField<S>) -> Result<HField<S>> {
        self.check_summand(f, false)?;
        self.wrap(apply_chain(&Q, &f.poly, self.k))
    }

    /// The bosonic Laplacian as the explicit second-order operator
    /// `Delta_x - 4 <u,grad_x><grad_u,grad_x> / (m+2k-2)
    ///  + 4 |u|^2 <grad_u,grad_x>^2 / ((m+2k-2)(m+2k-4))`.
    pub fn laplacian_direct_poly<S: Coeff>(&self, f: &CliffPoly<S>) -> CliffPoly<S> {
        let c = self.a() - 2;
        let mixed = f.grad_u_dot_grad_x();
        let t1 = f.laplacian(Family::X);
        let t2 = mixed.u_dot_grad_x();
        let t3 = mixed.grad_u_dot_grad_x().mul_u_norm_sq();
        let t2 = t2.scale(&S::ratio(-4, c));
        let t3 = t3.scale(&S::ratio(4, c * self.b()));
        &(&t1 + &t2) + &t3
    }

    pub fn bosonic_laplacian_direct<S: Coeff>(&self, f: &HField<S>) -> Result<HField<S>> {
        if f.k != self.k {
            return Err(HscaError::NotHarmonic { k: self.k });
        }
        self.wrap(self.laplacian_direct_poly(&f.poly))
    }

    /// Both displayed Rarita-Schwinger compositions of the bosonic Laplacian.
    pub fn rs_forms(&self) -> [OpExpr; 2] {
        use Op::*;
        let b = self.b();
        let a = self.a();
        let r2p = chain(&[&R, &R, &[PPlus]]);
        let q2m = chain(&[&Q, &Q, &[PMinus]]);
        let first = OpExpr::single(rat(-1, 1), &r2p)
            .plus(rat(2, b), &chain(&[&Q, &R, &[PPlus]]))
            .plus(rat(-2, b), &chain(&[&R, &Q, &[PMinus]]))
            .plus(rat(-a, b), &q2m);
        let second = OpExpr::single(rat(-1, 1), &r2p)
            .plus(rat(2, b), &chain(&[&R, &R, &[PMinus]]))
            .plus(rat(-2, b), &chain(&[&Q, &Q, &[PPlus]]))
            .plus(rat(-a, b), &q2m);
        [first, second]
    }

    /// Evaluates both compositions; each must equal the direct form.
    pub fn bosonic_laplacian_rs(&self, f: &HField<Rational>) -> Result<[HField<Rational>; 2]> {
        if f.k != self.k {
            return Err(HscaError::NotHarmonic { k: self.k });
        }
        let mut cache = ChainCache::new(&f.poly, self.k);
        let [a, b] = self.rs_forms();
        Ok([self.wrap(a.apply_rational(&mut cache)?)?, self.wrap(b.apply_rational(&mut cache)?)?])
    }

    /// The first-order matrix operator whose product with its transpose is
    /// the matrix form of the bosonic Laplacian.
    pub fn matrix_d1(&self) -> OperatorMatrix2 {
        use Op::*;
        let (a, b) = (self.a() as u64, self.b() as u64);
        // 2 / sqrt(ab) = 2 sqrt(ab) / (ab)
        let two_over_root = ExactScalar::sqrt_of(a * b, 1) * rat(2, (a * b) as i64);
        let root_ratio = ExactScalar::sqrt_of(a, b);
        OperatorMatrix2 {
            k: self.k,
            entries: [
                [
                    OpExpr::single(rat(-1, 1), &chain(&[&R, &[PPlus]])),
                    OpExpr::single(two_over_root, &chain(&[&Q, &[PPlus]])),
                ],
                [
                    OpExpr::single(rat(2, b as i64), &chain(&[&R, &[PMinus]])),
                    OpExpr::single(root_ratio, &chain(&[&Q, &[PMinus]])),
                ],
            ],
        }
    }

    pub fn matrix_d2(&self) -> OperatorMatrix2 {
        use Op::*;
        let (a, b) = (self.a(), self.b());
        OperatorMatrix2 {
            k: self.k,
            entries: [
                [
                    OpExpr::single(rat(1, 1), &chain(&[&R, &R, &[PPlus]])),
                    OpExpr::single(rat(-2, b), &chain(&[&R, &R, &[PMinus]])),
                ],
                [
                    OpExpr::single(rat(2, b), &chain(&[&Q, &Q, &[PPlus]])),
                    OpExpr::single(rat(a, b), &chain(&[&Q, &Q, &[PMinus]])),
                ],
            ],
        }
    }

    /// `sqrt((m+2k)/(m+2k-4))`, the weight on the second boundary component.
    pub fn boundary_weight(&self) -> ExactScalar {
        ExactScalar::sqrt_of(self.a() as u64, self.b() as u64)
    }

    /// Both sides of the Stokes identity for the matrix operator on the unit
    /// ball, as scalar parts. Each side is `value * omega_m^2`.
    pub fn stokes_pairing(&self, f: &HPair<Rational>, g: &HPair<Rational>) -> StokesSides {
        let m = self.m;
        let w = self.boundary_weight();
        let x = CliffPoly::<Rational>::vector(m, Family::X);
        let g1x = &x * &g.f1;
        let g2x = &x * &g.f2;
        let lhs1 = double_mean(&f.f1.scalar_pairing(&g1x), sphere_mean);
        let lhs2 = double_mean(&f.f2.scalar_pairing(&g2x), sphere_mean);
        let lhs = ExactScalar::rational(lhs1) - w * ExactScalar::rational(lhs2);

        let d1 = self.matrix_d1();
        let df = d1.apply(f);
        let dg = d1.apply(g);
        let lift = |p: &CliffPoly<Rational>| p.map_coeffs(|c| ExactScalar::rational(c.clone()));
        let (g1, g2, f1, f2) = (lift(&g.f1), lift(&g.f2), lift(&f.f1), lift(&f.f2));
        let mut rhs = ExactScalar::zero();
        for (l, r) in [(&df.f1, &g1), (&df.f2, &g2), (&f1, &dg.f1), (&f2, &dg.f2)] {
            rhs = rhs + double_mean(&l.scalar_pairing(r), ball_factor);
        }
        StokesSides { lhs: OmegaScaled::new(lhs, 2), rhs: OmegaScaled::new(rhs, 2) }
    }
}

/// Integrates a scalar polynomial over `x` (with the given weight rule) and
/// over the unit sphere in `u`, dropping the `omega_m^2` factor.
fn double_mean<S: Coeff>(p: &CliffPoly<S>, xrule: fn(usize, crate::poly::Exponents) -> Rational) -> S {
    let m = p.dim();
    let mut acc = S::zero();
    for t in p.terms() {
        debug_assert_eq!(t.blade, crate::clifford::Blade::SCALAR);
        let wu = sphere_mean(m, t.mono.u);
        if wu.is_zero() {
            continue;
        }
        let wx = xrule(m, t.mono.x);
        if wx.is_zero() {
            continue;
        }
        acc = acc + t.coeff.clone() * S::from_rational(&(wu * wx));
    }
    acc
}

#[derive(Clone, PartialEq, Debug)]
pub struct StokesSides {
    pub lhs: OmegaScaled<ExactScalar>,
    pub rhs: OmegaScaled<ExactScalar>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Multivector;
    use crate::harmonic::{almansi_split, harmonic_basis, monogenic_basis};
    use crate::poly::Var;

    type P = CliffPoly<Rational>;

    fn x(m: usize, j: usize) -> P {
        P::var(m, Var::x(j - 1))
    }
    fn u(m: usize, j: usize) -> P {
        P::var(m, Var::u(j - 1))
    }

    #[test]
    fn supported_region() {
        assert!(SpinContext::new(3, 1).is_ok());
        assert!(SpinContext::new(5, 0).is_ok());
        assert!(SpinContext::new(4, 0).is_err());
        assert!(SpinContext::new(3, 0).is_err());
        assert!(SpinContext::new(2, 3).is_err());
        assert_eq!(SpinContext::new(3, 1).unwrap().radicand(), 5);
    }

    #[test]
    fn direct_form_examples() {
        for m in 3..=6 {
            let ctx = SpinContext::new(m, 1).unwrap();
            let ux = (1..=m).fold(P::zero(m), |acc, j| &acc + &(&u(m, j) * &x(m, j)));
            assert!(ctx.laplacian_direct_poly(&ux).is_zero());
            let f = &u(m, 1) * &(&x(m, 1) * &x(m, 1));
            let expect = u(m, 1).scale(&Rational::new(2 * (m as i64 - 4), m as i64));
            assert_eq!(ctx.laplacian_direct_poly(&f), expect);
        }
        let ctx = SpinContext::new(5, 0).unwrap();
        let f = &x(5, 1) * &x(5, 1);
        assert_eq!(ctx.laplacian_direct_poly(&f), P::scalar(5, Rational::from_integer(2)));
    }

    #[test]
    fn rs_forms_match_direct() {
        let ctx = SpinContext::new(3, 1).unwrap();
        let f = HField::new(&(&x(3, 1) * &x(3, 1)) * &u(3, 2), 1).unwrap();
        let direct = ctx.bosonic_laplacian_direct(&f).unwrap();
        let [a, b] = ctx.bosonic_laplacian_rs(&f).unwrap();
        assert_eq!(a, direct);
        assert_eq!(b, direct);
    }

    #[test]
    fn rarita_schwinger_examples() {
        let ctx = SpinContext::new(3, 1).unwrap();
        let m = 3;
        let p = &monogenic_basis(m, 1).unwrap().elems[0];
        let constant = HField::new(p.clone(), 1).unwrap();
        assert!(ctx.rarita_schwinger(&constant).unwrap().poly().is_zero());
        assert!(ctx.dual_twistor(&constant).unwrap().poly().is_zero());

        let plus = almansi_split(&u(m, 1), 1).unwrap().f1;
        let f = HField::new(&x(m, 1) * &plus, 1).unwrap();
        let e1 = P::constant(&Multivector::generator(m, 1));
        let expect = project_plus_unchecked(&(&e1 * &plus), 1);
        assert_eq!(*ctx.rarita_schwinger(&f).unwrap().poly(), expect);
        assert!(ctx.twistor(&f).is_err());

        let g = HField::new(&x(m, 2) * &plus, 1).unwrap();
        let e2 = P::constant(&Multivector::generator(m, 2));
        let expect = project_minus_unchecked(&(&e2 * &plus), 1);
        assert_eq!(*ctx.dual_twistor(&g).unwrap().poly(), expect);

        let zero = HField::new(P::zero(m), 1).unwrap();
        assert!(ctx.twistor(&zero).unwrap().poly().is_zero());
        assert!(ctx.remaining(&zero).unwrap().poly().is_zero());
    }

    #[test]
    fn matrix_identities_on_a_field() {
        let ctx = SpinContext::new(3, 2).unwrap();
        let m = 3;
        let h = &harmonic_basis(m, 2).unwrap().elems[1];
        let f = &(&x(m, 1) * &x(m, 2)) * &(&x(m, 3) * h);
        let fp = almansi_split(&f, 2).unwrap();
        let d1 = ctx.matrix_d1();
        let prod = d1.product(&d1.transpose()).apply_entries(&fp);
        let d2 = ctx.matrix_d2().apply_entries(&fp);
        assert_eq!(prod, d2);
        let rec = ctx.matrix_d2().apply(&fp).recombine();
        let direct = ctx.laplacian_direct_poly(&f).map_coeffs(|c| ExactScalar::rational(c.clone()));
        assert_eq!(rec, -&direct);
    }

    #[test]
    fn stokes_on_small_pairs() {
        let ctx = SpinContext::new(3, 1).unwrap();
        let m = 3;
        let zero = HPair::zero(m, 1);
        let s = ctx.stokes_pairing(&zero, &zero);
        assert!(s.lhs.value.is_zero() && s.rhs.value.is_zero());
        let f = almansi_split(&(&x(m, 1) * &u(m, 2)), 1).unwrap();
        let g = almansi_split(&(&(&x(m, 2) * &x(m, 2)) * &u(m, 1)), 1).unwrap();
        let s = ctx.stokes_pairing(&f, &g);
        assert_eq!(s.lhs, s.rhs);
        let c = almansi_split(&u(m, 3), 1).unwrap();
        let s = ctx.stokes_pairing(&c, &c);
        assert!(s.lhs.value.is_zero() && s.rhs.value.is_zero());
    }
}
