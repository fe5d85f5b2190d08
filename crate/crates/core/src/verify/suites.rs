use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{FailureRecord, Status, SuiteEntry};
use super::sampling::{
    random_direction, random_h_field, random_m_field, random_multivector, random_point, random_real_h_field,
    random_unit_vector, random_vector, random_x_poly, x_monomials,
};
use super::{Job, Suite, SuiteConfig};
use crate::clifford::{reflect, Multivector};
use crate::error::Result;
use crate::fundamental::{FundamentalKind, FundamentalSolution};
use crate::harmonic::{
    almansi_split, check_harmonic, harmonic_basis, monogenic_basis, project_minus_unchecked, project_plus_unchecked,
};
use crate::kernels::{zonal_harmonic_kernel, zonal_monogenic_kernel};
use crate::operators::{apply_chain, ChainCache, Op, SpinContext};
use crate::poly::{CliffPoly, Family, PointM, Var};
use crate::poly_json::to_doc;
use crate::probe::{borel_pompeiu_probe, default_order, MAX_CENTER_NORM};
use crate::rational::Rational;
use crate::scalar::{Coeff, ExactScalar};

/// Failing inputs kept per entry.
const MAX_FAILING: usize = 3;
/// Random evaluation points per fundamental solution.
const FUNDAMENTAL_POINTS: usize = 20;
/// Tolerance for `u`-harmonicity of the reflected harmonic kernel.
const TRANSPORT_TOL: f64 = 1e-10;
/// Reconstruction tolerance of the classical probe.
const PROBE_TOL: f64 = 1e-4;
/// Largest `|y|` sampled by the probe suite.
const PROBE_CENTER: f64 = 0.5;

type P = CliffPoly<Rational>;

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    max_residual: f64,
    failing: Vec<FailureRecord>,
    notes: Vec<String>,
}

impl Tally {
    fn record(&mut self, check: &str, residual: f64, ok: bool, input: Option<&P>) {
        self.cases += 1;
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.max_residual = self.max_residual.max(residual);
        if !ok || residual.is_infinite() {
            self.failures += 1;
            if self.failing.len() < MAX_FAILING {
                self.failing.push(FailureRecord { check: check.into(), input: input.map(to_doc) });
            }
        }
    }

    fn zero<S: Coeff>(&mut self, check: &str, diff: &CliffPoly<S>, input: Option<&P>) {
        self.record(check, diff.max_abs_coeff(), diff.is_zero(), input);
    }

    fn zero_mv(&mut self, check: &str, diff: &Multivector<Rational>) {
        self.record(check, diff.max_abs(), diff.is_zero(), None);
    }

    fn within(&mut self, check: &str, residual: f64, tol: f64, input: Option<&P>) {
        self.record(check, residual, residual <= tol, input);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn entry(job: &Job, part: Option<&str>, t: Tally, start: Instant) -> SuiteEntry {
    SuiteEntry {
        suite: job.suite.name().into(),
        part: part.map(String::from),
        m: job.m,
        k: job.k,
        cases: t.cases,
        failures: t.failures,
        max_residual: t.max_residual,
        elapsed_ms: start.elapsed().as_millis() as u64,
        status: if t.failures > 0 { Status::Fail } else { Status::Pass },
        notes: t.notes,
        failing: t.failing,
    }
}

fn skip(job: &Job, part: Option<&str>, reason: impl Into<String>) -> SuiteEntry {
    SuiteEntry {
        suite: job.suite.name().into(),
        part: part.map(String::from),
        m: job.m,
        k: job.k,
        cases: 0,
        failures: 0,
        max_residual: 0.0,
        elapsed_ms: 0,
        status: Status::Skip,
        notes: vec![reason.into()],
        failing: Vec::new(),
    }
}

fn errored(job: &Job, err: crate::error::HscaError, start: Instant) -> SuiteEntry {
    let mut t = Tally::default();
    t.record("suite error", f64::INFINITY, false, None);
    t.note(format!("error: {err}"));
    entry(job, None, t, start)
}

pub(crate) fn run_job(job: &Job, cfg: &SuiteConfig) -> Vec<SuiteEntry> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(job.seed(cfg.seed));
    let k = job.k.unwrap_or(0);
    let out = match job.suite {
        Suite::Clifford => clifford(job, cfg, &mut rng),
        Suite::Almansi => almansi(job, k, cfg, &mut rng),
        Suite::Theorem1 => theorem1(job, k, cfg),
        Suite::Factorization => factorization(job, k, cfg),
        Suite::Maxwell => maxwell(job, cfg, &mut rng),
        Suite::Stokes => stokes(job, k, cfg, &mut rng),
        Suite::Kernels => kernels(job, k),
        Suite::Fundamental => fundamental(job, k, cfg, &mut rng),
        Suite::BorelProbe => borel(job, k, cfg, &mut rng),
    };
    out.unwrap_or_else(|e| vec![errored(job, e, start)])
}

fn clifford(job: &Job, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let m = job.m;
    let mut t = Tally::default();
    for i in 1..=m {
        for j in 1..=m {
            let (ei, ej) = (Multivector::<Rational>::generator(m, i), Multivector::generator(m, j));
            let sum = ei.geometric_product(&ej)?.add(&ej.geometric_product(&ei)?)?;
            let expect = if i == j { Multivector::scalar(m, Rational::from_integer(-2)) } else { Multivector::zero(m) };
            t.zero_mv("e_i e_j + e_j e_i = -2 delta_ij", &sum.sub(&expect)?);
        }
    }
    for _ in 0..cfg.samples {
        let a = random_unit_vector(m, rng);
        let x = random_vector(m, rng);
        let r = reflect(&a, &x)?;
        let back = reflect(&a, &r)?;
        t.zero_mv("reflection is an involution", &back.to_multivector().sub(&x.to_multivector())?);
        let dn = r.norm_sq() - x.norm_sq();
        t.record("reflection is an isometry", dn.to_f64().abs(), dn.is_zero(), None);

        let (p, q, s) = (random_multivector(m, rng), random_multivector(m, rng), random_multivector(m, rng));
        let left = p.geometric_product(&q)?.geometric_product(&s)?;
        let right = p.geometric_product(&q.geometric_product(&s)?)?;
        t.zero_mv("associativity", &left.sub(&right)?);
        let conj = p.geometric_product(&q)?.conjugate();
        let swapped = q.conjugate().geometric_product(&p.conjugate())?;
        t.zero_mv("conjugation reverses products", &conj.sub(&swapped)?);
    }
    Ok(vec![entry(job, None, t, start)])
}

fn almansi(job: &Job, k: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let m = job.m;
    if k == 0 {
        return Ok(vec![skip(job, None, "the split is trivial at k = 0")]);
    }
    let mut t = Tally::default();
    let eigen = Rational::from_integer((m + 2 * k - 2) as i64);
    for _ in 0..cfg.samples {
        let f = random_h_field(m, k, cfg.xdeg, rng)?.into_poly();
        let plus = project_plus_unchecked(&f, k);
        let minus = project_minus_unchecked(&f, k);
        t.zero("P+ + P- = I", &(&(&plus + &minus) - &f), Some(&f));
        t.zero("P+ P+ = P+", &(&project_plus_unchecked(&plus, k) - &plus), Some(&f));
        t.zero("P- P- = P-", &(&project_minus_unchecked(&minus, k) - &minus), Some(&f));
        t.zero("D_u P+ = 0", &plus.dirac(Family::U), Some(&f));
        let ok = check_harmonic(&plus, k).is_ok() && check_harmonic(&minus, k).is_ok();
        t.record("components stay in H_k", if ok { 0.0 } else { 1.0 }, ok, Some(&f));

        let p = random_m_field(m, k - 1, cfg.xdeg, rng)?;
        let up = p.vector_left_mul(Family::U);
        t.zero("D_u(u p) = -(m+2k-2) p", &(&up.dirac(Family::U) + &p.scale(&eigen)), Some(&p));
    }
    Ok(vec![entry(job, None, t, start)])
}

/// `x^beta h(u)` over all `|beta| <= xdeg` and the scalar `H_k` basis. Right
/// Clifford multiples follow by linearity, since every operator acts from
/// the left.
fn spanning_set(m: usize, k: usize, xdeg: usize) -> Result<Vec<P>> {
    let basis = harmonic_basis(m, k)?;
    Ok(x_monomials(m, xdeg).into_iter().flat_map(|e| basis.elems.iter().map(move |h| h.shift(Family::X, e))).collect())
}

#[allow(clippy::result_large_err)]
fn context(job: &Job, k: usize) -> std::result::Result<SpinContext, SuiteEntry> {
    SpinContext::new(job.m, k).map_err(|e| skip(job, None, e.to_string()))
}

fn theorem1(job: &Job, k: usize, cfg: &SuiteConfig) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let ctx = match context(job, k) {
        Ok(c) => c,
        Err(s) => return Ok(vec![s]),
    };
    let mut t = Tally::default();
    let [first, second] = ctx.rs_forms();
    for f in spanning_set(job.m, k, cfg.xdeg)? {
        let direct = ctx.laplacian_direct_poly(&f);
        let mut cache = ChainCache::new(&f, k);
        let a = first.apply_rational(&mut cache)?;
        let b = second.apply_rational(&mut cache)?;
        t.zero("first composition form = direct form", &(&a - &direct), Some(&f));
        t.zero("second composition form = direct form", &(&b - &direct), Some(&f));
        let ok = check_harmonic(&direct, k).is_ok();
        t.record("output u-harmonic of degree k", if ok { 0.0 } else { 1.0 }, ok, Some(&f));
        if k == 0 {
            t.zero("k = 0: composition form = Laplacian in x", &(&a - &f.laplacian(Family::X)), Some(&f));
        }
    }
    t.note(format!("spanning set: x-monomials of degree <= {} times the H_k basis", cfg.xdeg));
    if k == 0 {
        t.note("P+ = I and P- = 0 hold at k = 0; at k = 1 the split H_1 = M_1 + u M_0 is nontrivial");
    }
    Ok(vec![entry(job, None, t, start)])
}

fn factorization(job: &Job, k: usize, cfg: &SuiteConfig) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let ctx = match context(job, k) {
        Ok(c) => c,
        Err(s) => return Ok(vec![s]),
    };
    let mut t = Tally::default();
    let d1 = ctx.matrix_d1();
    let prod = d1.product(&d1.transpose());
    let d2 = ctx.matrix_d2();
    for f in spanning_set(job.m, k, cfg.xdeg)? {
        let fp = almansi_split(&f, k)?;
        let lhs = prod.apply_entries(&fp);
        let rhs = d2.apply_entries(&fp);
        for i in 0..2 {
            for j in 0..2 {
                t.zero("D1 D1^T = D2 entrywise", &(&lhs[i][j] - &rhs[i][j]), Some(&f));
            }
        }
        let direct = ctx.laplacian_direct_poly(&f).map_coeffs(|c| ExactScalar::rational(c.clone()));
        let rec = d2.apply(&fp).recombine();
        t.zero("recombined D2 = -D_k", &(&rec + &direct), Some(&f));
        for (name, chain) in
            [("P+ P- D_x = 0", [Op::PPlus, Op::PMinus, Op::Dx]), ("P- P+ D_x = 0", [Op::PMinus, Op::PPlus, Op::Dx])]
        {
            t.zero(name, &apply_chain(&chain, &f, k), Some(&f));
        }
    }
    t.note("recombined D2 f equals -D_k f: every entry of D2 has the opposite sign of the matching composition term");
    t.note(format!("weights in Q(sqrt {})", ctx.radicand()));
    Ok(vec![entry(job, None, t, start)])
}

fn maxwell(job: &Job, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let m = job.m;
    let ctx = match context(job, 1) {
        Ok(c) => c,
        Err(s) => return Ok(vec![s]),
    };
    let job = &Job { k: Some(1), ..*job };
    let mut t = Tally::default();
    let u = |s: usize| P::var(m, Var::u(s));
    let x = |s: usize| P::var(m, Var::x(s));
    let four_over_m = Rational::new(4, m as i64);
    for _ in 0..cfg.samples {
        let fs: Vec<P> = (0..m).map(|_| random_x_poly(m, cfg.xdeg, rng)).collect();
        let f = fs.iter().enumerate().fold(P::zero(m), |acc, (s, fs)| &acc + &(&u(s) * fs));
        let lhs = ctx.laplacian_direct_poly(&f);
        let mut rhs = P::zero(m);
        for s in 0..m {
            let div =
                fs.iter().enumerate().fold(P::zero(m), |acc, (j, fj)| &acc + &fj.partial(Var::x(j)).partial(Var::x(s)));
            let eq = &fs[s].laplacian(Family::X) - &div.scale(&four_over_m);
            t.zero("u_s coefficient matches equation s", &(&lhs.partial(Var::u(s)) - &eq), Some(&f));
            rhs = &rhs + &(&u(s) * &eq);
        }
        t.zero("operator on sum u_s f_s = sum u_s (equation s)", &(&lhs - &rhs), Some(&f));
    }
    let ux = (0..m).fold(P::zero(m), |acc, j| &acc + &(&u(j) * &x(j)));
    t.zero("<u,x> is a null solution", &ctx.laplacian_direct_poly(&ux), Some(&ux));
    let w = &u(0) * &(&x(0) * &x(0));
    let expect = u(0).scale(&Rational::new(2 * (m as i64 - 4), m as i64));
    t.zero("u_1 x_1^2 maps to 2 u_1 (m-4)/m", &(&ctx.laplacian_direct_poly(&w) - &expect), Some(&w));
    Ok(vec![entry(job, None, t, start)])
}

fn stokes(job: &Job, k: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let ctx = match context(job, k) {
        Ok(c) => c,
        Err(s) => return Ok(vec![s]),
    };
    let m = job.m;
    let mut t = Tally::default();
    for _ in 0..cfg.samples {
        let f = random_real_h_field(m, k, cfg.xdeg, rng)?.into_poly();
        let g = random_real_h_field(m, k, cfg.xdeg, rng)?.into_poly();
        let sides = ctx.stokes_pairing(&almansi_split(&f, k)?, &almansi_split(&g, k)?);
        let diff = sides.lhs.value.clone() - sides.rhs.value.clone();
        t.record("boundary term = volume terms", diff.to_f64().abs(), diff.is_zero(), Some(&f));
    }
    t.note("unit ball; real-valued H_k fields; both sides compared as scalar parts, in units of omega_m^2");
    t.note("fields with Clifford right coefficients of opposite grade parity violate the identity");
    Ok(vec![entry(job, None, t, start)])
}

fn kernels(job: &Job, k: usize) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let m = job.m;
    let mut t = Tally::default();
    let zh = zonal_harmonic_kernel(m, k)?;
    for h in &harmonic_basis(m, k)?.elems {
        t.zero("harmonic kernel reproduces the H_k basis", &(&zh.reproduce(h)? - h), Some(h));
    }
    let sym = zh.is_symmetric();
    t.record("harmonic kernel symmetric in (u, v)", if sym { 0.0 } else { 1.0 }, sym, None);
    if k == 1 {
        let uv = (0..m).fold(P::zero(m), |acc, j| &acc + &(&P::var(m, Var::u(j)) * &P::var(m, Var::x(j))));
        t.zero("Z_1 = m <u,v> / omega_m", &(&zh.poly - &uv.scale(&Rational::from_integer(m as i64))), None);
    }
    if m >= 3 {
        let zm = zonal_monogenic_kernel(m, k)?;
        for p in &monogenic_basis(m, k)?.elems {
            t.zero("monogenic kernel reproduces the M_k basis", &(&zm.reproduce(p)? - p), Some(p));
        }
    }
    t.note("reproducing pairing is the full Clifford-valued integral of bar(K(u,v)) f(u)");
    Ok(vec![entry(job, None, t, start)])
}

fn fundamental(job: &Job, k: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SuiteEntry>> {
    let m = job.m;
    let mut out = Vec::new();
    for kind in [FundamentalKind::H, FundamentalKind::E, FundamentalKind::F] {
        let start = Instant::now();
        let part = Some(kind.name());
        let fs = match FundamentalSolution::new(kind, m, k) {
            Ok(fs) => fs,
            Err(e) => {
                out.push(skip(job, part, e.to_string()));
                continue;
            }
        };
        let mut t = Tally::default();
        for _ in 0..FUNDAMENTAL_POINTS {
            let x = random_point(m, 0.5, 2.0, rng);
            let v = random_direction(m, rng);
            let pt = PointM::new(x)?.with_v(v)?;
            t.within("annihilation residual", fs.residual(&pt)?, cfg.tol, None);
            if kind == FundamentalKind::H {
                let val = fs.eval(&pt)?;
                let rel = val.laplacian(Family::U).max_abs_coeff() / val.max_abs_coeff().max(f64::MIN_POSITIVE);
                t.within("reflected harmonic kernel stays u-harmonic", rel, TRANSPORT_TOL, None);
            }
        }
        t.note("second x-derivatives by forward-mode jets; residual relative to the largest value coefficient");
        out.push(entry(job, part, t, start));
    }
    Ok(out)
}

fn borel(job: &Job, k: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SuiteEntry>> {
    let start = Instant::now();
    let m = job.m;
    if m < 3 {
        return Ok(vec![skip(job, None, "requires m >= 3")]);
    }
    let order = default_order(m);
    let f = random_h_field(m, k, cfg.xdeg.min(3), rng)?.into_poly();
    let fp = almansi_split(&f, k)?;
    let y = random_point(m, 0.0, PROBE_CENTER.min(MAX_CENTER_NORM), rng);
    let v = random_direction(m, rng);
    let out = borel_pompeiu_probe(&fp, &y, &v, order)?;
    let mut t = Tally::default();
    t.note(format!("quadrature order {order}; converged: {}; order gap {:.3e}", out.converged, out.coarse_gap));
    if k == 0 {
        t.within("classical reconstruction of f(y)", out.scaled_error, PROBE_TOL, Some(&f));
        t.note("Cauchy-kernel formula; error scaled by max(|f(y)|, 1)");
        Ok(vec![entry(job, Some("classical"), t, start)])
    } else {
        let mut e = skip(job, Some("candidate"), "kernel column (E_k, F_k); residual reported without assertion");
        e.cases = 1;
        e.max_residual = out.scaled_error;
        e.notes.extend(t.notes);
        e.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(vec![e])
    }
}
