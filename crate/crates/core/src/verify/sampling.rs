//! Seeded random inputs for the verification suites.
//!
//! All randomness flows from `ChaCha8Rng::seed_from_u64`, so a seed fixes
//! every sample on every platform.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::clifford::{Blade, Multivector, VectorM};
use crate::error::Result;
use crate::harmonic::{harmonic_basis, monogenic_basis};
use crate::operators::HField;
use crate::poly::{CliffPoly, Exponents, Family, TermBuilder};
use crate::rational::Rational;

/// Most terms drawn for one random field.
const MAX_TERMS: usize = 6;

/// A nonzero rational `n / d` with `|n| <= 9`, `1 <= d <= 6`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = loop {
        let n: i64 = rng.gen_range(-9..=9);
        if n != 0 {
            break n;
        }
    };
    Rational::new(n, rng.gen_range(1..=6))
}

pub fn random_blade(m: usize, rng: &mut ChaCha8Rng) -> Blade {
    Blade(rng.gen_range(0..1u16 << m) as u8)
}

pub fn random_multivector(m: usize, rng: &mut ChaCha8Rng) -> Multivector<Rational> {
    let n = rng.gen_range(1..=4);
    Multivector::from_terms(m, (0..n).map(|_| (random_blade(m, rng), random_rational(rng))))
}

pub fn random_vector(m: usize, rng: &mut ChaCha8Rng) -> VectorM<Rational> {
    VectorM::new((0..m).map(|_| random_rational(rng)).collect())
}

/// An exactly unit rational vector: inverse stereographic projection of a
/// random rational point of `Q^{m-1}`.
pub fn random_unit_vector(m: usize, rng: &mut ChaCha8Rng) -> VectorM<Rational> {
    let p: Vec<Rational> = (0..m - 1).map(|_| random_rational(rng)).collect();
    let s = p.iter().fold(Rational::zero(), |acc, c| acc + c.clone() * c.clone());
    let denom = s.clone() + Rational::one();
    let mut coords: Vec<Rational> = p.iter().map(|c| Rational::from_integer(2) * c.clone() / denom.clone()).collect();
    coords.push((s - Rational::one()) / denom);
    VectorM::new(coords)
}

/// All `x`-exponents of total degree at most `xdeg`.
pub fn x_monomials(m: usize, xdeg: usize) -> Vec<Exponents> {
    (0..=xdeg).flat_map(|d| Exponents::of_degree(m, d)).collect()
}

fn random_combination(
    m: usize,
    xdeg: usize,
    basis: &[CliffPoly<Rational>],
    real: bool,
    rng: &mut ChaCha8Rng,
) -> CliffPoly<Rational> {
    let monos = x_monomials(m, xdeg);
    let mut b = TermBuilder::new(m);
    if basis.is_empty() {
        return b.finish();
    }
    let n = rng.gen_range(1..=MAX_TERMS);
    for _ in 0..n {
        let e = monos[rng.gen_range(0..monos.len())];
        let h = &basis[rng.gen_range(0..basis.len())];
        let blade = if real { Blade::SCALAR } else { random_blade(m, rng) };
        let c = Multivector::blade(m, blade, random_rational(rng));
        b.extend_poly(&h.shift(Family::X, e).right_mul(&c));
    }
    b.finish()
}

/// A random field `sum c_i x^{beta_i} h_i(u) e_{A_i}` over the scalar basis
/// `h_i` of `H_k`, with `|beta_i| <= xdeg`. Right multiplication by a
/// constant keeps every term `u`-harmonic.
pub fn random_h_field(m: usize, k: usize, xdeg: usize, rng: &mut ChaCha8Rng) -> Result<HField<Rational>> {
    let basis = harmonic_basis(m, k)?;
    HField::new(random_combination(m, xdeg, &basis.elems, false, rng), k)
}

/// Like [`random_h_field`] with real coefficients only.
pub fn random_real_h_field(m: usize, k: usize, xdeg: usize, rng: &mut ChaCha8Rng) -> Result<HField<Rational>> {
    let basis = harmonic_basis(m, k)?;
    HField::new(random_combination(m, xdeg, &basis.elems, true, rng), k)
}

/// A random `M_k`-valued field built from the monogenic module basis.
pub fn random_m_field(m: usize, k: usize, xdeg: usize, rng: &mut ChaCha8Rng) -> Result<CliffPoly<Rational>> {
    let basis = monogenic_basis(m, k)?;
    Ok(random_combination(m, xdeg, &basis.elems, false, rng))
}

/// A random Clifford-valued polynomial in `x` alone.
pub fn random_x_poly(m: usize, xdeg: usize, rng: &mut ChaCha8Rng) -> CliffPoly<Rational> {
    random_combination(m, xdeg, &[CliffPoly::one(m)], false, rng)
}

/// A point with `lo <= |x| <= hi`, direction uniform on the sphere.
pub fn random_point(m: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dir = random_direction(m, rng);
    let r = rng.gen_range(lo..=hi);
    dir.into_iter().map(|c| c * r).collect()
}

/// A uniformly distributed unit vector.
pub fn random_direction(m: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn fields_are_reproducible_and_harmonic() {
        let a = random_h_field(3, 2, 4, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = random_h_field(3, 2, 4, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.poly().laplacian(Family::U).is_zero());
        let c = random_h_field(4, 1, 0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(c.xdeg(), 0);
    }

    #[test]
    fn unit_vectors_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 2..=6 {
            assert_eq!(random_unit_vector(m, &mut rng).norm_sq(), Rational::one());
        }
    }
}
