//! Randomized algebraic invariants.

use hsca_core::clifford::{reflect, Blade, Multivector};
use hsca_core::harmonic::{almansi_split, check_harmonic, project_minus_unchecked, project_plus_unchecked};
use hsca_core::integrate::{sphere_integral, sphere_mean};
use hsca_core::operators::SpinContext;
use hsca_core::poly::{CliffPoly, Family, Var};
use hsca_core::rational::Rational;
use hsca_core::verify::sampling::{
    random_h_field, random_multivector, random_real_h_field, random_unit_vector, random_vector, random_x_poly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type P = CliffPoly<Rational>;

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![i64::MIN / 2..-1i64, 1i64..i64::MAX / 2]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rational_arithmetic_matches_bigrational(a in any::<i64>(), b in nonzero(), c in any::<i64>(), d in nonzero()) {
        let (x, y) = (Rational::new(a, b), Rational::new(c, d));
        let (bx, by) = (big(a, b), big(c, d));
        prop_assert_eq!((x.clone() + y.clone()).to_big(), &bx + &by);
        prop_assert_eq!((x.clone() - y.clone()).to_big(), &bx - &by);
        prop_assert_eq!((x.clone() * y.clone()).to_big(), &bx * &by);
        if !y.is_zero() {
            prop_assert_eq!((x.clone() / y.clone()).to_big(), &bx / &by);
        }
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
    }

    #[test]
    fn geometric_product_is_associative(m in 2usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random_multivector(m, &mut r), random_multivector(m, &mut r), random_multivector(m, &mut r));
        let left = a.geometric_product(&b).unwrap().geometric_product(&c).unwrap();
        let right = a.geometric_product(&b.geometric_product(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn conjugation_is_an_involutive_anti_automorphism(m in 2usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_multivector(m, &mut r), random_multivector(m, &mut r));
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        let lhs = a.geometric_product(&b).unwrap().conjugate();
        let rhs = b.conjugate().geometric_product(&a.conjugate()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vectors_square_to_minus_norm(m in 2usize..=8, seed in any::<u64>()) {
        let x = random_vector(m, &mut rng(seed));
        let mv = x.to_multivector();
        let sq = mv.geometric_product(&mv).unwrap();
        prop_assert_eq!(sq, Multivector::scalar(m, -x.norm_sq()));
    }

    #[test]
    fn reflection_fixes_the_orthogonal_complement(m in 2usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_unit_vector(m, &mut r);
        let x = random_vector(m, &mut r);
        let y = reflect(&a, &x).unwrap();
        // a x a = x - 2 <a,x> a for unit a
        let dot = a.to_multivector().geometric_product(&x.to_multivector()).unwrap().scalar_part();
        let ax = -dot;
        let expect = x.to_multivector().sub(&a.to_multivector().scale(&(ax * Rational::from_integer(2)))).unwrap();
        prop_assert_eq!(y.to_multivector(), expect);
    }

    #[test]
    fn partial_derivatives_obey_leibniz(m in 2usize..=4, seed in any::<u64>(), j in 0usize..4) {
        let j = j % m;
        let mut r = rng(seed);
        let (f, g) = (random_x_poly(m, 3, &mut r), random_x_poly(m, 3, &mut r));
        let v = Var::x(j);
        let lhs = (&f * &g).partial(v);
        let rhs = &(&f.partial(v) * &g) + &(&f * &g.partial(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dirac_squares_to_minus_laplacian(m in 2usize..=4, seed in any::<u64>()) {
        let f = random_x_poly(m, 4, &mut rng(seed));
        let dd = f.dirac(Family::X).dirac(Family::X);
        prop_assert_eq!(&dd + &f.laplacian(Family::X), P::zero(m));
    }

    #[test]
    fn almansi_split_is_a_direct_sum(m in 3usize..=5, k in 1usize..=3, seed in any::<u64>()) {
        let f = random_h_field(m, k, 2, &mut rng(seed)).unwrap().into_poly();
        let plus = project_plus_unchecked(&f, k);
        let minus = project_minus_unchecked(&f, k);
        prop_assert_eq!(&plus + &minus, f.clone());
        prop_assert!(plus.dirac(Family::U).is_zero());
        prop_assert!(project_plus_unchecked(&minus, k).is_zero());
        prop_assert!(check_harmonic(&plus, k).is_ok() && check_harmonic(&minus, k).is_ok());
    }

    #[test]
    fn composition_forms_agree_on_random_fields(seed in any::<u64>(), pick in 0usize..4) {
        let (m, k) = [(3, 1), (3, 2), (4, 1), (5, 1)][pick];
        let ctx = SpinContext::new(m, k).unwrap();
        let f = hsca_core::operators::HField::new(random_h_field(m, k, 3, &mut rng(seed)).unwrap().into_poly(), k).unwrap();
        let direct = ctx.bosonic_laplacian_direct(&f).unwrap();
        for form in ctx.bosonic_laplacian_rs(&f).unwrap() {
            prop_assert_eq!(form.poly(), direct.poly());
        }
    }

    #[test]
    fn stokes_sides_agree_for_real_fields(seed in any::<u64>(), pick in 0usize..3) {
        let (m, k) = [(3, 1), (4, 1), (3, 2)][pick];
        let ctx = SpinContext::new(m, k).unwrap();
        let mut r = rng(seed);
        let f = random_real_h_field(m, k, 2, &mut r).unwrap().into_poly();
        let g = random_real_h_field(m, k, 2, &mut r).unwrap().into_poly();
        let sides = ctx.stokes_pairing(&almansi_split(&f, k).unwrap(), &almansi_split(&g, k).unwrap());
        prop_assert_eq!(sides.lhs, sides.rhs);
    }

    #[test]
    fn sphere_integral_of_norm_factor(m in 2usize..=5, seed in any::<u64>()) {
        // int |u|^2 p = int p for p restricted to the sphere
        let p = random_x_poly(m, 3, &mut rng(seed)).swap_families();
        let lifted = p.mul_u_norm_sq();
        prop_assert_eq!(sphere_integral(&lifted, Family::U), sphere_integral(&p, Family::U));
    }
}

#[test]
fn sphere_means_sum_to_one() {
    for m in 2..=6 {
        let total = (0..m).fold(Rational::zero(), |acc, j| {
            let e = hsca_core::poly::Exponents::default().with(j, 2);
            acc + sphere_mean(m, e)
        });
        assert_eq!(total, Rational::one());
    }
}

#[test]
fn blade_products_match_sign_counting() {
    // oracle: count transpositions needed to sort the concatenated index list
    for m in 1..=5usize {
        for a in 0..1u8 << m {
            for b in 0..1u8 << m {
                let ia = Blade(a).indices();
                let ib = Blade(b).indices();
                let mut seq: Vec<usize> = ia.iter().chain(&ib).copied().collect();
                let mut swaps = 0;
                for i in 0..seq.len() {
                    for j in 0..seq.len() - 1 - i {
                        if seq[j] > seq[j + 1] {
                            seq.swap(j, j + 1);
                            swaps += 1;
                        }
                    }
                }
                let squares = ia.iter().filter(|i| ib.contains(i)).count();
                let negative = (swaps + squares) % 2 == 1;
                assert_eq!(Blade(a).product(Blade(b)), (negative, Blade(a ^ b)), "{a:b} {b:b}");
            }
        }
    }
}
