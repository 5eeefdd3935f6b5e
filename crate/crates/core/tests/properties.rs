use std::sync::OnceLock;

use num_complex::Complex;
use powmod::arith::{build_sieve, gcd, is_prime};
use powmod::bounds::{beta, beta_closed, mv_bound_b};
use powmod::lfunc::{evaluate_l, ComplexPoint};
use powmod::sums::{dirichlet_poly, exp_sum, mobius_sum, progression_sum, psi_sum};
use powmod::{acceptance, Rational, SieveTable, UnitGroupStructure, C64};
use proptest::prelude::*;

const LIMIT: u64 = 20_000;

fn sieve() -> &'static SieveTable {
    static T: OnceLock<SieveTable> = OnceLock::new();
    T.get_or_init(|| build_sieve(LIMIT).unwrap())
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sieve_agrees_with_trial_division(n in 1u64..LIMIT) {
        let t = sieve();
        prop_assert_eq!(t.mu(n) as i64, acceptance::naive_mu(n));
        prop_assert!((t.lambda(n) - acceptance::naive_lambda(n)).abs() < 1e-12);
    }

    /// Character orthogonality recovers the progression sum for units `a`.
    #[test]
    fn characters_partition_progressions(q in 2u64..60, a in 1u64..60, x in 1.0f64..5000.0) {
        prop_assume!(gcd(a % q, q) == 1);
        let t = sieve();
        let s = UnitGroupStructure::for_modulus(q).unwrap();
        let mut total = Complex::new(0.0, 0.0);
        for chi in s.characters() {
            total += chi.eval::<f64>(a % q).conj() * mobius_sum(x, &chi, t).unwrap().value;
        }
        let phi = s.modulus().euler_phi() as f64;
        let d = progression_sum(x, q, a as i64, t).unwrap() as f64;
        prop_assert!(close(total, Complex::new(phi * d, 0.0), 1e-8 * (1.0 + x)), "{total} vs {}", phi * d);
    }

    /// `D_q(x, b) = (1/q) Σ_a S_q(x, a) e(−ab/q)`.
    #[test]
    fn progression_is_fourier_transform_of_exp_sums(q in 1u64..40, b in 0i64..40, x in 1.0f64..3000.0) {
        let t = sieve();
        let mut total = Complex::new(0.0, 0.0);
        for a in 0..q {
            let tw = Complex::from_polar(1.0, -std::f64::consts::TAU * ((a as i64 * b).rem_euclid(q as i64)) as f64 / q as f64);
            total += exp_sum(x, q, a as i64, t).unwrap() * tw;
        }
        total /= q as f64;
        let d = progression_sum(x, q, b, t).unwrap() as f64;
        prop_assert!(close(total, Complex::new(d, 0.0), 1e-9 * (1.0 + x)), "{total} vs {d}");
    }

    #[test]
    fn conjugate_character_conjugates_sums(q in 2u64..50, k in 0usize..64, x in 2.0f64..5000.0) {
        let t = sieve();
        let s = UnitGroupStructure::for_modulus(q).unwrap();
        let chars: Vec<_> = s.characters().collect();
        let chi = &chars[k % chars.len()];
        let a = psi_sum(x, chi, t).unwrap().value;
        let b = psi_sum(x, &chi.conj(), t).unwrap().value;
        prop_assert!(close(a.conj(), b, 1e-9 * x));
    }

    #[test]
    fn dirichlet_polynomial_trivial_bound(q in 1u64..30, k in 0usize..64, m in 0.0f64..1e4, n in 1.0f64..2000.0, tw in -50.0f64..50.0) {
        let s = UnitGroupStructure::for_modulus(q).unwrap();
        let chars: Vec<_> = s.characters().collect();
        let chi = &chars[k % chars.len()];
        let v = dirichlet_poly(m, n, tw, chi).unwrap();
        prop_assert!(v.norm() <= n.floor() + 1.0 + 1e-9);
    }

    #[test]
    fn walsh_coefficient_matches_product_form(n in 1u32..12, mask in any::<u64>()) {
        let mask = mask & ((1u64 << n) - 1);
        let t = sieve();
        let bits: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let direct = powmod::sums::walsh_coefficient(n, mask, t).unwrap();
        prop_assert_eq!(direct, acceptance::walsh_product_form(n, &bits));
        prop_assert!(direct.unsigned_abs() <= 1 << n);
    }

    /// The piecewise definition of β agrees with its min/max closed form.
    #[test]
    fn beta_piecewise_is_closed_form(num in 1i64..5000, den in 1i64..2000) {
        let alpha = Rational::new(num, den);
        prop_assert_eq!(beta(alpha).unwrap(), beta_closed(alpha).unwrap());
    }

    #[test]
    fn mv_bound_scales_inversely(r in 0.01f64..10.0, gap in 0.01f64..10.0, ratio in 1.01f64..100.0, lambda in 0.01f64..100.0) {
        let big_r = r + gap;
        let delta = big_r * ratio;
        let b = mv_bound_b(delta, r, big_r).unwrap();
        let scaled = mv_bound_b(lambda * delta, lambda * r, lambda * big_r).unwrap();
        prop_assert!((scaled * lambda - b).abs() <= 1e-10 * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn l_function_conjugate_symmetry(q in 1u64..30, k in 0usize..64, sigma in 0.3f64..2.5, t in -40.0f64..40.0) {
        let s = UnitGroupStructure::for_modulus(q).unwrap();
        let chars: Vec<_> = s.characters().collect();
        let chi = &chars[k % chars.len()];
        prop_assume!(!chi.is_principal() || sigma > 1.05);
        let p = ComplexPoint::new(sigma, t);
        let a = evaluate_l(p, chi, 1e-11).unwrap();
        let b = evaluate_l(p.conj(), &chi.conj(), 1e-11).unwrap();
        prop_assert!(close(a.value.conj(), b.value, a.abs_error_bound + b.abs_error_bound + 1e-12));
    }

    /// Euler product over primes below the sieve limit; the tail is below 1e−9 at σ = 3.
    #[test]
    fn euler_product_at_sigma_three(q in 1u64..40, k in 0usize..64, t in -30.0f64..30.0) {
        let s = UnitGroupStructure::for_modulus(q).unwrap();
        let chars: Vec<_> = s.characters().collect();
        let chi = &chars[k % chars.len()];
        let z = Complex::new(3.0, t);
        let mut prod = Complex::new(1.0, 0.0);
        for p in (2..LIMIT).filter(|&p| is_prime(p)) {
            let term = chi.eval::<f64>(p) * Complex::new(p as f64, 0.0).powc(-z);
            prod /= Complex::new(1.0, 0.0) - term;
        }
        let l = evaluate_l(ComplexPoint::new(3.0, t), chi, 1e-12).unwrap();
        prop_assert!(close(l.value, prod, 1e-8), "{} vs {prod}", l.value);
    }

    /// A loose evaluation lies within its stated error of a tight one.
    #[test]
    fn error_bounds_are_honest(q in 1u64..25, k in 0usize..64, sigma in 0.2f64..2.0, t in 1.0f64..60.0, loose in 4i32..8) {
        let s = UnitGroupStructure::for_modulus(q).unwrap();
        let chars: Vec<_> = s.characters().collect();
        let chi = &chars[k % chars.len()];
        prop_assume!(!chi.is_principal() || sigma > 1.05);
        let p = ComplexPoint::new(sigma, t);
        let rough = evaluate_l(p, chi, 10f64.powi(-loose)).unwrap();
        let fine = evaluate_l(p, chi, 1e-13).unwrap();
        prop_assert!(rough.abs_error_bound <= 10f64.powi(-loose));
        prop_assert!(
            close(rough.value, fine.value, rough.abs_error_bound + fine.abs_error_bound + 1e-13),
            "{} vs {} (bound {})", rough.value, fine.value, rough.abs_error_bound
        );
    }
}
