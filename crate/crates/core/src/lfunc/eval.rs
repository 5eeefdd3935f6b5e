use num_complex::Complex;
use serde::Serialize;

use super::abel::{abel_eval, AbelTables};
use super::em::{em_auto, pow_neg, EmOutput, Periodic};
use super::ComplexPoint;
use crate::arith::SieveTable;
use crate::characters::DirichletCharacter;
use crate::error::{domain, Result};
use crate::scalar::{KahanSum, Real};

/// Non-principal evaluations require `σ > MIN_SIGMA`.
pub const MIN_SIGMA: f64 = 0.1;

/// Largest number of series terms any single evaluation may use.
pub const DEFAULT_TERM_CAP: u64 = 50_000_000;

/// Step of the finite-difference logarithmic derivative.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// `ψ(x) < 1.03883 x` for all `x > 0`.
const CHEBYSHEV_PSI: f64 = 1.03883;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TruncatedAbel,
    HurwitzEm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::TruncatedAbel => "truncated_abel",
            Method::HurwitzEm => "hurwitz_em",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LEvaluation<T> {
    pub s: ComplexPoint<T>,
    pub value: Complex<T>,
    pub abs_error_bound: T,
    pub method: Method,
    pub terms_used: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivedMethod {
    /// Quotient of Euler–Maclaurin values of `L′` and `L` (σ > 1).
    EmDerivative,
    /// `−Σ Λ(n) χ(n) n^{−s}` truncated, with a Chebyshev tail bound (σ > 1).
    DirichletSeries,
    /// Central difference of `log L` in `σ`; error is an estimate only.
    FiniteDifference,
    Reciprocal,
}

impl DerivedMethod {
    pub fn name(self) -> &'static str {
        match self {
            DerivedMethod::EmDerivative => "em_derivative",
            DerivedMethod::DirichletSeries => "dirichlet_series",
            DerivedMethod::FiniteDifference => "finite_difference",
            DerivedMethod::Reciprocal => "reciprocal",
        }
    }
}

/// `L′/L` with an error bound (`rigorous`) or estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedEvaluation<T> {
    pub s: ComplexPoint<T>,
    pub value: Complex<T>,
    pub abs_error: T,
    pub rigorous: bool,
    pub method: DerivedMethod,
}

/// `1/L`, or a near-zero signal when `|L| ≤ 10·error`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecipEvaluation<T> {
    pub s: ComplexPoint<T>,
    pub value: Option<Complex<T>>,
    pub abs_error: T,
    pub abs_l: T,
    pub l_error: T,
    pub possible_zero: bool,
}

/// Per-character state reused across many evaluation points.
#[derive(Debug, Clone)]
pub struct LEvaluator<T> {
    chi: DirichletCharacter,
    periodic: Periodic<T>,
    abel: Option<AbelTables<T>>,
    primes: Vec<u64>,
    pub term_cap: u64,
    pub fd_step: T,
}

impl<T: Real> LEvaluator<T> {
    pub fn new(chi: &DirichletCharacter) -> Self {
        let principal = chi.is_principal();
        // Principal characters go through ζ(s) Π_{p|q}(1 − p^{−s}).
        let table = if principal { vec![Complex::new(T::one(), T::zero())] } else { chi.value_table() };
        let data = Periodic::new(table, !principal);
        let abel = (!principal).then(|| AbelTables::build(&data));
        let primes = chi.structure().modulus().factors().iter().map(|f| f.0).collect();
        Self {
            chi: chi.clone(),
            periodic: data,
            abel,
            primes,
            term_cap: DEFAULT_TERM_CAP,
            fd_step: T::lit(DEFAULT_FD_STEP),
        }
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }

    fn check(&self, s: ComplexPoint<T>) -> Result<()> {
        if !s.sigma.is_finite() || !s.t.is_finite() {
            return domain("evaluation point must be finite");
        }
        if self.chi.is_principal() {
            if !(s.sigma > T::one()) {
                return domain(format!("principal character needs σ > 1, got σ = {}", s.sigma));
            }
        } else if !(s.sigma > T::lit(MIN_SIGMA)) {
            return domain(format!("need σ > {MIN_SIGMA}, got σ = {}", s.sigma));
        }
        Ok(())
    }

    /// Value and derivative by Euler–Maclaurin, both within `target`.
    fn em(&self, s: ComplexPoint<T>, target: T) -> Result<EmOutput<T>> {
        self.check(s)?;
        let z = s.s();
        if !self.chi.is_principal() {
            return em_auto(z, &self.periodic, target, self.term_cap);
        }
        // ζ·E with E = Π(1 − p^{−s}), |E| ≤ 2^k and |E′| ≤ |E| Σ log p/(p^σ − 1).
        let mut e = Complex::new(T::one(), T::zero());
        let mut e_log = Complex::new(T::zero(), T::zero());
        let mut e_bound = T::one();
        let mut e_log_bound = T::zero();
        for &p in &self.primes {
            let ln_p = T::of_u64(p).ln();
            let ps = pow_neg(z, ln_p);
            let one = Complex::new(T::one(), T::zero());
            e *= one - ps;
            e_log += ps * ln_p / (one - ps);
            let pm = (-s.sigma * ln_p).exp();
            e_bound *= T::one() + pm;
            e_log_bound += ln_p * pm / (T::one() - pm);
        }
        let e_der_bound = e_bound * e_log_bound;
        let scale = e_bound.max(e_der_bound).max(T::one());
        let z_out = em_auto(z, &self.periodic, target / (T::lit(2.0) * scale), self.term_cap)?;
        let e_der = e * e_log;
        Ok(EmOutput {
            value: z_out.value * e,
            deriv: z_out.deriv * e + z_out.value * e_der,
            err: z_out.err * e_bound,
            deriv_err: z_out.deriv_err * e_bound + z_out.err * e_der_bound,
            terms: z_out.terms,
        })
    }

    /// `L(s, χ)`: truncated Abel series for non-principal characters,
    /// Euler–Maclaurin through `ζ` for principal ones.
    pub fn evaluate(&self, s: ComplexPoint<T>, target: T) -> Result<LEvaluation<T>> {
        let method = if self.chi.is_principal() { Method::HurwitzEm } else { Method::TruncatedAbel };
        self.evaluate_with(method, s, target)
    }

    pub fn evaluate_with(&self, method: Method, s: ComplexPoint<T>, target: T) -> Result<LEvaluation<T>> {
        self.check(s)?;
        if !(target > T::zero()) {
            return domain("target error must be positive");
        }
        match method {
            Method::HurwitzEm => {
                let out = self.em(s, target)?;
                Ok(LEvaluation { s, value: out.value, abs_error_bound: out.err, method, terms_used: out.terms })
            }
            Method::TruncatedAbel => {
                let Some(tables) = &self.abel else {
                    return domain("truncated Abel summation needs a non-principal character");
                };
                let out = abel_eval(s.s(), &self.periodic, tables, target, self.term_cap)?;
                Ok(LEvaluation { s, value: out.value, abs_error_bound: out.err, method, terms_used: out.terms })
            }
        }
    }

    /// `L(s)` and `L′(s)` with error bounds, by Euler–Maclaurin.
    pub fn value_and_derivative(&self, s: ComplexPoint<T>, target: T) -> Result<(LEvaluation<T>, Complex<T>, T)> {
        let out = self.em(s, target)?;
        let ev = LEvaluation {
            s,
            value: out.value,
            abs_error_bound: out.err,
            method: Method::HurwitzEm,
            terms_used: out.terms,
        };
        Ok((ev, out.deriv, out.deriv_err))
    }

    /// `L′/L`: rigorous Euler–Maclaurin quotient for `σ > 1`, finite
    /// differences of `log L` otherwise.
    pub fn logderiv(&self, s: ComplexPoint<T>, target: T) -> Result<DerivedEvaluation<T>> {
        if s.sigma > T::one() {
            self.logderiv_em(s, target)
        } else {
            self.logderiv_fd(s, target)
        }
    }

    pub fn logderiv_em(&self, s: ComplexPoint<T>, target: T) -> Result<DerivedEvaluation<T>> {
        let mut tgt = target;
        loop {
            let (ev, d, de) = self.value_and_derivative(s, tgt)?;
            let (l, le) = (ev.value.norm(), ev.abs_error_bound);
            if l > T::lit(2.0) * le {
                let err = (de * l + d.norm() * le) / (l * (l - le));
                if err <= target || tgt < T::lit(1e-15) {
                    return Ok(DerivedEvaluation {
                        s,
                        value: d / ev.value,
                        abs_error: err,
                        rigorous: true,
                        method: DerivedMethod::EmDerivative,
                    });
                }
            } else if tgt < T::lit(1e-15) {
                return domain(format!("|L| = {l} too small near s = {}+{}i", s.sigma, s.t));
            }
            tgt = tgt * T::lit(0.01);
        }
    }

    /// Richardson-extrapolated central difference of `log L` along `σ`.
    pub fn logderiv_fd(&self, s: ComplexPoint<T>, target: T) -> Result<DerivedEvaluation<T>> {
        let h = self.fd_step;
        let inner = (target * h).max(T::lit(1e-15));
        let val = |sig: T| -> Result<Complex<T>> {
            Ok(self.evaluate(ComplexPoint::new(sig, s.t), inner)?.value)
        };
        let diff = |h: T| -> Result<Complex<T>> {
            let (a, b) = (val(s.sigma + h)?, val(s.sigma - h)?);
            Ok((a / b).ln() / (T::lit(2.0) * h))
        };
        let d1 = diff(h)?;
        let d2 = diff(h * T::lit(0.5))?;
        let value = (d2 * T::lit(4.0) - d1) / T::lit(3.0);
        Ok(DerivedEvaluation {
            s,
            value,
            abs_error: (d2 - d1).norm(),
            rigorous: false,
            method: DerivedMethod::FiniteDifference,
        })
    }

    pub fn recip(&self, s: ComplexPoint<T>, target: T) -> Result<RecipEvaluation<T>> {
        let mut tgt = target;
        loop {
            let ev = self.evaluate(s, tgt)?;
            let (l, le) = (ev.value.norm(), ev.abs_error_bound);
            let usable = l > T::lit(10.0) * le;
            let err = if usable { le / (l * (l - le)) } else { T::infinity() };
            if (usable && err <= target) || tgt < T::lit(1e-15) {
                return Ok(RecipEvaluation {
                    s,
                    value: usable.then(|| ev.value.inv()),
                    abs_error: err,
                    abs_l: l,
                    l_error: le,
                    possible_zero: !usable,
                });
            }
            tgt = (tgt * T::lit(0.01)).min(target * l * l * T::lit(0.5));
        }
    }
}

pub fn evaluate_l<T: Real>(s: ComplexPoint<T>, chi: &DirichletCharacter, target: T) -> Result<LEvaluation<T>> {
    LEvaluator::new(chi).evaluate(s, target)
}

pub fn evaluate_logderiv<T: Real>(
    s: ComplexPoint<T>,
    chi: &DirichletCharacter,
    target: T,
) -> Result<DerivedEvaluation<T>> {
    LEvaluator::new(chi).logderiv(s, target)
}

pub fn evaluate_recip<T: Real>(s: ComplexPoint<T>, chi: &DirichletCharacter, target: T) -> Result<RecipEvaluation<T>> {
    LEvaluator::new(chi).recip(s, target)
}

/// `L′/L(s) = −Σ_{n≤N} Λ(n) χ(n) n^{−s}` plus the tail bound
/// `1.04 σ N^{1−σ}/(σ−1)`, for `σ > 1`, with `N = t.limit()`.
pub fn logderiv_series<T: Real>(
    s: ComplexPoint<T>,
    chi: &DirichletCharacter,
    t: &SieveTable,
) -> Result<DerivedEvaluation<T>> {
    if !(s.sigma > T::one()) {
        return domain("the Dirichlet series for L′/L needs σ > 1");
    }
    let q = chi.modulus();
    let table = chi.value_table::<T>();
    let z = s.s();
    let mut acc = KahanSum::new();
    for n in 2..=t.limit() {
        let lam = t.lambda(n);
        if lam != 0.0 {
            let c = table[(n % q) as usize];
            acc.add(c * pow_neg(z, T::of_u64(n).ln()) * T::lit(-lam));
        }
    }
    let n = T::of_u64(t.limit());
    let tail = T::lit(CHEBYSHEV_PSI) * s.sigma * n.powf(T::one() - s.sigma) / (s.sigma - T::one());
    Ok(DerivedEvaluation { s, value: acc.value(), abs_error: tail, rigorous: true, method: DerivedMethod::DirichletSeries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_sieve;
    use crate::characters::UnitGroupStructure;
    use crate::C64;

    fn chars(q: u64) -> Vec<DirichletCharacter> {
        UnitGroupStructure::for_modulus(q).unwrap().characters().collect()
    }

    #[test]
    fn zeta_two() {
        let one = &chars(1)[0];
        let ev = evaluate_l(ComplexPoint::new(2.0, 0.0), one, 1e-12).unwrap();
        assert_eq!(ev.method, Method::HurwitzEm);
        assert!((ev.value.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-11);
        let r = evaluate_recip(ComplexPoint::new(2.0, 0.0), one, 1e-12).unwrap();
        assert!((r.value.unwrap().re - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-11);
        assert!(!r.possible_zero);
    }

    #[test]
    fn l_one_mod_three_both_methods() {
        let chi = &chars(3)[1];
        let want = std::f64::consts::PI / (3.0 * 3f64.sqrt());
        let e = LEvaluator::new(chi);
        for m in [Method::TruncatedAbel, Method::HurwitzEm] {
            let ev = e.evaluate_with(m, ComplexPoint::new(1.0, 0.0), 1e-11).unwrap();
            assert!((ev.value - C64::new(want, 0.0)).norm() < 1e-10, "{m:?}");
        }
        assert!((want - 0.604_600).abs() < 1e-6);
    }

    #[test]
    fn domain_checks() {
        let one = &chars(1)[0];
        assert!(evaluate_l(ComplexPoint::new(1.0, 3.0), one, 1e-8).is_err());
        let chi = &chars(5)[1];
        assert!(evaluate_l(ComplexPoint::new(0.1, 3.0), chi, 1e-8).is_err());
        let e = LEvaluator::new(one);
        assert!(e.evaluate_with(Method::TruncatedAbel, ComplexPoint::new(2.0, 0.0), 1e-8).is_err());
    }

    #[test]
    fn principal_mod_six_matches_euler_factor() {
        let chi0 = &chars(6)[0];
        let s = ComplexPoint::new(2.5, 1.0);
        let l = evaluate_l(s, chi0, 1e-12).unwrap().value;
        let z = evaluate_l(s, &chars(1)[0], 1e-12).unwrap().value;
        let one = C64::new(1.0, 0.0);
        let f = (one - C64::new(2.0, 0.0).powc(-s.s())) * (one - C64::new(3.0, 0.0).powc(-s.s()));
        assert!((l - z * f).norm() < 1e-11);
    }

    #[test]
    fn neg_zeta_logderiv_at_two() {
        let one = &chars(1)[0];
        let d = evaluate_logderiv(ComplexPoint::new(2.0f64, 0.0), one, 1e-12).unwrap();
        assert!(d.rigorous);
        assert!((-d.value.re - 0.569_960_993_094_532_4).abs() < 1e-11);
        let t = build_sieve(200_000).unwrap();
        let series = logderiv_series(ComplexPoint::new(2.0, 0.0), one, &t).unwrap();
        assert!((series.value - d.value).norm() <= series.abs_error + d.abs_error);
    }

    #[test]
    fn fd_matches_analytic_at_one_and_a_half() {
        for chi in chars(5).iter().skip(1) {
            let e = LEvaluator::new(chi);
            for t in [0.0, 2.0, -7.5] {
                let s = ComplexPoint::new(1.5, t);
                let a = e.logderiv_em(s, 1e-10).unwrap();
                let b = e.logderiv_fd(s, 1e-10).unwrap();
                assert!(!b.rigorous);
                assert!((a.value - b.value).norm() < 1e-6, "{} t={t}", chi.label());
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for chi in chars(7) {
            let e = LEvaluator::new(&chi);
            let ec = LEvaluator::new(&chi.conj());
            let s = ComplexPoint::new(if chi.is_principal() { 1.7 } else { 0.6 }, 4.25);
            let a = e.evaluate(s, 1e-13).unwrap().value;
            let b = ec.evaluate(s.conj(), 1e-13).unwrap().value;
            assert!((a - b.conj()).norm() < 1e-12, "{}", chi.label());
        }
    }
}
