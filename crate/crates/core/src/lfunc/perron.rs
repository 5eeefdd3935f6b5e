use num_complex::Complex;
use rayon::prelude::*;

use super::eval::LEvaluator;
use super::ComplexPoint;
use crate::arith::SieveTable;
use crate::characters::DirichletCharacter;
use crate::error::{domain, Error, Result};
use crate::scalar::{KahanSum, Real};
use crate::sums::{floor_cutoff, twisted_sum, SumKind};

/// Multiplier of the truncation envelope `x (log x)^k / T`.
pub const DEFAULT_R_CONSTANT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PerronOptions<T> {
    /// Largest quadrature step in `t`.
    pub step: T,
    pub r_constant: T,
    /// Accuracy of each integrand evaluation.
    pub target: T,
}

impl<T: Real> Default for PerronOptions<T> {
    fn default() -> Self {
        Self { step: T::lit(1e-2), r_constant: T::lit(DEFAULT_R_CONSTANT), target: T::lit(1e-10) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerronRecord<T> {
    pub kind: SumKind,
    pub x: T,
    pub height: T,
    pub sigma0: T,
    pub integral_value: Complex<T>,
    /// `Σ_{n≤x} a(n) χ(n)`, with the term at `n = x` halved when `x` is an
    /// integer.
    pub direct_value: Complex<T>,
    pub discrepancy: T,
    pub r_bound: T,
    /// Simpson intervals used on `[−T, T]`.
    pub nodes: usize,
}

/// Reconstructs `ψ(x, χ)` (from `−L′/L`) or `M(x, χ)` (from `1/L`) as
/// `(1/2π) ∫_{−T}^{T} F(σ₀+it) x^{σ₀+it}/(σ₀+it) dt` with `σ₀ = 1 + 1/log x`,
/// by composite Simpson, and compares with the direct sum.
pub fn perron_reconstruct<T: Real>(
    kind: SumKind,
    x: T,
    chi: &DirichletCharacter,
    height: T,
    opts: &PerronOptions<T>,
    t: &SieveTable,
) -> Result<PerronRecord<T>> {
    if !(x > T::lit(2.0)) || !x.is_finite() {
        return domain(format!("Perron reconstruction needs x > 2, got {x}"));
    }
    if !(height >= T::lit(2.0)) || !height.is_finite() {
        return domain(format!("height T must be at least 2, got {height}"));
    }
    if !(opts.step > T::zero()) {
        return domain("quadrature step must be positive");
    }
    let n_max = floor_cutoff(x)?;
    t.check(n_max)?;

    let ln_x = x.ln();
    let sigma0 = T::one() + T::one() / ln_x;
    let two_t = height * T::lit(2.0);
    let mut n = (two_t / opts.step)
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::Resource(format!("quadrature step {} too small", opts.step)))?;
    n = (n + n % 2).max(2);
    let h = two_t / T::of_u64(n as u64);

    let ev = LEvaluator::new(chi);
    let integrand = |i: usize| -> Result<Complex<T>> {
        let s = ComplexPoint::new(sigma0, -height + h * T::of_u64(i as u64));
        let f = match kind {
            SumKind::Psi => -ev.logderiv(s, opts.target)?.value,
            SumKind::Mobius => {
                let r = ev.recip(s, opts.target)?;
                r.value.ok_or_else(|| Error::Precision(format!("|L| too small at t = {}", s.t)))?
            }
        };
        let z = s.s();
        let xs = Complex::from_polar((sigma0 * ln_x).exp(), s.t * ln_x);
        Ok(f * xs / z)
    };
    let values: Vec<Complex<T>> = (0..=n).into_par_iter().map(integrand).collect::<Result<_>>()?;
    let mut acc = KahanSum::new();
    for (i, v) in values.iter().enumerate() {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(*v * T::lit(w));
    }
    let integral_value = acc.value() * (h / T::lit(3.0)) / T::TAU();

    let mut direct_value = twisted_sum(kind, x, chi, t)?.value;
    if T::of_u64(n_max) == x {
        let a = match kind {
            SumKind::Psi => T::lit(t.lambda(n_max)),
            SumKind::Mobius => T::lit(t.mu(n_max) as f64),
        };
        direct_value -= chi.eval::<T>(n_max) * (a * T::lit(0.5));
    }

    let ln_power = match kind {
        SumKind::Psi => ln_x * ln_x,
        SumKind::Mobius => ln_x,
    };
    Ok(PerronRecord {
        kind,
        x,
        height,
        sigma0,
        integral_value,
        direct_value,
        discrepancy: (integral_value - direct_value).norm(),
        r_bound: opts.r_constant * x * ln_power / height,
        nodes: n,
    })
}
