//! Numerical Dirichlet L-functions for `σ > 0.1` (non-principal) and `σ > 1`
//! (principal): values with error bounds, logarithmic derivatives,
//! reciprocals, zero scans and Perron-integral reconstruction of `ψ` and `M`.

mod abel;
mod em;
mod eval;
mod perron;
mod zeros;

use num_complex::Complex;

use crate::scalar::Real;

pub use eval::{
    evaluate_l, evaluate_logderiv, evaluate_recip, logderiv_series, DerivedEvaluation, DerivedMethod,
    LEvaluation, LEvaluator, Method, RecipEvaluation, DEFAULT_FD_STEP, DEFAULT_TERM_CAP, MIN_SIGMA,
};
pub use perron::{perron_reconstruct, PerronOptions, PerronRecord, DEFAULT_R_CONSTANT};
pub use zeros::{zero_scan, Rectangle, ScanOptions, ZeroScanReport};

/// `s = σ + it`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint<T> {
    pub sigma: T,
    pub t: T,
}

impl<T: Real> ComplexPoint<T> {
    pub fn new(sigma: T, t: T) -> Self {
        Self { sigma, t }
    }

    pub fn s(&self) -> Complex<T> {
        Complex::new(self.sigma, self.t)
    }

    pub fn conj(&self) -> Self {
        Self { sigma: self.sigma, t: -self.t }
    }

    /// `τ = |t| + 3`.
    pub fn tau(&self) -> T {
        self.t.abs() + T::lit(3.0)
    }

    /// `ℓ = log(qτ)`.
    pub fn ell(&self, q: T) -> T {
        q.ln() + self.tau().ln()
    }
}

impl<T: Real> From<Complex<T>> for ComplexPoint<T> {
    fn from(z: Complex<T>) -> Self {
        Self::new(z.re, z.im)
    }
}
