//! Twisted Möbius and von Mangoldt sums over powerful moduli.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`]: factorization, admissibility of a modulus, μ/Λ sieves;
//! * [`characters`]: Dirichlet characters via generator exponents;
//! * [`sums`]: `M(x,χ)`, `ψ(x,χ)`, exponential and progression sums,
//!   Dirichlet polynomials, Fourier–Walsh coefficients;
//! * [`bounds`]: bound envelopes, zero-free-region widths, Perron `T`;
//! * [`lfunc`]: numerical `L(s,χ)`, zero scans, Perron reconstruction;
//! * [`acceptance`]: the verification suite shared by tests and the CLI.
//!
//! Numeric code is generic over [`Real`] (and, for exact breakpoint checks,
//! over [`Field`]); the aliases below fix the common instantiations.

pub mod acceptance;
pub mod arith;
pub mod bounds;
pub mod characters;
pub mod error;
pub mod lfunc;
pub mod scalar;
pub mod sums;

pub use error::{Error, Result};
pub use scalar::{Field, KahanSum, Real};

pub use arith::{factor, is_admissible, FactoredModulus, SieveTable};
pub use characters::{DirichletCharacter, UnitGroupStructure};

/// Exact rational scalar for breakpoint probes.
pub type Rational = num_rational::Ratio<i64>;
/// Double-precision complex value.
pub type C64 = num_complex::Complex<f64>;

pub type EnvelopeConfig64 = bounds::EnvelopeConfig<f64>;
pub type RegionParams64 = bounds::RegionParams<f64>;
pub type ComplexPoint64 = lfunc::ComplexPoint<f64>;
pub type LEvaluation64 = lfunc::LEvaluation<f64>;
pub type ZeroScanReport64 = lfunc::ZeroScanReport<f64>;
pub type TwistedSum64 = sums::TwistedSumResult<f64>;
