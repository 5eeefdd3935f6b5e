//! Closed-form envelopes and parameters: the decay envelopes `E_j` with their
//! thresholds, the exponent function `β(α)`, the dyadic envelope `f(u)`,
//! zero-free-region widths and the Perron truncation height.
//!
//! Quantities that overflow a double (thresholds like `exp((log q)^7)`) are
//! carried as natural logarithms, in fields prefixed `ln_`.

pub mod config;
pub mod envelope;
pub mod perron;
pub mod region;

pub use config::{EnvelopeConfig, CONFIG_KEYS, DYADIC_C};
pub use envelope::{
    beta, beta_branches, beta_closed, beta_fixed_point, beta_max_root, dyadic_envelope_f, envelope_e,
    envelope_jump, thresholds_q, Branch, EnvelopeValue, JumpReport, Thresholds,
};
pub use perron::{perron_t_select, perron_wired_check, PerronChoice, WiredReport};
pub use region::{
    iwaniec_admissible, mv_bound_b, region_params, region_params_for, vartheta_from, zero_free_widths,
    IwaniecCheck, RegionParams, ZeroFreeWidths,
};
