use crate::arith::FactoredModulus;
use crate::error::{domain, Result};
use crate::scalar::{Field, Real};

use super::config::EnvelopeConfig;
use super::envelope::Branch;

/// Height-dependent parameters of the zero-free region and the bounds on
/// `L`, `L′/L` and `1/L` at height `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionParams<T> {
    pub tau: T,
    pub ell: T,
    pub ln_q0: T,
    pub ln_y: T,
    pub eta1: T,
    pub eta2: T,
    pub eta3: T,
    pub vartheta1: T,
    pub vartheta2: T,
    pub vartheta3: T,
    pub ln_t1: T,
    pub ln_t2: T,
    pub ln_t3: T,
    pub ln_k: T,
    pub eta: T,
    pub vartheta: T,
    /// `Θ(t)`.
    pub big_theta: T,
    /// Case selecting `(η, ϑ)` and `K` (cut at `T₁`, `T₂`).
    pub eta_branch: Branch,
    /// Case selecting `Θ` (cut at `T₁`, `T₃`).
    pub theta_branch: Branch,
}

fn ln_height<T: Real>(t: T) -> T {
    let a = t.abs();
    if a == T::zero() {
        T::neg_infinity()
    } else {
        a.ln()
    }
}

/// Case by `|t| ≤ T_lo`, `T_lo < |t| ≤ T_hi`, `|t| > T_hi` (logs compared).
fn case_of<T: Real>(ln_abs_t: T, ln_lo: T, ln_hi: T) -> Branch {
    if ln_abs_t <= ln_lo {
        Branch::First
    } else if ln_abs_t <= ln_hi {
        Branch::Second
    } else {
        Branch::Third
    }
}

pub fn region_params<T: Real>(q: T, core: T, t: T, cfg: &EnvelopeConfig<T>) -> Result<RegionParams<T>> {
    if !(q >= T::lit(3.0)) || !q.is_finite() {
        return domain(format!("region parameters need q ≥ 3, got {q}"));
    }
    if !(core >= T::lit(2.0)) || core > q {
        return domain(format!("core must lie in [2, q], got {core}"));
    }
    if !t.is_finite() {
        return domain("height must be finite");
    }
    let lit = T::lit;
    let ln_q = q.ln();
    let lnln_q = ln_q.ln();
    let tau = t.abs() + lit(3.0);
    let ell = q.ln() + tau.ln();
    let ln_ell = ell.ln();

    let ln_core = core.ln();
    let ln_q0 = ln_core * lit(cfg.gamma0 as f64).max(lit(4.0) * ell / ln_q);
    let ln_y = lit(60.0) * (ell * (lit(2.0) * ell).ln()).powf(lit(0.75));

    let eta1 = cfg.a * ln_q.powf(lit(-2.0 / 3.0)) * lnln_q.powf(lit(-1.0 / 3.0));
    let eta2 = cfg.a * ln_q / ell;
    let eta3 = cfg.a * ell.powf(lit(-0.5)) * ln_ell.powf(lit(-0.75));
    let half = lit(0.5);
    let (vartheta1, vartheta2) = (half * eta1, half * eta2);
    let vartheta3 = half * ell.powf(lit(-0.25)) * eta3;

    let ln_t1 = cfg.b1 * ln_q.powf(lit(5.0 / 3.0)) * lnln_q.powf(lit(1.0 / 3.0));
    let ln_t2 = cfg.b2 * ln_q.powi(4) * lnln_q.powi(3);
    let ln_t3 = cfg.b2 * ln_q.powi(4) / lnln_q;

    let lt = ln_height(t);
    let eta_branch = case_of(lt, ln_t1, ln_t2);
    let theta_branch = case_of(lt, ln_t1, ln_t3);
    let (eta, vartheta) = match eta_branch {
        Branch::First => (eta1, vartheta1),
        Branch::Second => (eta2, vartheta2),
        Branch::Third => (eta3, vartheta3),
    };
    let ln_k = match eta_branch {
        Branch::First => (ln_q.powf(lit(2.0 / 3.0)) * lnln_q.powf(lit(1.0 / 3.0))).ln(),
        Branch::Second => (ell / ln_q).ln(),
        Branch::Third => lit(100.0) * ell.powf(lit(0.25)),
    };
    let big_theta = match theta_branch {
        Branch::First => ln_q.powf(lit(2.0 / 3.0)) * lnln_q.powf(lit(4.0 / 3.0)),
        Branch::Second => ell * lnln_q / ln_q,
        Branch::Third => (ell * ln_ell).powf(lit(0.75)),
    };
    Ok(RegionParams {
        tau,
        ell,
        ln_q0,
        ln_y,
        eta1,
        eta2,
        eta3,
        vartheta1,
        vartheta2,
        vartheta3,
        ln_t1,
        ln_t2,
        ln_t3,
        ln_k,
        eta,
        vartheta,
        big_theta,
        eta_branch,
        theta_branch,
    })
}

pub fn region_params_for<T: Real>(m: &FactoredModulus, t: T, cfg: &EnvelopeConfig<T>) -> Result<RegionParams<T>> {
    region_params(T::of_u64(m.q()), T::of_u64(m.core()), t, cfg)
}

/// Widths of the zero-free region `σ > 1 − w`
/// (`w₁` up to height `T`, `w₂` beyond), the large-height width `w₃`, and the
/// combined width `max{min{w₁, w₂}, w₃}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroFreeWidths<T> {
    pub width1: T,
    pub width2: T,
    pub width3: T,
    pub ln_t_switch: T,
    /// `w₁` or `w₂` according to `|t|` against `T`.
    pub width: T,
    pub combined: T,
    /// `1/(40000(log 𝔮♯ + (ℓ log 2ℓ)^{3/4}))`, the ceiling `w₃` must respect.
    pub width3_ceiling: T,
    pub width3_ok: bool,
}

pub fn zero_free_widths<T: Real>(q: T, core: T, t: T, cfg: &EnvelopeConfig<T>) -> Result<ZeroFreeWidths<T>> {
    let p = region_params(q, core, t, cfg)?;
    let lit = T::lit;
    let ln_q = q.ln();
    let lnln_q = ln_q.ln();
    let width1 = p.eta1;
    let width2 = p.eta2;
    let width3 = cfg.a / (p.ell * p.ell.ln()).powf(lit(0.75));
    let ln_t_switch = cfg.b * ln_q.powf(lit(5.0 / 3.0)) * lnln_q.powf(lit(1.0 / 3.0));
    let width = if ln_height(t) <= ln_t_switch { width1 } else { width2 };
    let width3_ceiling =
        T::one() / (lit(40000.0) * (core.ln() + (p.ell * (lit(2.0) * p.ell).ln()).powf(lit(0.75))));
    Ok(ZeroFreeWidths {
        width1,
        width2,
        width3,
        ln_t_switch,
        width,
        combined: width1.min(width2).max(width3),
        width3_ceiling,
        width3_ok: width3 <= width3_ceiling,
    })
}

/// `ϑ = η/(400 log K)` for `η ∈ (0, 1/3)`, `log K ≥ 1`; exact over rationals.
pub fn vartheta_from<F: Field>(eta: F, log_k: F) -> Result<F> {
    if !(eta > F::zero() && eta < F::from_ratio(1, 3)) {
        return domain(format!("η must lie in (0, 1/3), got {eta:?}"));
    }
    if log_k < F::one() {
        return domain(format!("need K ≥ e, got log K = {log_k:?}"));
    }
    Ok(eta / (F::from_int(400) * log_k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwaniecCheck<T> {
    pub vartheta: T,
    /// `8 log(5 log 3q) + (24/η) log(2K/(5ϑ))`.
    pub lhs: T,
    /// `1/(15ϑ)`.
    pub rhs: T,
    pub holds: bool,
}

/// Evaluates the admissibility inequality for `(η, K)` at modulus `q`.
pub fn iwaniec_admissible<T: Real>(eta: T, k: T, height: T, q: T) -> Result<IwaniecCheck<T>> {
    if !(height >= T::one()) {
        return domain(format!("need T ≥ 1, got {height}"));
    }
    if !(q >= T::one()) {
        return domain(format!("need q ≥ 1, got {q}"));
    }
    let vartheta = vartheta_from(eta, k.ln())?;
    let lit = T::lit;
    let lhs = lit(8.0) * (lit(5.0) * (lit(3.0) * q).ln()).ln()
        + lit(24.0) / eta * (lit(2.0) * k / (lit(5.0) * vartheta)).ln();
    let rhs = T::one() / (lit(15.0) * vartheta);
    Ok(IwaniecCheck { vartheta, lhs, rhs, holds: lhs <= rhs })
}

/// `b(Δ, r, R) = 2R/(R−r)² + 1/((R−r) log(Δ/R))` for `0 < r < R < Δ`.
pub fn mv_bound_b<T: Real>(delta: T, r: T, big_r: T) -> Result<T> {
    if !(T::zero() < r && r < big_r && big_r < delta) {
        return domain(format!("need 0 < r < R < Δ, got r={r}, R={big_r}, Δ={delta}"));
    }
    let gap = big_r - r;
    Ok(T::lit(2.0) * big_r / (gap * gap) + T::one() / (gap * (delta / big_r).ln()))
}
