use crate::error::{domain, Result};
use crate::scalar::Real;

use super::config::EnvelopeConfig;
use super::envelope::{thresholds_q, Branch};
use super::region::region_params;

/// Truncation height chosen for the Perron integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronChoice<T> {
    pub case: Branch,
    pub ln_t: T,
}

impl<T: Real> PerronChoice<T> {
    pub fn t(&self) -> T {
        self.ln_t.exp()
    }
}

/// Case by `x ≤ Q₁`, `Q₁ < x ≤ Q₂`, `x > Q₂` and the matching `log T`.
pub fn perron_t_select<T: Real>(ln_x: T, q: T, cfg: &EnvelopeConfig<T>) -> Result<PerronChoice<T>> {
    if !(ln_x > T::E()) || !ln_x.is_finite() {
        return domain(format!("need x > e^e, got log x = {ln_x}"));
    }
    let th = thresholds_q(q)?;
    let case = th.branch(ln_x);
    let lit = T::lit;
    let ln_t = match case {
        Branch::First => cfg.b1 * ln_x / (th.ln_q.powf(lit(2.0 / 3.0)) * th.lnln_q.powf(lit(4.0 / 3.0))),
        Branch::Second => cfg.b1 * (ln_x * th.ln_q).sqrt() / th.lnln_q.sqrt(),
        Branch::Third => lit(16.0) * cfg.b2 * ln_x.powf(lit(4.0 / 7.0)) * ln_x.ln().powf(lit(-3.0 / 7.0)),
    };
    Ok(PerronChoice { case, ln_t })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WiredReport<T> {
    pub holds: bool,
    /// `c / Θ(T)`.
    pub lhs: T,
    /// `min_t (ϑ(t) − c/Θ(T))` over the grid.
    pub min_margin: T,
    pub argmin_t: T,
    pub first_violation: Option<T>,
    pub points: usize,
}

/// Checks `c Θ(T)^{−1} < ϑ(t)` at `t = 0` and on a log grid of `[1, T]`.
pub fn perron_wired_check<T: Real>(
    q: T,
    core: T,
    height: T,
    grid: usize,
    cfg: &EnvelopeConfig<T>,
) -> Result<WiredReport<T>> {
    if !(height >= T::one()) {
        return domain(format!("need T ≥ 1, got {height}"));
    }
    if grid < 2 {
        return domain("grid needs at least two points");
    }
    let lhs = cfg.c_perron / region_params(q, core, height, cfg)?.big_theta;
    let ln_h = height.ln();
    let ts = std::iter::once(T::zero())
        .chain((0..grid).map(|i| (ln_h * T::of_u64(i as u64) / T::of_u64(grid as u64 - 1)).exp()));
    let mut report = WiredReport {
        holds: true,
        lhs,
        min_margin: T::infinity(),
        argmin_t: T::zero(),
        first_violation: None,
        points: grid + 1,
    };
    for t in ts {
        let margin = region_params(q, core, t, cfg)?.vartheta - lhs;
        if margin < report.min_margin {
            report.min_margin = margin;
            report.argmin_t = t;
        }
        if !(margin > T::zero()) && report.first_violation.is_none() {
            report.holds = false;
            report.first_violation = Some(t);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q1_is_inclusive() {
        let cfg = EnvelopeConfig::<f64>::default();
        let q = 1e3;
        let th = thresholds_q(q).unwrap();
        assert_eq!(perron_t_select(th.ln_q1, q, &cfg).unwrap().case, Branch::First);
        assert_eq!(perron_t_select(th.ln_q1 * (1.0 + 1e-12), q, &cfg).unwrap().case, Branch::Second);
        assert_eq!(perron_t_select(th.ln_q2 * 1.01, q, &cfg).unwrap().case, Branch::Third);
        assert!(perron_t_select(2.0, q, &cfg).is_err());
    }

    #[test]
    fn case_two_height_increases() {
        let cfg = EnvelopeConfig::<f64>::default();
        let q = 1e3;
        let th = thresholds_q(q).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 1..200 {
            let ln_x = th.ln_q1 + (th.ln_q2 - th.ln_q1) * i as f64 / 200.0;
            let c = perron_t_select(ln_x, q, &cfg).unwrap();
            assert_eq!(c.case, Branch::Second);
            assert!(c.ln_t > prev);
            prev = c.ln_t;
        }
    }

    #[test]
    fn wired_small_modulus() {
        let cfg = EnvelopeConfig::<f64>::default();
        let r = perron_wired_check(8.0, 2.0, 1000.0, 1000, &cfg).unwrap();
        assert!(r.holds);
        assert_eq!(r.points, 1001);
        let mut tiny = cfg.clone();
        tiny.c_perron = 1e-12;
        assert!(perron_wired_check(8.0, 2.0, 1e6, 200, &tiny).unwrap().holds);
    }
}
