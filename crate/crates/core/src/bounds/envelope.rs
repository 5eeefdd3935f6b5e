use crate::arith::FactoredModulus;
use crate::error::{domain, Result};
use crate::scalar::{Field, Real};

use super::config::{EnvelopeConfig, DYADIC_C};

/// Which piece of a piecewise formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    First = 1,
    Second = 2,
    Third = 3,
}

impl Branch {
    pub fn index(self) -> u8 {
        self as u8
    }
}

/// `log Q₁ = (log q)^{7/3}(log log q)^{5/3}`, `log Q₂ = (log q)^7/log log q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<T> {
    pub ln_q: T,
    pub lnln_q: T,
    pub ln_q1: T,
    pub ln_q2: T,
}

pub fn thresholds_q<T: Real>(q: T) -> Result<Thresholds<T>> {
    if !(q >= T::lit(3.0)) || !q.is_finite() {
        return domain(format!("thresholds need q ≥ 3, got {q}"));
    }
    let ln_q = q.ln();
    let lnln_q = ln_q.ln();
    Ok(Thresholds {
        ln_q,
        lnln_q,
        ln_q1: ln_q.powf(T::lit(7.0 / 3.0)) * lnln_q.powf(T::lit(5.0 / 3.0)),
        ln_q2: ln_q.powi(7) / lnln_q,
    })
}

impl<T: Real> Thresholds<T> {
    /// Branch for `log x`, with `x ≤ Q₁` and `x ≤ Q₂` inclusive on the left.
    pub fn branch(&self, ln_x: T) -> Branch {
        if ln_x <= self.ln_q1 {
            Branch::First
        } else if ln_x <= self.ln_q2 {
            Branch::Second
        } else {
            Branch::Third
        }
    }
}

/// `log E_j` together with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeValue<T> {
    pub branch: Branch,
    pub ln_value: T,
}

impl<T: Real> EnvelopeValue<T> {
    pub fn value(&self) -> T {
        self.ln_value.exp()
    }
}

/// `log E_j` evaluated with the formula of `branch`, whatever the range.
pub fn envelope_branch_ln<T: Real>(branch: Branch, j: u32, ln_x: T, th: &Thresholds<T>, c: T) -> T {
    match branch {
        Branch::First => {
            -c * ln_x * th.ln_q.powf(T::lit(-2.0 / 3.0)) * th.lnln_q.powf(T::lit(-4.0 / 3.0))
                + T::lit(j as f64) * ln_x.ln()
        }
        Branch::Second => -c * (ln_x * th.ln_q).sqrt() / th.lnln_q.sqrt(),
        Branch::Third => -c * ln_x.powf(T::lit(4.0 / 7.0)) * ln_x.ln().powf(T::lit(-3.0 / 7.0)),
    }
}

/// `E_j(x)` for `j ∈ {1, 2}`, given `log x`.
pub fn envelope_e<T: Real>(j: u32, ln_x: T, q: T, cfg: &EnvelopeConfig<T>) -> Result<EnvelopeValue<T>> {
    if j != 1 && j != 2 {
        return domain(format!("envelope index must be 1 or 2, got {j}"));
    }
    if !(ln_x >= T::lit(3.0).ln()) || !ln_x.is_finite() {
        return domain(format!("envelope needs x ≥ 3, got log x = {ln_x}"));
    }
    let th = thresholds_q(q)?;
    let branch = th.branch(ln_x);
    Ok(EnvelopeValue { branch, ln_value: envelope_branch_ln(branch, j, ln_x, &th, cfg.c) })
}

/// Both one-sided values of `E_j` around `Q₁` (`at = First`) or `Q₂`
/// (`at = Second`), at `x = Q(1 ∓ δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpReport<T> {
    pub ln_boundary: T,
    pub ln_left: T,
    pub ln_right: T,
}

impl<T: Real> JumpReport<T> {
    /// `log(E(Q⁺)/E(Q⁻))`.
    pub fn ln_ratio(&self) -> T {
        self.ln_right - self.ln_left
    }
}

pub fn envelope_jump<T: Real>(
    j: u32,
    q: T,
    at: Branch,
    rel_delta: T,
    cfg: &EnvelopeConfig<T>,
) -> Result<JumpReport<T>> {
    let th = thresholds_q(q)?;
    let (ln_b, left, right) = match at {
        Branch::First => (th.ln_q1, Branch::First, Branch::Second),
        Branch::Second => (th.ln_q2, Branch::Second, Branch::Third),
        Branch::Third => return domain("no boundary after the last branch"),
    };
    let lo = ln_b + (T::one() - rel_delta).ln();
    let hi = ln_b + (T::one() + rel_delta).ln();
    let l = envelope_e(j, lo, q, cfg)?;
    let r = envelope_e(j, hi, q, cfg)?;
    debug_assert_eq!((l.branch, r.branch), (left, right));
    Ok(JumpReport { ln_boundary: ln_b, ln_left: l.ln_value, ln_right: r.ln_value })
}

fn check_alpha<F: Field>(alpha: &F) -> Result<()> {
    if *alpha > F::zero() {
        Ok(())
    } else {
        domain(format!("β needs α > 0, got {alpha:?}"))
    }
}

fn beta_pieces<F: Field>(alpha: &F) -> [F; 3] {
    let half = F::from_ratio(1, 2);
    [
        F::from_ratio(4, 7),
        (F::one() + alpha.clone()) * half,
        F::one() - F::from_ratio(2, 3) * alpha.clone(),
    ]
}

/// `β(α)`: `4/7` for `α ≤ 1/7`, `(1+α)/2` for `α ≤ 3/7`, else `1 − 2α/3`.
pub fn beta<F: Field>(alpha: F) -> Result<F> {
    check_alpha(&alpha)?;
    let [p1, p2, p3] = beta_pieces(&alpha);
    Ok(if alpha <= F::from_ratio(1, 7) {
        p1
    } else if alpha <= F::from_ratio(3, 7) {
        p2
    } else {
        p3
    })
}

/// Values of every branch whose closed range contains `α` (two at 1/7, 3/7).
pub fn beta_branches<F: Field>(alpha: F) -> Result<Vec<F>> {
    check_alpha(&alpha)?;
    let (b1, b2) = (F::from_ratio(1, 7), F::from_ratio(3, 7));
    let [p1, p2, p3] = beta_pieces(&alpha);
    let mut out = Vec::new();
    if alpha <= b1 {
        out.push(p1);
    }
    if alpha >= b1 && alpha <= b2 {
        out.push(p2);
    }
    if alpha >= b2 {
        out.push(p3);
    }
    Ok(out)
}

/// `min{max{4/7, (1+α)/2}, 1 − 2α/3}`.
pub fn beta_closed<F: Field>(alpha: F) -> Result<F> {
    check_alpha(&alpha)?;
    let [p1, p2, p3] = beta_pieces(&alpha);
    let hi = if p2 > p1 { p2 } else { p1 };
    Ok(if p3 < hi { p3 } else { hi })
}

/// Largest `α` with `β(α) = v`; exists for `v ≤ 5/7`.
pub fn beta_max_root<F: Field>(v: F) -> Result<F> {
    if v > F::from_ratio(5, 7) {
        return domain(format!("β never reaches {v:?}"));
    }
    Ok(F::from_ratio(3, 2) * (F::one() - v))
}

/// Root of `β(α) = α`.
pub fn beta_fixed_point<F: Field>() -> F {
    F::one() / (F::one() + F::from_ratio(2, 3))
}

/// `log f(u)` for the formula of `branch`.
pub fn dyadic_branch_ln<T: Real>(branch: Branch, ln_u: T, ln_q: T, cfg: &EnvelopeConfig<T>) -> T {
    match branch {
        Branch::First => ln_u * (T::one() - cfg.xi0 * (ln_u / ln_q).powi(2)),
        _ => ln_u - cfg.c0 * ln_q,
    }
}

/// `log f(u)` given `log u`: `u^{1−ξ₀(log u)²/(log q)²}` on
/// `𝔮♯^{γ₀} ≤ u ≤ q^C`, `u·q^{−c₀}` above.
pub fn dyadic_envelope_f<T: Real>(
    ln_u: T,
    m: &FactoredModulus,
    cfg: &EnvelopeConfig<T>,
) -> Result<EnvelopeValue<T>> {
    if m.q() < 2 {
        return domain("dyadic envelope needs q ≥ 2");
    }
    let ln_q = T::of_u64(m.q()).ln();
    let ln_lower = T::lit(cfg.gamma0 as f64) * T::of_u64(m.core()).ln();
    if !(ln_u >= ln_lower) {
        return domain(format!("u below core^γ₀: log u = {ln_u} < {ln_lower}"));
    }
    let branch = if ln_u <= T::lit(DYADIC_C as f64) * ln_q { Branch::First } else { Branch::Second };
    Ok(EnvelopeValue { branch, ln_value: dyadic_branch_ln(branch, ln_u, ln_q, cfg) })
}
