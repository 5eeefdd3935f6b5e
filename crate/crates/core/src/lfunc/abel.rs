//! Truncated series with a repeated-Abel-summation tail for non-principal
//! characters.
//!
//! With `N ≡ 0 (mod q)`, the tail `Σ_{n>N} χ(n) n^{−s}` equals
//! `Σ_{j<k} (s)_j m_j N^{−s−j} + R_k`, where `A₀(u) = Σ_{N<n≤N+u} χ(n)`,
//! `m_j` is the period mean of `A_j`, `A_{j+1}(u) = ∫₀^u (A_j − m_j)`, and
//! `|R_k| ≤ |(s)_{k+1}| ‖A_k‖_∞ N^{−σ−k}/(σ+k)`.

use num_complex::Complex;

use super::em::{is_zero, pow_neg, Periodic};
use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Real};

pub(crate) const MAX_ORDER: usize = 10;

/// Period means and sup norms of `A_0, …, A_MAX_ORDER`.
#[derive(Debug, Clone)]
pub(crate) struct AbelTables<T> {
    pub means: Vec<Complex<T>>,
    pub sups: Vec<T>,
}

impl<T: Real> AbelTables<T> {
    pub fn build(c: &Periodic<T>) -> Self {
        let q = c.q as usize;
        let zero = Complex::new(T::zero(), T::zero());
        // A₀ is the step function P(r) = Σ_{m≤r} χ(m) on [r, r+1).
        let mut pieces: Vec<Vec<Complex<T>>> = Vec::with_capacity(q);
        let mut run = zero;
        for r in 0..q {
            pieces.push(vec![run]);
            run += c.table[(r + 1) % q];
        }
        let mut means = Vec::with_capacity(MAX_ORDER + 1);
        let mut sups = Vec::with_capacity(MAX_ORDER + 1);
        for j in 0..=MAX_ORDER {
            let mut mean = KahanSum::new();
            let mut sup = T::zero();
            for p in &pieces {
                let mut norm = T::zero();
                for (i, &ci) in p.iter().enumerate() {
                    mean.add(ci / T::lit((i + 1) as f64));
                    norm += ci.norm();
                }
                sup = sup.max(norm);
            }
            let mean = mean.value() / T::of_u64(c.q);
            means.push(mean);
            sups.push(sup);
            if j == MAX_ORDER {
                break;
            }
            let mut next = Vec::with_capacity(q);
            let mut start = zero;
            for p in &pieces {
                let mut b = p.clone();
                b[0] -= mean;
                let mut np = Vec::with_capacity(b.len() + 1);
                np.push(start);
                let mut integral = zero;
                for (i, &bi) in b.iter().enumerate() {
                    let ci = bi / T::lit((i + 1) as f64);
                    np.push(ci);
                    integral += ci;
                }
                start += integral;
                next.push(np);
            }
            pieces = next;
        }
        Self { means, sups }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AbelOutput<T> {
    pub value: Complex<T>,
    pub err: T,
    pub terms: u64,
}

/// `|(s)_j|`.
fn poch_abs<T: Real>(s: Complex<T>, j: usize) -> T {
    (0..j).fold(T::one(), |acc, i| acc * (s + T::lit(i as f64)).norm())
}

pub(crate) fn abel_eval<T: Real>(
    s: Complex<T>,
    c: &Periodic<T>,
    tables: &AbelTables<T>,
    target: T,
    cap: u64,
) -> Result<AbelOutput<T>> {
    let q = c.q;
    let sigma = s.re;
    let mut best: Option<(u64, usize)> = None;
    for k in 0..=MAX_ORDER {
        let sup = tables.sups[k];
        let coef = poch_abs(s, k + 1) * sup / (sigma + T::lit(k as f64));
        let n_real = if sup == T::zero() {
            T::one()
        } else {
            (coef / target).powf(T::one() / (sigma + T::lit(k as f64)))
        };
        let periods = (n_real / T::of_u64(q)).ceil().max(T::one());
        let Some(periods) = periods.to_u64() else { continue };
        let Some(n) = periods.checked_mul(q) else { continue };
        if best.is_none_or(|(bn, _)| n < bn) {
            best = Some((n, k));
        }
    }
    let (n, k) = best.expect("at least one order");
    if n > cap {
        return Err(Error::Precision(format!(
            "truncated series needs {n} terms for error {target}, cap is {cap}"
        )));
    }
    let mut acc = KahanSum::new();
    for m in 1..=n {
        let ch = c.table[(m % q) as usize];
        if !is_zero(ch) {
            acc.add(ch * pow_neg(s, T::of_u64(m).ln()));
        }
    }
    let ln_n = T::of_u64(n).ln();
    let n_s = pow_neg(s, ln_n);
    let mut poch = Complex::new(T::one(), T::zero());
    let mut n_j = T::one();
    for j in 0..k {
        acc.add(poch * tables.means[j] * n_s * n_j);
        poch *= s + T::lit(j as f64);
        n_j /= T::of_u64(n);
    }
    let sigma_k = sigma + T::lit(k as f64);
    let err = poch_abs(s, k + 1) * tables.sups[k] * (-sigma_k * ln_n).exp() / sigma_k;
    Ok(AbelOutput { value: acc.value(), err, terms: n })
}
