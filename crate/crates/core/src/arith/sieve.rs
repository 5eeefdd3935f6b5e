//! Tables of μ(n), Λ(n) and smallest prime factors.
//!
//! Up to [`SEGMENT_THRESHOLD`] entries a linear sieve fills the tables in one
//! pass; above it the range is processed in fixed-size segments against the
//! primes up to `√limit`. Both paths produce identical tables.

use crate::error::{Error, Result};

/// Largest table the default builder agrees to allocate.
pub const DEFAULT_SIEVE_CAP: u64 = 1 << 27;

/// Tables longer than this are built segment by segment.
pub const SEGMENT_THRESHOLD: u64 = 1 << 26;

const SEGMENT_LEN: u64 = 1 << 20;

/// Immutable μ/Λ/spf tables for `0 ≤ n ≤ limit`. Index 0 holds zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveTable {
    limit: u64,
    mu: Vec<i8>,
    lambda_log: Vec<f64>,
    spf: Vec<u32>,
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// Λ(n): `log p` when `n = p^k`, else 0.
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        self.lambda_log[n as usize]
    }

    /// Smallest prime factor; `spf(1) = 1`, `spf(0) = 0`.
    #[inline]
    pub fn spf(&self, n: u64) -> u32 {
        self.spf[n as usize]
    }

    pub fn mu_slice(&self) -> &[i8] {
        &self.mu
    }

    pub fn lambda_slice(&self) -> &[f64] {
        &self.lambda_log
    }

    pub fn spf_slice(&self) -> &[u32] {
        &self.spf
    }

    pub(crate) fn from_parts(limit: u64, mu: Vec<i8>, lambda_log: Vec<f64>, spf: Vec<u32>) -> Result<Self> {
        let len = limit as usize + 1;
        if mu.len() != len || lambda_log.len() != len || spf.len() != len {
            return Err(Error::Format("sieve arrays disagree with limit".into()));
        }
        Ok(Self { limit, mu, lambda_log, spf })
    }

    pub(crate) fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::Range { requested: x, limit: self.limit })
        } else {
            Ok(())
        }
    }
}

pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    build_sieve_with_cap(limit, DEFAULT_SIEVE_CAP)
}

pub fn build_sieve_with_cap(limit: u64, cap: u64) -> Result<SieveTable> {
    if limit == 0 {
        return Err(Error::Domain("sieve limit must be at least 1".into()));
    }
    if limit > cap || limit >= u32::MAX as u64 {
        return Err(Error::Resource(format!("sieve limit {limit} exceeds cap {cap}")));
    }
    Ok(if limit <= SEGMENT_THRESHOLD {
        linear(limit)
    } else {
        segmented(limit, SEGMENT_LEN)
    })
}

/// Σ_{n ≤ x} μ(n).
pub fn mertens(x: u64, t: &SieveTable) -> Result<i64> {
    t.check(x)?;
    Ok(t.mu[1..=x as usize].iter().map(|&m| m as i64).sum())
}

fn linear(limit: u64) -> SieveTable {
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut mu = vec![0i8; n + 1];
    let mut lambda = vec![0f64; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    mu[1] = 1;
    if n >= 1 {
        spf[1] = 1;
    }
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            mu[i] = -1;
            lambda[i] = (i as f64).ln();
            primes.push(i as u32);
        } else {
            let p = spf[i] as usize;
            let j = i / p;
            if spf[j] as usize == p && lambda[j] > 0.0 {
                lambda[i] = lambda[j];
            }
        }
        let spf_i = spf[i];
        for &p in &primes {
            if p > spf_i || p as usize * i > n {
                break;
            }
            let m = p as usize * i;
            spf[m] = p;
            mu[m] = if p == spf_i { 0 } else { -mu[i] };
        }
    }
    SieveTable { limit, mu, lambda_log: lambda, spf }
}

fn small_primes(bound: u64) -> Vec<u64> {
    let t = linear(bound.max(2));
    (2..=bound).filter(|&i| t.spf[i as usize] as u64 == i).collect()
}

pub(crate) fn segmented(limit: u64, seg_len: u64) -> SieveTable {
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut mu = vec![0i8; n + 1];
    let mut lambda = vec![0f64; n + 1];
    let root = (limit as f64).sqrt() as u64 + 1;
    let primes = small_primes(root);

    let mut lo = 1u64;
    while lo <= limit {
        let hi = (lo + seg_len).min(limit + 1);
        let len = (hi - lo) as usize;
        let mut rem: Vec<u64> = (lo..hi).collect();
        let mut m = vec![1i8; len];
        let mut sp = vec![0u32; len];
        let mut distinct = vec![0u8; len];
        let mut last = vec![0u64; len];
        for &p in &primes {
            if p >= hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            let mut k = first;
            while k < hi {
                let idx = (k - lo) as usize;
                if sp[idx] == 0 {
                    sp[idx] = p as u32;
                }
                let mut v = 0;
                while rem[idx] % p == 0 {
                    rem[idx] /= p;
                    v += 1;
                }
                m[idx] = if v >= 2 { 0 } else { -m[idx] };
                distinct[idx] += 1;
                last[idx] = p;
                k += p;
            }
        }
        for idx in 0..len {
            let value = lo + idx as u64;
            let i = value as usize;
            if value == 1 {
                spf[1] = 1;
                mu[1] = 1;
                continue;
            }
            if rem[idx] > 1 {
                m[idx] = -m[idx];
                distinct[idx] += 1;
                last[idx] = rem[idx];
                if sp[idx] == 0 {
                    sp[idx] = rem[idx] as u32;
                }
            }
            spf[i] = sp[idx];
            mu[i] = m[idx];
            if distinct[idx] == 1 {
                lambda[i] = (last[idx] as f64).ln();
            }
        }
        lo = hi;
    }
    SieveTable { limit, mu, lambda_log: lambda, spf }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division oracle: (μ(n), Λ(n), spf(n)).
    fn trial(n: u64) -> (i8, f64, u32) {
        if n == 1 {
            return (1, 0.0, 1);
        }
        let mut m = n;
        let mut primes = Vec::new();
        let mut square = false;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                square |= e > 1;
                primes.push(p);
            }
            p += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        let mu = if square { 0 } else if primes.len() % 2 == 0 { 1 } else { -1 };
        let lambda = if primes.len() == 1 { (primes[0] as f64).ln() } else { 0.0 };
        (mu, lambda, primes[0] as u32)
    }

    #[test]
    fn small_table_matches_hand_values() {
        let t = build_sieve(12).unwrap();
        assert_eq!(&t.mu_slice()[1..=10], &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(t.mu(12), 0);
        assert_eq!(t.lambda(8), 2f64.ln());
        assert_eq!(t.lambda(6), 0.0);
        assert_eq!(t.lambda(1), 0.0);
    }

    #[test]
    fn mertens_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(mertens(1, &t).unwrap(), 1);
        assert_eq!(mertens(10, &t).unwrap(), -1);
        // Oracle: direct trial-division μ.
        let oracle: i64 = (1..=100).map(|n| trial(n).0 as i64).sum();
        assert_eq!(oracle, 1);
        assert_eq!(mertens(100, &t).unwrap(), 1);
        assert_eq!(mertens(101, &t), Err(Error::Range { requested: 101, limit: 100 }));
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = build_sieve(10_000).unwrap();
        for n in 1..=10_000u64 {
            let (mu, lambda, spf) = trial(n);
            assert_eq!(t.mu(n), mu, "mu({n})");
            assert_eq!(t.spf(n), spf, "spf({n})");
            assert!((t.lambda(n) - lambda).abs() < 1e-12, "lambda({n})");
        }
    }

    #[test]
    fn segmented_matches_linear() {
        for (limit, seg) in [(1u64, 7u64), (97, 10), (5000, 333), (65_537, 4096)] {
            let a = linear(limit);
            let b = segmented(limit, seg);
            assert_eq!(a, b, "limit {limit} seg {seg}");
        }
    }

    #[test]
    fn caps_and_domain() {
        assert!(matches!(build_sieve(0), Err(Error::Domain(_))));
        assert!(matches!(build_sieve_with_cap(1000, 999), Err(Error::Resource(_))));
    }
}
