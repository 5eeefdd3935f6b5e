//! Integer arithmetic: factorization, valuations, and the powerful-modulus
//! admissibility test. Sieves for μ and Λ live in [`sieve`].

pub mod cache;
pub mod sieve;

use std::fmt;

use crate::error::{domain, Result};

pub use sieve::{build_sieve, build_sieve_with_cap, mertens, SieveTable, DEFAULT_SIEVE_CAP};

/// Default for the valuation threshold `γ₀`.
pub const DEFAULT_GAMMA0: u32 = 10;

/// A modulus together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredModulus {
    q: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredModulus {
    /// The trivial modulus 1 (empty factorization). Only characters need it;
    /// [`factor`] rejects `q < 2`.
    pub fn one() -> Self {
        Self { q: 1, factors: Vec::new() }
    }

    /// Builds from a known factorization, checking primality of each base.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut q: u64 = 1;
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return domain(format!("repeated prime {}", w[0].0));
            }
        }
        for &(p, e) in &factors {
            if e == 0 || !is_prime(p) {
                return domain(format!("invalid prime power {p}^{e}"));
            }
            let pe = p
                .checked_pow(e)
                .ok_or_else(|| crate::Error::Domain("modulus overflows u64".into()))?;
            q = q
                .checked_mul(pe)
                .ok_or_else(|| crate::Error::Domain("modulus overflows u64".into()))?;
        }
        Ok(Self { q, factors })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `(p, v_p(q))` in increasing order of `p`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Largest exponent `γ`.
    pub fn gamma(&self) -> u32 {
        self.factors.iter().map(|f| f.1).max().unwrap_or(0)
    }

    /// Smallest exponent.
    pub fn gamma_min(&self) -> u32 {
        self.factors.iter().map(|f| f.1).min().unwrap_or(0)
    }

    /// Product of the distinct primes dividing `q`.
    pub fn core(&self) -> u64 {
        self.factors.iter().map(|f| f.0).product()
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Prime powers `p^e` dividing `q` exactly.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }

    pub fn divides(&self, n: u64) -> bool {
        n % self.q == 0
    }
}

impl fmt::Display for FactoredModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Complete factorization by trial division.
pub fn factor(q: u64) -> Result<FactoredModulus> {
    if q < 2 {
        return domain(format!("cannot factor {q}: modulus must be at least 2"));
    }
    let mut n = q;
    let mut factors = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Ok(FactoredModulus { q, factors })
}

/// `min_p v_p(q) ≥ 0.7·γ` (tested as `10·γ_min ≥ 7·γ`) and `γ ≥ γ₀`.
pub fn is_admissible(m: &FactoredModulus, gamma0: u32) -> bool {
    let (g, gmin) = (m.gamma() as u64, m.gamma_min() as u64);
    !m.factors.is_empty() && 10 * gmin >= 7 * g && g >= gamma0 as u64
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Multiplicative inverse modulo `m` when it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        let m = factor(8).unwrap();
        assert_eq!(m.factors(), &[(2, 3)]);
        assert_eq!((m.gamma(), m.core()), (3, 2));

        let m = factor(72).unwrap();
        assert_eq!(m.factors(), &[(2, 3), (3, 2)]);
        assert_eq!((m.gamma(), m.gamma_min(), m.core()), (3, 2, 6));

        assert!(matches!(factor(1), Err(crate::Error::Domain(_))));
        assert!(factor(0).is_err());
    }

    #[test]
    fn factorization_invariants() {
        for q in 2..5000u64 {
            let m = factor(q).unwrap();
            let prod: u64 = m.prime_powers().product();
            assert_eq!(prod, q);
            assert_eq!(q % m.core(), 0);
            for &(p, _) in m.factors() {
                assert!(is_prime(p));
                assert_ne!(m.core() % (p * p), 0);
            }
            assert_eq!(m.gamma(), m.factors().iter().map(|f| f.1).max().unwrap());
        }
        assert_eq!(factor(2u64.pow(61) - 1).unwrap().factors(), &[(2u64.pow(61) - 1, 1)]);
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&factor(1 << 20).unwrap(), 10));
        let q = 2u64.pow(10) * 3u64.pow(6);
        assert!(!is_admissible(&factor(q).unwrap(), 5));
        let q = 2u64.pow(10) * 3u64.pow(7);
        assert!(is_admissible(&factor(q).unwrap(), 5));
        assert!(!is_admissible(&factor(1 << 9).unwrap(), 10));
    }

    #[test]
    fn admissibility_monotone_in_gamma0() {
        for q in 2..3000u64 {
            let m = factor(q).unwrap();
            for g0 in 1..12 {
                if is_admissible(&m, g0) {
                    assert!((0..g0).all(|lower| is_admissible(&m, lower)));
                }
            }
        }
    }

    #[test]
    fn from_factors_rejects_composites() {
        assert!(FactoredModulus::from_factors(vec![(4, 2)]).is_err());
        let m = FactoredModulus::from_factors(vec![(3, 7), (2, 10)]).unwrap();
        assert_eq!(m.q(), 1024 * 2187);
        assert_eq!(m.factors()[0], (2, 10));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 8), None);
        assert_eq!(valuation(72, 2), 3);
        assert_eq!(factor(2187).unwrap().euler_phi(), 1458);
    }
}
