//! Twisted sums of μ and Λ: character sums, additive-phase sums, sums over
//! progressions, Dirichlet polynomials and Fourier–Walsh coefficients.
//!
//! A real cutoff `x` means `n ≤ ⌊x⌋`.

use num_complex::Complex;
use serde::Serialize;

use crate::arith::{gcd, SieveTable};
use crate::characters::{DirichletCharacter, UnitGroupStructure};
use crate::error::{domain, Error, Result};
use crate::lfunc::ComplexPoint;
use crate::scalar::{unit_root, KahanSum, Real};
use crate::FactoredModulus;

/// Largest `M + N` accepted by [`dirichlet_poly`] and [`dyadic_block`].
pub const DEFAULT_POLY_CAP: u64 = 1 << 32;

/// Largest `|t|·log n` for which `n^{it}` is evaluated in double precision.
pub const MAX_PHASE: f64 = 1e9;

/// Largest bit length accepted by [`walsh_coefficient`].
pub const MAX_WALSH_BITS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    Mobius,
    Psi,
}

impl SumKind {
    pub fn name(self) -> &'static str {
        match self {
            SumKind::Mobius => "mobius",
            SumKind::Psi => "psi",
        }
    }

    fn weight(self, t: &SieveTable, n: u64) -> f64 {
        match self {
            SumKind::Mobius => t.mu(n) as f64,
            SumKind::Psi => t.lambda(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedSumResult<T> {
    pub value: Complex<T>,
    pub x: T,
    pub character_label: String,
    /// `|value| / x`.
    pub normalized: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxOverCharacters<T> {
    pub value: T,
    /// Character label, or the residue `a` for additive and progression maxima.
    pub argmax_label: String,
    pub q: u64,
    pub x: T,
}

impl<T: Real> MaxOverCharacters<T> {
    pub fn normalized(&self) -> T {
        self.value / self.x
    }
}

/// `⌊x⌋` for a nonnegative finite cutoff.
pub fn floor_cutoff<T: Real>(x: T) -> Result<u64> {
    if !x.is_finite() || x < T::zero() {
        return domain(format!("cutoff must be finite and nonnegative, got {x}"));
    }
    x.floor()
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("cutoff {x} out of range")))
}

fn twisted<T: Real>(kind: SumKind, x: T, chi: &DirichletCharacter, t: &SieveTable) -> Result<TwistedSumResult<T>> {
    let n_max = floor_cutoff(x)?;
    t.check(n_max)?;
    let q = chi.modulus();
    let table = chi.value_table::<T>();
    let mut acc = KahanSum::new();
    for n in 1..=n_max {
        let w = kind.weight(t, n);
        if w != 0.0 {
            acc.add(table[(n % q) as usize] * T::lit(w));
        }
    }
    let value = acc.value();
    Ok(TwistedSumResult { value, x, character_label: chi.label(), normalized: value.norm() / x })
}

/// `M(x, χ) = Σ_{n≤x} μ(n) χ(n)`.
pub fn mobius_sum<T: Real>(x: T, chi: &DirichletCharacter, t: &SieveTable) -> Result<TwistedSumResult<T>> {
    twisted(SumKind::Mobius, x, chi, t)
}

/// `ψ(x, χ) = Σ_{n≤x} Λ(n) χ(n)`.
pub fn psi_sum<T: Real>(x: T, chi: &DirichletCharacter, t: &SieveTable) -> Result<TwistedSumResult<T>> {
    twisted(SumKind::Psi, x, chi, t)
}

pub fn twisted_sum<T: Real>(
    kind: SumKind,
    x: T,
    chi: &DirichletCharacter,
    t: &SieveTable,
) -> Result<TwistedSumResult<T>> {
    twisted(kind, x, chi, t)
}

/// Weighted residue-class totals `R[r] = Σ_{n≤x, n≡r} w(n)` snapshotted at
/// each cutoff, in one pass over `n`.
fn residue_buckets<T: Real>(kind: SumKind, q: u64, cutoffs: &[u64], t: &SieveTable) -> Vec<Vec<T>> {
    let mut buckets = vec![KahanSum::<T>::new(); q as usize];
    let mut out = Vec::with_capacity(cutoffs.len());
    let mut n = 1u64;
    for &c in cutoffs {
        while n <= c {
            let w = kind.weight(t, n);
            if w != 0.0 {
                buckets[(n % q) as usize].add_real(T::lit(w));
            }
            n += 1;
        }
        out.push(buckets.iter().map(|b| b.value().re).collect());
    }
    out
}

fn max_from_buckets<T: Real>(
    structure: &std::sync::Arc<UnitGroupStructure>,
    tables: &[(String, Vec<Complex<T>>)],
    buckets: &[T],
    x: T,
) -> MaxOverCharacters<T> {
    let mut best: Option<(T, &str)> = None;
    for (label, table) in tables {
        let mut acc = KahanSum::new();
        for (r, &w) in buckets.iter().enumerate() {
            if w != T::zero() {
                acc.add(table[r] * w);
            }
        }
        let v = acc.value().norm();
        // Conjugate characters give equal |sums| up to rounding; keep the first.
        let tol = T::lit(1e-12) * (T::one() + v);
        if best.is_none_or(|(b, _)| v > b + tol) {
            best = Some((v, label));
        }
    }
    let (value, label) = best.expect("at least the principal character");
    MaxOverCharacters { value, argmax_label: label.to_string(), q: structure.q(), x }
}

fn character_tables<T: Real>(structure: &std::sync::Arc<UnitGroupStructure>) -> Vec<(String, Vec<Complex<T>>)> {
    structure.characters().map(|c| (c.label(), c.value_table::<T>())).collect()
}

/// `max_χ |Σ_{n≤x} w(n) χ(n)|` with the first maximizing character in
/// enumeration order.
pub fn max_over_characters<T: Real>(
    x: T,
    q: &FactoredModulus,
    kind: SumKind,
    t: &SieveTable,
) -> Result<MaxOverCharacters<T>> {
    Ok(max_over_characters_multi(&[x], q, kind, t)?.remove(0))
}

/// [`max_over_characters`] at several increasing cutoffs in one sweep.
pub fn max_over_characters_multi<T: Real>(
    xs: &[T],
    q: &FactoredModulus,
    kind: SumKind,
    t: &SieveTable,
) -> Result<Vec<MaxOverCharacters<T>>> {
    let cutoffs = xs.iter().map(|&x| floor_cutoff(x)).collect::<Result<Vec<_>>>()?;
    if cutoffs.windows(2).any(|w| w[0] > w[1]) {
        return domain("cutoffs must be nondecreasing");
    }
    if let Some(&last) = cutoffs.last() {
        t.check(last)?;
    }
    let structure = UnitGroupStructure::build(q)?;
    let tables = character_tables::<T>(&structure);
    let snaps = residue_buckets::<T>(kind, q.q(), &cutoffs, t);
    Ok(snaps
        .iter()
        .zip(xs)
        .map(|(b, &x)| max_from_buckets(&structure, &tables, b, x))
        .collect())
}

fn check_modulus(q: u64) -> Result<()> {
    if q == 0 {
        domain("modulus must be positive")
    } else {
        Ok(())
    }
}

/// `S_q(x, a) = Σ_{n≤x} μ(n) e(an/q)`.
pub fn exp_sum<T: Real>(x: T, q: u64, a: i64, t: &SieveTable) -> Result<Complex<T>> {
    check_modulus(q)?;
    let n_max = floor_cutoff(x)?;
    t.check(n_max)?;
    let a = a.rem_euclid(q as i64) as u64;
    let roots: Vec<Complex<T>> = (0..q).map(|r| unit_root(r, q)).collect();
    let mut acc = KahanSum::new();
    let mut phase = 0u64;
    for n in 1..=n_max {
        phase = (phase + a) % q;
        let m = t.mu(n);
        if m != 0 {
            acc.add(roots[phase as usize] * T::lit(m as f64));
        }
    }
    Ok(acc.value())
}

/// `D_q(x, a) = Σ_{n≤x, n≡a (q)} μ(n)`.
pub fn progression_sum<T: Real>(x: T, q: u64, a: i64, t: &SieveTable) -> Result<i64> {
    check_modulus(q)?;
    let n_max = floor_cutoff(x)?;
    t.check(n_max)?;
    let r = a.rem_euclid(q as i64) as u64;
    let start = if r == 0 { q } else { r };
    Ok((start..=n_max).step_by(q as usize).map(|n| t.mu(n) as i64).sum())
}

/// `D_q(x, b)` for every residue `b mod q`.
pub fn progression_sums<T: Real>(x: T, q: u64, t: &SieveTable) -> Result<Vec<i64>> {
    check_modulus(q)?;
    let n_max = floor_cutoff(x)?;
    t.check(n_max)?;
    let mut d = vec![0i64; q as usize];
    for n in 1..=n_max {
        d[(n % q) as usize] += t.mu(n) as i64;
    }
    Ok(d)
}

fn first_max<T: Real>(items: impl Iterator<Item = (u64, T)>, q: u64, x: T) -> MaxOverCharacters<T> {
    let mut best: Option<(u64, T)> = None;
    for (a, v) in items {
        let tol = T::lit(1e-12) * (T::one() + v);
        if best.is_none_or(|(_, b)| v > b + tol) {
            best = Some((a, v));
        }
    }
    let (a, value) = best.expect("nonempty residue set");
    MaxOverCharacters { value, argmax_label: a.to_string(), q, x }
}

/// `Ŝ_q(x) = max_a |S_q(x, a)|`, via `S_q(x,a) = Σ_b e(ab/q) D_q(x,b)`.
pub fn max_exp_sum<T: Real>(x: T, q: u64, t: &SieveTable) -> Result<MaxOverCharacters<T>> {
    let d = progression_sums(x, q, t)?;
    let roots: Vec<Complex<T>> = (0..q).map(|r| unit_root(r, q)).collect();
    let values = (0..q).map(|a| {
        let mut acc = KahanSum::new();
        for (b, &db) in d.iter().enumerate() {
            if db != 0 {
                let k = ((a as u128 * b as u128) % q as u128) as usize;
                acc.add(roots[k] * T::lit(db as f64));
            }
        }
        (a, acc.value().norm())
    });
    Ok(first_max(values, q, x))
}

/// `D̂_q(x) = max_{gcd(a,q)=1} |D_q(x, a)|`.
pub fn max_progression_sum<T: Real>(x: T, q: u64, t: &SieveTable) -> Result<MaxOverCharacters<T>> {
    let d = progression_sums(x, q, t)?;
    let values = (0..q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| (a, T::lit(d[a as usize].unsigned_abs() as f64)));
    Ok(first_max(values, q, x))
}

fn poly_range<T: Real>(lo: T, hi: T, cap: u64) -> Result<(u64, u64)> {
    if !(hi <= T::of_u64(cap)) {
        return Err(Error::Resource(format!("summation range end {hi} exceeds cap {cap}")));
    }
    Ok((floor_cutoff(lo)? + 1, floor_cutoff(hi)?))
}

fn check_phase<T: Real>(t: T, n_max: u64) -> Result<()> {
    let phase = t.abs() * T::of_u64(n_max.max(1)).ln();
    if phase > T::lit(MAX_PHASE) {
        return domain(format!("|t|·log n = {phase} exceeds {MAX_PHASE:e}"));
    }
    Ok(())
}

/// `T_χ(M, N; t) = Σ_{M<n≤M+N} χ(n) n^{it}`.
pub fn dirichlet_poly<T: Real>(m: T, n: T, t: T, chi: &DirichletCharacter) -> Result<Complex<T>> {
    dirichlet_poly_with_cap(m, n, t, chi, DEFAULT_POLY_CAP)
}

pub fn dirichlet_poly_with_cap<T: Real>(
    m: T,
    n: T,
    t: T,
    chi: &DirichletCharacter,
    cap: u64,
) -> Result<Complex<T>> {
    if !(m >= T::zero()) || !(n >= T::one()) {
        return domain(format!("need M ≥ 0 and N ≥ 1, got M={m}, N={n}"));
    }
    let (lo, hi) = poly_range(m, m + n, cap)?;
    check_phase(t, hi)?;
    let q = chi.modulus();
    let table = chi.value_table::<T>();
    let mut acc = KahanSum::new();
    for k in lo..=hi {
        let c = table[(k % q) as usize];
        if c.re != T::zero() || c.im != T::zero() {
            acc.add(c * Complex::from_polar(T::one(), t * T::of_u64(k).ln()));
        }
    }
    Ok(acc.value())
}

/// `U_χ(M) = Σ_{M<n≤2M} χ(n) n^{−s}`.
pub fn dyadic_block<T: Real>(m: T, s: ComplexPoint<T>, chi: &DirichletCharacter) -> Result<Complex<T>> {
    dyadic_block_with_cap(m, s, chi, DEFAULT_POLY_CAP)
}

pub fn dyadic_block_with_cap<T: Real>(
    m: T,
    s: ComplexPoint<T>,
    chi: &DirichletCharacter,
    cap: u64,
) -> Result<Complex<T>> {
    if !(m >= T::zero()) {
        return domain(format!("need M ≥ 0, got {m}"));
    }
    let (lo, hi) = poly_range(m, m + m, cap)?;
    check_phase(s.t, hi)?;
    let q = chi.modulus();
    let table = chi.value_table::<T>();
    let mut acc = KahanSum::new();
    for k in lo..=hi {
        let c = table[(k % q) as usize];
        if c.re != T::zero() || c.im != T::zero() {
            let ln = T::of_u64(k).ln();
            acc.add(c * Complex::from_polar((-s.sigma * ln).exp(), -s.t * ln));
        }
    }
    Ok(acc.value())
}

/// `μ̂_n(A) = Σ_{0≤m<2^n} μ(m) (−1)^{popcount(m ∧ A)}` with `μ(0) = 0`.
/// Bit `j` of `mask` marks `j ∈ A`.
pub fn walsh_coefficient(n: u32, mask: u64, t: &SieveTable) -> Result<i64> {
    walsh_coefficient_with(n, mask, t, 0)
}

/// As [`walsh_coefficient`] with an explicit value for `μ(0)`.
pub fn walsh_coefficient_with(n: u32, mask: u64, t: &SieveTable, mu_zero: i8) -> Result<i64> {
    if n > MAX_WALSH_BITS {
        return Err(Error::Resource(format!("n = {n} exceeds {MAX_WALSH_BITS}")));
    }
    if n < 64 && mask >> n != 0 {
        return domain(format!("mask {mask:#x} has bits outside 0..{n}"));
    }
    let top = (1u64 << n) - 1;
    t.check(top)?;
    let sign = |m: u64| if (m & mask).count_ones() % 2 == 0 { 1 } else { -1 };
    let mut total = mu_zero as i64 * sign(0);
    for m in 1..=top {
        total += t.mu(m) as i64 * sign(m);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_sieve;
    use crate::characters::DirichletCharacter;

    fn chars(q: u64) -> Vec<DirichletCharacter> {
        UnitGroupStructure::for_modulus(q).unwrap().characters().collect()
    }

    #[test]
    fn mobius_examples() {
        let t = build_sieve(100).unwrap();
        let one = &chars(1)[0];
        assert_eq!(mobius_sum(10.0, one, &t).unwrap().value.re, -1.0);
        assert_eq!(mobius_sum(10.9, one, &t).unwrap().value.re, -1.0);
        for c in chars(12) {
            assert_eq!(mobius_sum(1.0, &c, &t).unwrap().value, Complex::new(1.0, 0.0));
        }
        // χ mod 4 nontrivial: odd n ≤ 20 brute force
        let chi4 = chars(4).into_iter().find(|c| !c.is_principal()).unwrap();
        let mu = [0i64, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0];
        let want: i64 = (1..=20)
            .filter(|n| n % 2 == 1)
            .map(|n| mu[n] * if n % 4 == 1 { 1 } else { -1 })
            .sum();
        let got = mobius_sum(20.0, &chi4, &t).unwrap();
        assert_eq!(got.value, Complex::new(want as f64, 0.0));
        assert!(mobius_sum(101.0, one, &t).is_err());
    }

    #[test]
    fn psi_examples() {
        let t = build_sieve(20).unwrap();
        let one = &chars(1)[0];
        let want = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((psi_sum(10.0, one, &t).unwrap().value.re - want).abs() < 1e-12);
        assert_eq!(psi_sum(1.0, one, &t).unwrap().value.re, 0.0);
        let two = &chars(2)[0];
        let got = psi_sum(10.0, two, &t).unwrap().value.re;
        assert!((got - (want - 3.0 * 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn max_examples() {
        let t = build_sieve(100).unwrap();
        let m2 = max_over_characters(10.0, &crate::factor(2).unwrap(), SumKind::Mobius, &t).unwrap();
        // odd n ≤ 10: 1 − 1 − 1 − 1 + 0 (μ(9) = 0)
        assert_eq!(m2.value, 2.0);
        let m1 = max_over_characters(10.0, &FactoredModulus::one(), SumKind::Mobius, &t).unwrap();
        assert_eq!(m1.value, 1.0);
        for q in [3u64, 8, 15] {
            let m = max_over_characters(1.0f64, &crate::factor(q).unwrap(), SumKind::Mobius, &t).unwrap();
            assert!((m.value - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn max_matches_individual_sums() {
        let t = build_sieve(5000).unwrap();
        for q in [5u64, 8, 12, 16, 21] {
            let fq = crate::factor(q).unwrap();
            for kind in [SumKind::Mobius, SumKind::Psi] {
                let m = max_over_characters(4321.0, &fq, kind, &t).unwrap();
                let direct = chars(q)
                    .iter()
                    .map(|c| twisted_sum(kind, 4321.0, c, &t).unwrap().value.norm())
                    .fold(0.0, f64::max);
                assert!((m.value - direct).abs() < 1e-9 * (1.0 + direct), "q={q}");
            }
        }
    }

    #[test]
    fn multi_cutoff_matches_single() {
        let t = build_sieve(3000).unwrap();
        let fq = crate::factor(16).unwrap();
        let xs = [10.0, 100.0, 1000.0, 3000.0];
        let multi = max_over_characters_multi(&xs, &fq, SumKind::Mobius, &t).unwrap();
        for (x, m) in xs.iter().zip(&multi) {
            let single = max_over_characters(*x, &fq, SumKind::Mobius, &t).unwrap();
            assert_eq!(&single, m);
        }
        assert!(max_over_characters_multi(&[10.0, 5.0], &fq, SumKind::Mobius, &t).is_err());
    }

    #[test]
    fn exp_and_progression_examples() {
        let t = build_sieve(100).unwrap();
        let mertens = |x: u64| crate::arith::mertens(x, &t).unwrap();
        assert_eq!(exp_sum(57.0, 7, 0, &t).unwrap(), Complex::new(mertens(57) as f64, 0.0));
        let s = exp_sum(10.0, 2, 1, &t).unwrap();
        assert!((s - Complex::new(3.0, 0.0)).norm() < 1e-12);
        let s = exp_sum(80.0, 9, 2, &t).unwrap();
        let s_neg = exp_sum(80.0, 9, -2, &t).unwrap();
        assert!((s - s_neg.conj()).norm() < 1e-12);

        assert_eq!(progression_sum(37.0, 1, 0, &t).unwrap(), mertens(37));
        assert_eq!(progression_sum(20.0, 4, 1, &t).unwrap(), -2);
        for q in 1..=12u64 {
            let total: i64 = (0..q as i64).map(|a| progression_sum(99.0, q, a, &t).unwrap()).sum();
            assert_eq!(total, mertens(99));
        }
    }

    #[test]
    fn max_additive_examples() {
        let t = build_sieve(100).unwrap();
        let m = max_exp_sum(10.0f64, 2, &t).unwrap();
        assert!((m.value - 3.0).abs() < 1e-12);
        assert_eq!(m.argmax_label, "1");
        assert_eq!(max_exp_sum(10.0, 1, &t).unwrap().value, 1.0);
        assert_eq!(max_progression_sum(10.0, 1, &t).unwrap().value, 1.0);
        for q in 1..=20u64 {
            assert!(max_exp_sum(100.0, q, &t).unwrap().value <= 100.0);
        }
    }

    #[test]
    fn dirichlet_poly_examples() {
        for c in chars(15) {
            let p = dirichlet_poly(3.0, 40.0, 0.0, &c).unwrap();
            let direct: Complex<f64> = (4..=43).map(|n| c.eval::<f64>(n)).sum();
            assert!((p - direct).norm() < 1e-12);
            if !c.is_principal() {
                assert!(dirichlet_poly(0.0, 15.0, 0.0, &c).unwrap().norm() < 1e-12);
            }
            assert!(dirichlet_poly(10.0, 50.0, 7.3, &c).unwrap().norm() <= 50.0);
        }
        let c = &chars(1)[0];
        assert!(matches!(dirichlet_poly_with_cap(10.0, 100.0, 0.0, c, 50), Err(Error::Resource(_))));
        assert!(dirichlet_poly(0.0, 10.0, 1e10, c).is_err());
    }

    #[test]
    fn dyadic_examples() {
        let one = &chars(1)[0];
        let v = dyadic_block(1.0, ComplexPoint::new(2.0, 0.0), one).unwrap();
        assert!((v - Complex::new(0.25, 0.0)).norm() < 1e-15);
        for c in chars(7) {
            let a = dyadic_block(17.0, ComplexPoint::new(0.0, 0.0), &c).unwrap();
            let b = dirichlet_poly(17.0, 17.0, 0.0, &c).unwrap();
            assert!((a - b).norm() < 1e-12);
            let s = ComplexPoint::new(0.6, -3.0);
            let bound: f64 = (18..=34).map(|n| (n as f64).powf(-0.6)).sum();
            assert!(dyadic_block(17.0, s, &c).unwrap().norm() <= bound + 1e-12);
        }
    }

    #[test]
    fn walsh_examples() {
        let t = build_sieve(1 << 12).unwrap();
        assert_eq!(walsh_coefficient(3, 0, &t).unwrap(), -2);
        assert_eq!(walsh_coefficient(1, 1, &t).unwrap(), -1);
        assert_eq!(walsh_coefficient_with(1, 1, &t, 1).unwrap(), 0);
        assert!(matches!(walsh_coefficient(31, 0, &t), Err(Error::Resource(_))));
        assert!(walsh_coefficient(3, 0b1000, &t).is_err());
        assert!(matches!(walsh_coefficient(13, 0, &t), Err(Error::Range { .. })));
    }
}
