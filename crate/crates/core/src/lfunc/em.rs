//! Euler–Maclaurin evaluation of `Σ_n c(n) n^{−s}` for `q`-periodic `c`,
//! through `Σ_a c(a) Σ_{m≥0} (a + mq)^{−s}`, with the `s`-derivative.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Real};

/// `B_{2k}` for `k = 1..=15`, as numerator/denominator.
const BERNOULLI_2K: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// `2ζ(4)`, bounding `2ζ(2M)` for `M ≥ 2`.
const TWO_ZETA4: f64 = 2.0 * 1.082_323_233_711_138_2;

const ORDERS: [usize; 4] = [3, 6, 10, 15];

/// `B_{2k}/(2k)!`.
pub(crate) fn bernoulli_coeff(k: usize) -> f64 {
    let (n, d) = BERNOULLI_2K[k - 1];
    let fact: f64 = (1..=2 * k).map(|i| i as f64).product();
    n / d / fact
}

/// Periodic coefficients `c(n) = table[n mod q]`.
#[derive(Debug, Clone)]
pub(crate) struct Periodic<T> {
    pub q: u64,
    pub table: Vec<Complex<T>>,
    /// `Σ_a c(a) = 0`: the pole at `s = 1` cancels.
    pub balanced: bool,
    pub support: usize,
}

impl<T: Real> Periodic<T> {
    pub fn new(table: Vec<Complex<T>>, balanced: bool) -> Self {
        let support = table.iter().filter(|c| !is_zero(**c)).count();
        Self { q: table.len() as u64, table, balanced, support }
    }
}

#[inline]
pub(crate) fn is_zero<T: Real>(z: Complex<T>) -> bool {
    z.re == T::zero() && z.im == T::zero()
}

/// `n^{−s}` from `log n`.
#[inline]
pub(crate) fn pow_neg<T: Real>(s: Complex<T>, ln_n: T) -> Complex<T> {
    Complex::from_polar((-s.re * ln_n).exp(), -s.im * ln_n)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct EmOutput<T> {
    pub value: Complex<T>,
    pub deriv: Complex<T>,
    pub err: T,
    pub deriv_err: T,
    pub terms: u64,
}

/// `(e^z − 1)/z` and its derivative.
fn phi1<T: Real>(z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    if z.norm() < T::lit(0.5) {
        let mut v = Complex::new(T::zero(), T::zero());
        let mut d = v;
        let mut zk = one; // z^k
        let mut fact = T::one(); // (k+1)!
        for k in 0..28u32 {
            fact *= T::lit((k + 1) as f64);
            v += zk / fact;
            if k + 2 <= 28 {
                // derivative term (k+1) z^k / (k+2)!
                d += zk * T::lit((k + 1) as f64) / (fact * T::lit((k + 2) as f64));
            }
            zk *= z;
        }
        (v, d)
    } else {
        let e = z.exp();
        ((e - one) / z, (e * (z - one) + one) / (z * z))
    }
}

/// Remainder bounds for the value and derivative after `n` full periods
/// and `m` Bernoulli corrections.
pub(crate) fn em_bounds<T: Real>(s: Complex<T>, q: u64, support: usize, n: u64, m: usize) -> (T, T) {
    let lit = T::lit;
    let two_m = 2 * m;
    let p1 = s.re + lit(two_m as f64) - T::one();
    let mut ln_poch = T::zero();
    let mut inv_sum = T::zero();
    for i in 0..two_m {
        let a = (s + lit(i as f64)).norm();
        ln_poch += a.ln();
        inv_sum += T::one() / a;
    }
    let w = T::of_u64(n) * T::of_u64(q) + T::one();
    let ln_w = w.ln();
    let ln_per = lit(TWO_ZETA4).ln() - lit(two_m as f64) * T::TAU().ln()
        + ln_poch
        + lit((two_m - 1) as f64) * T::of_u64(q).ln()
        + (T::one() - s.re - lit(two_m as f64)) * ln_w
        - p1.ln();
    let err = lit(support as f64) * ln_per.exp();
    (err, err * (inv_sum + ln_w + T::one() / p1))
}

pub(crate) fn em_eval<T: Real>(s: Complex<T>, c: &Periodic<T>, n: u64, m: usize) -> EmOutput<T> {
    let q = c.q;
    let lit = T::lit;
    let one = Complex::new(T::one(), T::zero());
    let mut val = KahanSum::new();
    let mut der = KahanSum::new();
    for k in 1..=n * q {
        let ch = c.table[(k % q) as usize];
        if is_zero(ch) {
            continue;
        }
        let ln_k = T::of_u64(k).ln();
        let term = ch * pow_neg(s, ln_k);
        val.add(term);
        der.add(term * (-ln_k));
    }

    let nq = T::of_u64(n) * T::of_u64(q);
    let (mut s1, mut s2) = (KahanSum::new(), KahanSum::new());
    let coeffs: Vec<T> = (1..=m).map(|k| lit(bernoulli_coeff(k))).collect();
    for a in 1..=q {
        let ch = c.table[(a % q) as usize];
        if is_zero(ch) {
            continue;
        }
        let w = T::of_u64(a) + nq;
        let ln_w = w.ln();
        let ws = pow_neg(s, ln_w);

        let mut v = ws * lit(0.5);
        let mut d = ws * (lit(-0.5) * ln_w);

        let g = T::of_u64(q) / w;
        let mut poch = s;
        let mut inv = one / s;
        let mut gp = g;
        for (k, &ck) in coeffs.iter().enumerate() {
            let term = poch * ws * (ck * gp);
            v += term;
            d += term * (inv - ln_w);
            let (a1, a2) = (s + lit((2 * k + 1) as f64), s + lit((2 * k + 2) as f64));
            poch = poch * a1 * a2;
            inv = inv + one / a1 + one / a2;
            gp *= g * g;
        }

        if c.balanced {
            let da = (T::of_u64(a) / nq).ln_1p();
            let (f, fd) = phi1((one - s) * da);
            s1.add(ch * f * da);
            s2.add(ch * fd * (da * da));
        } else {
            let sm1 = s - one;
            let integral = ws * w / (sm1 * T::of_u64(q));
            v += integral;
            d += integral * (-ln_w) - integral / sm1;
        }
        val.add(ch * v);
        der.add(ch * d);
    }
    if c.balanced {
        let l0 = nq.ln();
        let e0 = ((one - s) * l0).exp();
        let qf = T::of_u64(q);
        let (s1, s2) = (s1.value(), s2.value());
        val.add(-(e0 * s1) / qf);
        der.add(e0 * (s1 * l0 + s2) / qf);
    }
    let (err, deriv_err) = em_bounds(s, q, c.support, n, m);
    EmOutput { value: val.value(), deriv: der.value(), err, deriv_err, terms: n * q }
}

/// Smallest `n` (over a few correction orders) meeting `target` for both the
/// value and the derivative.
pub(crate) fn em_choose<T: Real>(s: Complex<T>, c: &Periodic<T>, target: T, cap: u64) -> Result<(u64, usize)> {
    let max_n = (cap / c.q).max(1);
    let ok = |n: u64, m: usize| {
        let (e, d) = em_bounds(s, c.q, c.support, n, m);
        e <= target && d <= target
    };
    let mut best: Option<(u64, usize)> = None;
    for &m in &ORDERS {
        if !(s.re + T::lit((2 * m) as f64) - T::one() > T::zero()) {
            continue;
        }
        let mut hi = 1u64;
        while !ok(hi, m) {
            if hi >= max_n {
                hi = 0;
                break;
            }
            hi = (hi * 2).min(max_n);
        }
        if hi == 0 {
            continue;
        }
        let mut lo = hi / 2;
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if ok(mid, m) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if best.is_none_or(|(n, _)| hi < n) {
            best = Some((hi, m));
        }
    }
    best.ok_or_else(|| {
        Error::Precision(format!("Euler–Maclaurin cannot reach {target} within {cap} terms"))
    })
}

pub(crate) fn em_auto<T: Real>(s: Complex<T>, c: &Periodic<T>, target: T, cap: u64) -> Result<EmOutput<T>> {
    let (n, m) = em_choose(s, c, target, cap)?;
    Ok(em_eval(s, c, n, m))
}
