//! Dirichlet characters modulo `q`.
//!
//! `(Z/q)^*` is decomposed over the prime powers of `q`. An odd prime power
//! `p^e` contributes one cyclic slot generated by its smallest primitive root;
//! `4` contributes `−1` of order 2; `2^e` with `e ≥ 3` contributes `−1` (order 2)
//! and `5` (order `2^{e−2}`); `2` contributes nothing. A character is a tuple of
//! exponents, one per slot, and `χ(g_i) = e(e_i / d_i)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_integer::Integer;

use crate::arith::{factor, gcd, pow_mod, valuation, FactoredModulus};
use crate::error::{domain, Error, Result};
use crate::scalar::{unit_root, Real};

/// Largest modulus whose discrete-log tables are built by default.
pub const DEFAULT_STRUCTURE_CAP: u64 = 10_000_000;

const NOT_UNIT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
struct PrimePowerBlock {
    p: u64,
    e: u32,
    pe: u64,
    /// Index of this block's first slot in the flat slot list.
    first_slot: usize,
    /// Residue mod `p^e` → packed exponents (see `unpack`), or `NOT_UNIT`.
    dlog: Vec<u32>,
}

impl PrimePowerBlock {
    fn slot_count(&self) -> usize {
        match (self.p, self.e) {
            (2, 1) => 0,
            (2, 2) => 1,
            (2, _) => 2,
            _ => 1,
        }
    }

    /// Exponents of `r mod p^e` against this block's generators.
    fn unpack(&self, r: u64) -> Option<(u64, u64)> {
        let packed = self.dlog[(r % self.pe) as usize];
        if packed == NOT_UNIT {
            return None;
        }
        if self.p == 2 && self.e >= 3 {
            let half = 1u64 << (self.e - 2);
            Some(((packed as u64) / half, (packed as u64) % half))
        } else {
            Some((packed as u64, 0))
        }
    }
}

/// One cyclic factor of `(Z/q)^*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSlot {
    /// Generator as a residue mod `q` (≡ 1 modulo the other prime powers).
    pub generator: u64,
    /// Generator modulo its own prime power.
    pub local_generator: u64,
    pub order: u64,
    pub prime: u64,
}

/// Generators and discrete-log tables for `(Z/q)^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupStructure {
    modulus: FactoredModulus,
    blocks: Vec<PrimePowerBlock>,
    slots: Vec<GeneratorSlot>,
    /// Exponent of the group: lcm of slot orders.
    exponent: u64,
}

impl UnitGroupStructure {
    pub fn build(m: &FactoredModulus) -> Result<Arc<Self>> {
        Self::build_with_cap(m, DEFAULT_STRUCTURE_CAP)
    }

    /// Convenience: factor `q` (allowing `q = 1`) and build.
    pub fn for_modulus(q: u64) -> Result<Arc<Self>> {
        match q {
            0 => domain("modulus must be positive"),
            1 => Self::build(&FactoredModulus::one()),
            _ => Self::build(&factor(q)?),
        }
    }

    pub fn build_with_cap(m: &FactoredModulus, cap: u64) -> Result<Arc<Self>> {
        if m.q() > cap {
            return Err(Error::Resource(format!(
                "modulus {} exceeds structure cap {cap}",
                m.q()
            )));
        }
        let q = m.q();
        let mut blocks = Vec::new();
        let mut slots = Vec::new();
        for &(p, e) in m.factors() {
            let pe = p.pow(e);
            let first_slot = slots.len();
            let lift = |g: u64| crt_lift(g, pe, q);
            let mut dlog = vec![NOT_UNIT; pe as usize];
            if p == 2 {
                match e {
                    1 => dlog[1] = 0,
                    2 => {
                        dlog[1] = 0;
                        dlog[3] = 1;
                        slots.push(GeneratorSlot { generator: lift(3), local_generator: 3, order: 2, prime: 2 });
                    }
                    _ => {
                        let half = 1u64 << (e - 2);
                        let mut r = 1u64;
                        for b in 0..half {
                            dlog[r as usize] = b as u32;
                            dlog[(pe - r) as usize] = (half + b) as u32;
                            r = r * 5 % pe;
                        }
                        slots.push(GeneratorSlot { generator: lift(pe - 1), local_generator: pe - 1, order: 2, prime: 2 });
                        slots.push(GeneratorSlot { generator: lift(5), local_generator: 5, order: half, prime: 2 });
                    }
                }
            } else {
                let order = (p - 1) * p.pow(e - 1);
                let g = smallest_primitive_root(p, e);
                let mut r = 1u64;
                for k in 0..order {
                    dlog[r as usize] = k as u32;
                    r = r * g % pe;
                }
                slots.push(GeneratorSlot { generator: lift(g), local_generator: g, order, prime: p });
            }
            blocks.push(PrimePowerBlock { p, e, pe, first_slot, dlog });
        }
        let exponent = slots.iter().fold(1u64, |acc, s| acc.lcm(&s.order));
        Ok(Arc::new(Self { modulus: m.clone(), blocks, slots, exponent }))
    }

    pub fn modulus(&self) -> &FactoredModulus {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.q()
    }

    pub fn slots(&self) -> &[GeneratorSlot] {
        &self.slots
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Number of units, `φ(q)`.
    pub fn order(&self) -> u64 {
        self.slots.iter().map(|s| s.order).product()
    }

    /// Exponent tuple of `n` against the generators, or `None` for non-units.
    pub fn dlog(&self, n: u64) -> Option<Vec<u64>> {
        let mut out = vec![0; self.slots.len()];
        for b in &self.blocks {
            let (x, y) = b.unpack(n)?;
            match b.slot_count() {
                0 => {}
                1 => out[b.first_slot] = x,
                _ => {
                    out[b.first_slot] = x;
                    out[b.first_slot + 1] = y;
                }
            }
        }
        Some(out)
    }

    /// `Π g_i^{k_i} mod q`.
    pub fn exp(&self, exps: &[u64]) -> u64 {
        let q = self.q();
        self.slots
            .iter()
            .zip(exps)
            .fold(1 % q, |acc, (s, &k)| crate::arith::mul_mod(acc, pow_mod(s.generator, k, q), q))
    }

    /// Characters in lexicographic order of exponent tuples (principal first).
    pub fn characters(self: &Arc<Self>) -> CharacterIter {
        CharacterIter { structure: Arc::clone(self), next: Some(vec![0; self.slots.len()]) }
    }

    pub fn principal(self: &Arc<Self>) -> DirichletCharacter {
        DirichletCharacter::new(self, vec![0; self.slots.len()]).expect("zero exponents are valid")
    }

    /// Parses a `q:e1,…,ek` label against this structure.
    pub fn parse_label(self: &Arc<Self>, label: &str) -> Result<DirichletCharacter> {
        let (q, exps) = label
            .split_once(':')
            .ok_or_else(|| Error::Format(format!("character label {label:?} lacks ':'")))?;
        let q: u64 = q.trim().parse().map_err(|_| Error::Format(format!("bad modulus in {label:?}")))?;
        if q != self.q() {
            return domain(format!("label modulus {q} differs from structure modulus {}", self.q()));
        }
        let exps = parse_exponents(exps)?;
        DirichletCharacter::new(self, exps)
    }
}

/// Parses `"e1,e2,…"` (empty string allowed).
pub fn parse_exponents(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Format(format!("bad exponent {t:?}"))))
        .collect()
}

fn crt_lift(g: u64, pe: u64, q: u64) -> u64 {
    if pe == q {
        return g % q;
    }
    let rest = q / pe;
    // x ≡ g (mod pe), x ≡ 1 (mod rest)
    let inv = crate::arith::inv_mod(rest % pe, pe).expect("coprime factors");
    let t = crate::arith::mul_mod((g + pe - 1) % pe, inv, pe);
    (1 + rest * t) % q
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest generator of `(Z/p^e)^*` for odd `p`.
pub fn smallest_primitive_root(p: u64, e: u32) -> u64 {
    let ps = distinct_prime_factors(p - 1);
    let p2 = p * p;
    (2..p)
        .find(|&g| {
            ps.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1)
                && (e == 1 || pow_mod(g, p - 1, p2) != 1)
        })
        .unwrap_or(1) // p = 2 is never passed; p = 3 finds 2
}

/// Enumerates characters lexicographically in their exponent tuples.
pub struct CharacterIter {
    structure: Arc<UnitGroupStructure>,
    next: Option<Vec<u64>>,
}

impl Iterator for CharacterIter {
    type Item = DirichletCharacter;

    fn next(&mut self) -> Option<DirichletCharacter> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut advanced = false;
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.structure.slots[i].order {
                advanced = true;
                break;
            }
            succ[i] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(DirichletCharacter::new(&self.structure, cur).expect("in range"))
    }
}

/// A Dirichlet character given by exponents against fixed generators.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    structure: Arc<UnitGroupStructure>,
    exponents: Vec<u64>,
    conductor: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.structure.q() == other.structure.q() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn new(structure: &Arc<UnitGroupStructure>, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != structure.slots.len() {
            return domain(format!(
                "expected {} exponents for modulus {}, got {}",
                structure.slots.len(),
                structure.q(),
                exponents.len()
            ));
        }
        if let Some((s, &e)) = structure.slots.iter().zip(&exponents).find(|(s, &e)| e >= s.order) {
            return domain(format!("exponent {e} out of range for generator of order {}", s.order));
        }
        let conductor = conductor_of(structure, &exponents);
        Ok(Self { structure: Arc::clone(structure), exponents, conductor })
    }

    pub fn structure(&self) -> &Arc<UnitGroupStructure> {
        &self.structure
    }

    pub fn modulus(&self) -> u64 {
        self.structure.q()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Real (order ≤ 2) characters.
    pub fn is_real(&self) -> bool {
        self.structure
            .slots
            .iter()
            .zip(&self.exponents)
            .all(|(s, &e)| (2 * e) % s.order == 0)
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .structure
            .slots
            .iter()
            .zip(&self.exponents)
            .map(|(s, &e)| (s.order - e) % s.order)
            .collect();
        Self::new(&self.structure, exps).expect("in range")
    }

    /// Stable label `q:e1,…,ek`.
    pub fn label(&self) -> String {
        let exps: Vec<String> = self.exponents.iter().map(u64::to_string).collect();
        format!("{}:{}", self.modulus(), exps.join(","))
    }

    /// `χ(n) = e(phase(n) / exponent)`; `None` when `gcd(n, q) > 1`.
    pub fn phase(&self, n: u64) -> Option<u64> {
        let st = &self.structure;
        let l = st.exponent;
        let mut acc: u128 = 0;
        for b in &st.blocks {
            let (x, y) = b.unpack(n)?;
            let i = b.first_slot;
            match b.slot_count() {
                0 => {}
                1 => acc += term(self.exponents[i], x, st.slots[i].order, l),
                _ => {
                    acc += term(self.exponents[i], x, st.slots[i].order, l);
                    acc += term(self.exponents[i + 1], y, st.slots[i + 1].order, l);
                }
            }
        }
        Some((acc % l as u128) as u64)
    }

    /// Exact value as `(numerator, denominator)` of the angle in turns.
    pub fn phase_fraction(&self, n: u64) -> Option<(u64, u64)> {
        let num = self.phase(n)?;
        let l = self.structure.exponent;
        let g = gcd(num, l);
        Some((num / g, l / g))
    }

    pub fn eval<T: Real>(&self, n: u64) -> Complex<T> {
        match self.phase(n) {
            Some(k) => unit_root(k, self.structure.exponent),
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn eval_signed<T: Real>(&self, n: i64) -> Complex<T> {
        self.eval(n.rem_euclid(self.modulus() as i64) as u64)
    }

    /// Values on `0..q`, for inner loops that reduce `n mod q`.
    pub fn value_table<T: Real>(&self) -> Vec<Complex<T>> {
        (0..self.modulus()).map(|r| self.eval(r)).collect()
    }

    /// Character modulo `m.q()` induced from `self` (requires `q₀ | q`).
    pub fn induce(&self, target: &Arc<UnitGroupStructure>) -> Result<Self> {
        let q0 = self.modulus();
        let q = target.q();
        if q % q0 != 0 {
            return domain(format!("cannot induce from modulus {q0} to {q}: {q0} does not divide {q}"));
        }
        let l0 = self.structure.exponent;
        let exps = target
            .slots
            .iter()
            .map(|s| {
                let ph = self.phase(s.generator % q0).expect("generator mod q is a unit mod q0");
                let scaled = ph as u128 * s.order as u128;
                debug_assert_eq!(scaled % l0 as u128, 0);
                (scaled / l0 as u128) as u64 % s.order
            })
            .collect();
        Self::new(target, exps)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn term(e: u64, k: u64, d: u64, l: u64) -> u128 {
    e as u128 * k as u128 * (l / d) as u128
}

fn conductor_of(st: &UnitGroupStructure, exps: &[u64]) -> u64 {
    let mut cond = 1u64;
    for b in &st.blocks {
        let i = b.first_slot;
        let local = match (b.p, b.e) {
            (2, 1) => 1,
            (2, 2) => {
                if exps[i] == 0 {
                    1
                } else {
                    4
                }
            }
            (2, e) => {
                let (a, x) = (exps[i], exps[i + 1]);
                if x == 0 {
                    if a == 0 {
                        1
                    } else {
                        4
                    }
                } else {
                    1 << (e - valuation(x, 2))
                }
            }
            (p, e) => {
                let x = exps[i];
                if x == 0 {
                    1
                } else {
                    let v = valuation(x, p).min(e - 1);
                    p.pow((e - v).max(1))
                }
            }
        };
        cond *= local;
    }
    cond
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    /// Brute-force conductor: least divisor d of q with χ(n) = 1 whenever
    /// n ≡ 1 (mod d) and gcd(n, q) = 1.
    fn brute_conductor(chi: &DirichletCharacter) -> u64 {
        let q = chi.modulus();
        (1..=q)
            .filter(|d| q % d == 0)
            .find(|&d| {
                (0..q)
                    .filter(|&n| n % d == 1 % d && gcd(n, q) == 1)
                    .all(|n| chi.phase(n) == Some(0))
            })
            .unwrap()
    }

    #[test]
    fn structure_examples() {
        let s = UnitGroupStructure::for_modulus(9).unwrap();
        assert_eq!(s.slots().len(), 1);
        assert_eq!((s.slots()[0].generator, s.slots()[0].order), (2, 6));
        // oracle: 2 is the least element of order 6 mod 9
        let ord = |g: u64| (1..=6).find(|&k| pow_mod(g, k, 9) == 1).unwrap();
        assert_eq!(ord(2), 6);

        let s = UnitGroupStructure::for_modulus(8).unwrap();
        let gens: Vec<_> = s.slots().iter().map(|g| (g.generator, g.order)).collect();
        assert_eq!(gens, vec![(7, 2), (5, 2)]);

        let s = UnitGroupStructure::for_modulus(2).unwrap();
        assert!(s.slots().is_empty());
        assert_eq!(s.order(), 1);
    }

    #[test]
    fn dlog_roundtrip_and_phi() {
        for q in 1..=300u64 {
            let s = UnitGroupStructure::for_modulus(q).unwrap();
            let phi = (1..=q).filter(|&n| gcd(n, q) == 1).count() as u64;
            assert_eq!(s.order(), phi, "q={q}");
            for u in 0..q {
                match s.dlog(u) {
                    Some(k) => assert_eq!(s.exp(&k), u % q, "q={q} u={u}"),
                    None => assert!(gcd(u, q) > 1),
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let s = UnitGroupStructure::for_modulus(5).unwrap();
        assert_eq!(s.characters().count(), 4);
        let s = UnitGroupStructure::for_modulus(8).unwrap();
        let chars: Vec<_> = s.characters().collect();
        assert_eq!(chars.len(), 4);
        assert!(chars[0].is_principal());
        assert_eq!(chars.iter().filter(|c| c.is_primitive()).count(), 2);
        // oracle: the characters trivial on 5 factor through mod 4
        for c in &chars {
            assert_eq!(c.is_primitive(), c.phase(5) != Some(0));
        }
        let s = UnitGroupStructure::for_modulus(2).unwrap();
        assert_eq!(s.characters().count(), 1);
    }

    #[test]
    fn evaluation_examples() {
        let s = UnitGroupStructure::for_modulus(5).unwrap();
        assert_eq!(s.principal().eval::<f64>(3), C64::new(1.0, 0.0));
        let s8 = UnitGroupStructure::for_modulus(8).unwrap();
        for c in s8.characters() {
            assert_eq!(c.eval::<f64>(6), C64::new(0.0, 0.0));
        }
        let s9 = UnitGroupStructure::for_modulus(9).unwrap();
        let chi = DirichletCharacter::new(&s9, vec![1]).unwrap();
        let want = C64::from_polar(1.0, std::f64::consts::TAU / 6.0);
        assert!((chi.eval::<f64>(2) - want).norm() < 1e-15);
    }

    #[test]
    fn conductor_examples() {
        let s8 = UnitGroupStructure::for_modulus(8).unwrap();
        assert_eq!(s8.principal().conductor(), 1);
        let minus_only = DirichletCharacter::new(&s8, vec![1, 0]).unwrap();
        assert_eq!(minus_only.conductor(), 4);
        let s9 = UnitGroupStructure::for_modulus(9).unwrap();
        assert_eq!(DirichletCharacter::new(&s9, vec![1]).unwrap().conductor(), 9);
    }

    #[test]
    fn conductor_matches_brute_force() {
        for q in (1..=120u64).chain([128, 243, 250, 256, 343]) {
            let s = UnitGroupStructure::for_modulus(q).unwrap();
            for c in s.characters() {
                let bc = brute_conductor(&c);
                assert_eq!(c.conductor(), bc, "{}", c.label());
                assert_eq!(q % c.conductor(), 0);
            }
        }
    }

    #[test]
    fn induce_examples() {
        let s1 = UnitGroupStructure::for_modulus(1).unwrap();
        let s8 = UnitGroupStructure::for_modulus(8).unwrap();
        assert_eq!(s1.principal().induce(&s8).unwrap(), s8.principal());

        let s4 = UnitGroupStructure::for_modulus(4).unwrap();
        let chi4 = DirichletCharacter::new(&s4, vec![1]).unwrap();
        let up = chi4.induce(&s8).unwrap();
        assert_eq!(up.conductor(), 4);
        for n in 0..8 {
            if n % 2 == 1 {
                assert_eq!(up.eval::<f64>(n), chi4.eval::<f64>(n));
            }
        }
        let s12 = UnitGroupStructure::for_modulus(12).unwrap();
        let up12 = chi4.induce(&s12).unwrap();
        // gcd(3,12) > 1 but gcd(3,4) = 1
        assert_eq!(up12.eval::<f64>(3), C64::new(0.0, 0.0));
        assert_ne!(chi4.eval::<f64>(3), C64::new(0.0, 0.0));

        let s6 = UnitGroupStructure::for_modulus(6).unwrap();
        assert!(matches!(chi4.induce(&s6), Err(Error::Domain(_))));
    }

    #[test]
    fn induce_agrees_on_units_everywhere() {
        for q in [12u64, 24, 36, 45, 72, 100] {
            let big = UnitGroupStructure::for_modulus(q).unwrap();
            for q0 in (1..=q).filter(|d| q % d == 0) {
                let small = UnitGroupStructure::for_modulus(q0).unwrap();
                for c in small.characters() {
                    let up = c.induce(&big).unwrap();
                    assert_eq!(up.conductor(), c.conductor());
                    for n in (0..q).filter(|&n| gcd(n, q) == 1) {
                        assert_eq!(up.phase_fraction(n), c.phase_fraction(n % q0.max(1)));
                    }
                }
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        let s = UnitGroupStructure::for_modulus(72).unwrap();
        for c in s.characters() {
            assert_eq!(s.parse_label(&c.label()).unwrap(), c);
        }
        assert_eq!(UnitGroupStructure::for_modulus(2).unwrap().principal().label(), "2:");
        assert_eq!(UnitGroupStructure::for_modulus(8).unwrap().principal().label(), "8:0,0");
        assert!(s.parse_label("73:0,0,0").is_err());
    }

    #[test]
    fn structure_cap() {
        let m = factor(1 << 20).unwrap();
        assert!(matches!(UnitGroupStructure::build_with_cap(&m, 1000), Err(Error::Resource(_))));
    }
}
