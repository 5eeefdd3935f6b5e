use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Exponent range cut-off `C` in the dyadic envelope.
pub const DYADIC_C: i64 = 1001;

/// Unquantified constants of the envelopes, with working defaults.
///
/// None of the defaults has a published value; every output derived from them
/// is a formula evaluation under these choices.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeConfig<T> {
    pub c: T,
    pub c1: T,
    pub c2: T,
    pub a: T,
    pub b: T,
    pub b1: T,
    pub b2: T,
    pub gamma0: u32,
    pub xi0: T,
    pub c0: T,
    pub c_perron: T,
}

/// Keys of the flat `key=value` form, sorted.
pub const CONFIG_KEYS: [&str; 11] = ["a", "b", "b1", "b2", "c", "c0", "c1", "c2", "c_perron", "gamma0", "xi0"];

impl<T: Real> Default for EnvelopeConfig<T> {
    fn default() -> Self {
        let xi0 = T::lit(1e-4);
        Self {
            c: T::one(),
            c1: T::one(),
            c2: T::one(),
            a: T::one(),
            b: T::one(),
            b1: T::one(),
            b2: T::one(),
            gamma0: crate::arith::DEFAULT_GAMMA0,
            xi0,
            c0: c0_for(xi0),
            c_perron: T::lit(0.25),
        }
    }
}

/// `c₀ = C(C−1)²ξ₀`.
pub fn c0_for<T: Real>(xi0: T) -> T {
    let c = T::lit(DYADIC_C as f64);
    c * (c - T::one()).powi(2) * xi0
}

impl<T: Real> EnvelopeConfig<T> {
    /// Sets `ξ₀` and the tied constant `c₀`.
    pub fn with_xi0(mut self, xi0: T) -> Self {
        self.xi0 = xi0;
        self.c0 = c0_for(xi0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c", self.c),
            ("c1", self.c1),
            ("c2", self.c2),
            ("a", self.a),
            ("b", self.b),
            ("b1", self.b1),
            ("b2", self.b2),
            ("xi0", self.xi0),
            ("c0", self.c0),
            ("c_perron", self.c_perron),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return domain(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.gamma0 == 0 {
            return domain("gamma0 must be positive");
        }
        if !(self.c_perron < T::lit(0.5)) {
            return domain(format!("c_perron must be below 1/2, got {}", self.c_perron));
        }
        if self.b1 > self.b2 {
            return domain(format!("need b1 ≤ b2, got {} > {}", self.b1, self.b2));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<String> {
        let v = match key {
            "a" => self.a,
            "b" => self.b,
            "b1" => self.b1,
            "b2" => self.b2,
            "c" => self.c,
            "c0" => self.c0,
            "c1" => self.c1,
            "c2" => self.c2,
            "c_perron" => self.c_perron,
            "xi0" => self.xi0,
            "gamma0" => return Some(self.gamma0.to_string()),
            _ => return None,
        };
        Some(format!("{:?}", v.to_f64().unwrap_or(f64::NAN)))
    }

    /// Canonical `(key, value)` pairs in sorted key order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        CONFIG_KEYS.iter().map(|&k| (k, self.get(k).expect("known key"))).collect()
    }

    /// Applies overrides, `xi0` first so that an explicit `c0` wins.
    pub fn apply<'a>(&mut self, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<()> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_by_key(|(k, _)| *k != "xi0");
        for (k, v) in pairs {
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Overrides one constant. Setting `xi0` also resets `c0`; set `c0` after
    /// `xi0` to decouple them.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::Format(format!("bad value {value:?} for {key}"));
        if key == "gamma0" {
            self.gamma0 = value.trim().parse().map_err(|_| bad())?;
            return Ok(());
        }
        let v: f64 = value.trim().parse().map_err(|_| bad())?;
        let v = T::lit(v);
        match key {
            "a" => self.a = v,
            "b" => self.b = v,
            "b1" => self.b1 = v,
            "b2" => self.b2 = v,
            "c" => self.c = v,
            "c0" => self.c0 = v,
            "c1" => self.c1 = v,
            "c2" => self.c2 = v,
            "c_perron" => self.c_perron = v,
            "xi0" => {
                self.xi0 = v;
                self.c0 = c0_for(v);
            }
            _ => return Err(Error::Format(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = EnvelopeConfig::<f64>::default();
        cfg.validate().unwrap();
        assert!((cfg.c0 - 1001.0 * 1000.0 * 1000.0 * 1e-4).abs() < 1e-6);
        assert_eq!(cfg.gamma0, 10);
    }

    #[test]
    fn invariants_enforced() {
        let mut cfg = EnvelopeConfig::<f64>::default();
        cfg.c_perron = 0.5;
        assert!(cfg.validate().is_err());
        let mut cfg = EnvelopeConfig::<f64>::default();
        cfg.b1 = 2.0;
        assert!(cfg.validate().is_err());
        let mut cfg = EnvelopeConfig::<f64>::default();
        cfg.a = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn entries_round_trip() {
        let mut cfg = EnvelopeConfig::<f64>::default();
        cfg.set("xi0", "3e-7").unwrap();
        cfg.set("b2", "2.5").unwrap();
        cfg.set("c0", "7").unwrap();
        let entries = cfg.entries();
        let mut back = EnvelopeConfig::<f64>::default();
        back.apply(entries.iter().map(|(k, v)| (*k, v.as_str()))).unwrap();
        assert_eq!(back, cfg);
        assert!(cfg.set("nope", "1").is_err());
        assert!(cfg.set("a", "x").is_err());
    }
}
