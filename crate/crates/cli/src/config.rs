use std::fmt;
use std::path::Path;

use powmod::arith::DEFAULT_SIEVE_CAP;
use powmod::bounds::CONFIG_KEYS;
use powmod::{EnvelopeConfig64, Error};
use sha2::{Digest, Sha256};

/// Printed at the top of every output.
pub const DISCLAIMER: &str =
    "UNPROVEN CONSTANTS: c, c1, c2, a, b, b1, b2, gamma0, xi0, c0 and c_perron are illustrative defaults or user overrides, not established values";

const RUN_KEYS: [&str; 3] = ["seed", "sieve_limit", "target"];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Domain(_) | Error::Range { .. } | Error::Format(_)) => 2,
            CliError::Core(Error::Resource(_) | Error::Precision(_) | Error::Io(_)) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "argument error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub envelope: EnvelopeConfig64,
    /// Largest sieve any subcommand may build.
    pub sieve_limit: u64,
    /// Absolute accuracy requested from L-function evaluations.
    pub target: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            envelope: EnvelopeConfig64::default(),
            sieve_limit: DEFAULT_SIEVE_CAP,
            target: 1e-10,
            seed: powmod::acceptance::DEFAULT_SEED,
        }
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut envelope = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return usage(format!("config line {}: expected key = value", i + 1));
            };
            let (k, v) = (k.trim(), v.trim());
            let bad = || CliError::Usage(format!("config line {}: bad value {v:?} for {k}", i + 1));
            match k {
                "seed" => cfg.seed = v.parse().map_err(|_| bad())?,
                "sieve_limit" => cfg.sieve_limit = parse_count(v).ok_or_else(bad)?,
                "target" => {
                    cfg.target = v.parse().map_err(|_| bad())?;
                    if !(cfg.target > 0.0) {
                        return Err(bad());
                    }
                }
                _ if CONFIG_KEYS.contains(&k) => envelope.push((k, v)),
                _ => {
                    let known: Vec<_> = Self::keys().collect();
                    return usage(format!("config line {}: unknown key {k} (known: {})", i + 1, known.join(", ")));
                }
            }
        }
        cfg.envelope.apply(envelope)?;
        cfg.envelope.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sorted `key=value` lines covering every setting.
    pub fn canonical(&self) -> String {
        let mut pairs: Vec<(&str, String)> = self.envelope.entries();
        pairs.push(("seed", self.seed.to_string()));
        pairs.push(("sieve_limit", self.sieve_limit.to_string()));
        pairs.push(("target", format!("{:?}", self.target)));
        pairs.sort_by_key(|p| p.0);
        pairs.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// First 16 hex digits of the SHA-256 of [`RunConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn keys() -> impl Iterator<Item = &'static str> {
        CONFIG_KEYS.iter().chain(RUN_KEYS.iter()).copied()
    }
}

/// Integer with optional exponent notation (`1e7`).
pub fn parse_count(s: &str) -> Option<u64> {
    if let Ok(n) = s.parse() {
        return Some(n);
    }
    let v: f64 = s.parse().ok()?;
    (v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64).then_some(v as u64)
}
