mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use num_traits::ToPrimitive;
use powmod::acceptance;
use powmod::arith::cache::cached_sieve;
use powmod::arith::{factor, FactoredModulus, SieveTable};
use powmod::bounds::{beta, envelope_e, perron_t_select, thresholds_q};
use powmod::lfunc::{perron_reconstruct, zero_scan, ComplexPoint, PerronOptions, Rectangle, ScanOptions};
use powmod::sums::{
    dirichlet_poly, exp_sum, max_exp_sum, max_over_characters_multi, max_progression_sum, progression_sum,
    twisted_sum, walsh_coefficient_with, SumKind,
};
use powmod::{DirichletCharacter, Rational, UnitGroupStructure};
use serde_json::json;

use config::{parse_count, usage, CliError, RunConfig};
use output::{emit, json_text, with_header, Cell, Table};

#[derive(Parser)]
#[command(name = "powmod", version, about = "Twisted Möbius and von Mangoldt sums, bound envelopes and L-function numerics")]
struct Cli {
    /// Flat `key = value` file overriding constants and run settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Table format for `sums` and `envelopes`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Twisted sums, exponential and progression sums, Walsh coefficients.
    Sums(SumsArgs),
    /// Exponent function table or envelope sweep.
    Envelopes(EnvelopeArgs),
    /// Grid scan of |L(s, χ)| with Newton refinement.
    ScanZeros(ScanArgs),
    /// Perron-integral reconstruction of ψ(x, χ) or M(x, χ).
    Perron(PerronArgs),
    /// Runs the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SumsKind {
    Mobius,
    Psi,
    Exp,
    Progression,
    Walsh,
    DirichletPoly,
}

#[derive(Args)]
struct SumsArgs {
    #[arg(long, value_enum)]
    kind: SumsKind,
    #[arg(long)]
    q: Option<u64>,
    /// Cutoffs, comma separated.
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    /// Log-spaced cutoffs `lo:hi:count`; values within 1e-9 of an integer are rounded.
    #[arg(long)]
    x_grid: Option<String>,
    /// Residue for `exp` and `progression` (default: every residue).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    /// Character label `q:e1,…,ek` or exponents `e1,…,ek` (default: every character).
    #[arg(long)]
    character: Option<String>,
    /// Report only the maximum over characters or residues.
    #[arg(long)]
    max: bool,
    /// Bit count for `walsh`.
    #[arg(long)]
    n: Option<u32>,
    /// Subset mask for `walsh`, decimal or `0x` hex.
    #[arg(long = "A")]
    mask: Option<String>,
    /// Value used for μ(0) in `walsh`.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    mu_zero: i8,
    /// Start `M` of a Dirichlet polynomial.
    #[arg(long)]
    m: Option<f64>,
    /// Length `N` of a Dirichlet polynomial.
    #[arg(long)]
    len: Option<f64>,
    /// Twist `t` of a Dirichlet polynomial.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t: f64,
}

#[derive(Args)]
struct EnvelopeArgs {
    /// Tabulate the exponent function β instead of the envelopes.
    #[arg(long)]
    beta: bool,
    /// Number of α values, `α_k = k·alpha_max/grid`.
    #[arg(long, default_value_t = 1000)]
    grid: u32,
    /// Largest α, as a rational `p/q`.
    #[arg(long, default_value = "10/7")]
    alpha_max: String,
    #[arg(long)]
    q: Option<f64>,
    /// `log x` range `lo:hi:count`, linearly spaced.
    #[arg(long)]
    ln_x: Option<String>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    q: u64,
    /// Character label (default: first non-principal character).
    #[arg(long)]
    character: Option<String>,
    /// `σ_min:σ_max`.
    #[arg(long, allow_hyphen_values = true)]
    sigma: String,
    /// `t_min:t_max`.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// `n_σ,n_t`.
    #[arg(long, default_value = "50,200")]
    grid: String,
    #[arg(long, default_value_t = 1e-9)]
    refine_tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PerronKind {
    Psi,
    Mobius,
}

#[derive(Args)]
struct PerronArgs {
    #[arg(long, value_enum)]
    kind: PerronKind,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    q: u64,
    /// Character label (default: principal).
    #[arg(long)]
    character: Option<String>,
    #[arg(long = "T")]
    height: f64,
    #[arg(long, default_value_t = 1e-2)]
    step: f64,
    #[arg(long, default_value_t = powmod::lfunc::DEFAULT_R_CONSTANT)]
    r_constant: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Criteria to run (default: all).
    #[arg(long, value_delimiter = ',')]
    criterion: Vec<u8>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("powmod: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let out = cli.out.as_deref();
    match cli.command {
        Command::Sums(a) => {
            let t = cmd_sums(&a, &cfg)?;
            emit(&render(&t, cli.format, &cfg), out)?;
        }
        Command::Envelopes(a) => {
            let t = cmd_envelopes(&a, &cfg)?;
            emit(&render(&t, cli.format, &cfg), out)?;
        }
        Command::ScanZeros(a) => emit(&json_text(&cmd_scan_zeros(&a, &cfg)?), out)?,
        Command::Perron(a) => emit(&json_text(&cmd_perron(&a, &cfg)?), out)?,
        Command::Verify(a) => return cmd_verify(&a, &cfg, out),
    }
    Ok(0)
}

fn render(t: &Table, format: Format, cfg: &RunConfig) -> String {
    match format {
        Format::Csv => t.to_csv(cfg),
        Format::Json => json_text(&t.to_json(cfg)),
    }
}

fn modulus(q: u64) -> Result<FactoredModulus, CliError> {
    match q {
        0 => usage("q must be positive"),
        1 => Ok(FactoredModulus::one()),
        _ => Ok(factor(q)?),
    }
}

fn parse_character(s: &Arc<UnitGroupStructure>, label: &str) -> Result<DirichletCharacter, CliError> {
    let full = if label.contains(':') { label.to_string() } else { format!("{}:{label}", s.q()) };
    Ok(s.parse_label(&full)?)
}

/// Sieve covering `limit`, within the configured cap.
fn sieve(limit: u64, cfg: &RunConfig) -> Result<SieveTable, CliError> {
    if limit > cfg.sieve_limit {
        return Err(CliError::Core(powmod::Error::Resource(format!(
            "cutoff {limit} exceeds sieve_limit {}",
            cfg.sieve_limit
        ))));
    }
    Ok(cached_sieve(limit.max(2))?)
}

fn parse_range(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("{what} must look like lo:hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn parse_grid(s: &str, what: &str) -> Result<(f64, f64, usize), CliError> {
    let bad = || CliError::Usage(format!("{what} must look like lo:hi:count, got {s:?}"));
    let (range, n) = s.rsplit_once(':').ok_or_else(bad)?;
    let (lo, hi) = parse_range(range, what)?;
    let n: usize = parse_count(n.trim()).and_then(|n| usize::try_from(n).ok()).ok_or_else(bad)?;
    if n == 0 || !(lo <= hi) {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

fn cutoffs(a: &SumsArgs) -> Result<Vec<f64>, CliError> {
    let mut xs = a.x.clone();
    if let Some(g) = &a.x_grid {
        let (lo, hi, n) = parse_grid(g, "--x-grid")?;
        if !(lo > 0.0) {
            return usage("--x-grid needs lo > 0");
        }
        for i in 0..n {
            let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            let x = (lo.ln() + (hi.ln() - lo.ln()) * f).exp();
            let r = x.round();
            xs.push(if (x - r).abs() <= 1e-9 * r.max(1.0) { r } else { x });
        }
    }
    if xs.is_empty() {
        return usage("give --x or --x-grid");
    }
    if xs.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return usage("cutoffs must be finite and nonnegative");
    }
    Ok(xs)
}

const SUM_COLUMNS: [&str; 8] = ["kind", "q", "character_label_or_a", "x", "re", "im", "abs", "normalized"];

fn sum_row(kind: &str, q: u64, label: String, x: f64, v: Complex<f64>) -> Vec<Cell> {
    let norm = if x > 0.0 { v.norm() / x } else { f64::NAN };
    vec![
        Cell::Text(kind.into()),
        Cell::Int(q as i64),
        Cell::Text(label),
        Cell::Float(x),
        Cell::Float(v.re),
        Cell::Float(v.im),
        Cell::Float(v.norm()),
        Cell::Float(norm),
    ]
}

fn cmd_sums(a: &SumsArgs, cfg: &RunConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&SUM_COLUMNS);
    if a.kind == SumsKind::Walsh {
        let n = a.n.ok_or_else(|| CliError::Usage("walsh needs --n".into()))?;
        let mask_s = a.mask.as_deref().unwrap_or("0");
        let mask = match mask_s.strip_prefix("0x").or_else(|| mask_s.strip_prefix("0X")) {
            Some(h) => u64::from_str_radix(h, 16),
            None => mask_s.parse(),
        }
        .map_err(|_| CliError::Usage(format!("bad --A mask {mask_s:?}")))?;
        if n > powmod::sums::MAX_WALSH_BITS {
            return Err(CliError::Core(powmod::Error::Resource(format!("n = {n} exceeds {}", powmod::sums::MAX_WALSH_BITS))));
        }
        let top = (1u64 << n).saturating_sub(1);
        let t = sieve(top, cfg)?;
        let v = walsh_coefficient_with(n, mask, &t, a.mu_zero)?;
        let size = (1u64 << n) as f64;
        table.push(vec![
            Cell::Text("walsh".into()),
            Cell::Int(n as i64),
            Cell::Text(format!("{mask:#x}")),
            Cell::Float(top as f64),
            Cell::Float(v as f64),
            Cell::Float(0.0),
            Cell::Float(v.unsigned_abs() as f64),
            Cell::Float(v.unsigned_abs() as f64 / size),
        ]);
        return Ok(table);
    }
    let q = a.q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
    let m = modulus(q)?;

    if a.kind == SumsKind::DirichletPoly {
        let (Some(start), Some(len)) = (a.m, a.len) else {
            return usage("dirichlet-poly needs --m and --len");
        };
        let s = UnitGroupStructure::build(&m)?;
        let chars: Vec<DirichletCharacter> = match &a.character {
            Some(l) => vec![parse_character(&s, l)?],
            None => s.characters().collect(),
        };
        for chi in &chars {
            let v = dirichlet_poly(start, len, a.t, chi)?;
            table.push(sum_row("dirichlet-poly", q, chi.label(), start + len, v));
        }
        return Ok(table);
    }

    let xs = cutoffs(a)?;
    let x_max = xs.iter().cloned().fold(0.0, f64::max);
    let t = sieve(x_max.floor() as u64, cfg)?;
    match a.kind {
        SumsKind::Mobius | SumsKind::Psi => {
            let kind = if a.kind == SumsKind::Mobius { SumKind::Mobius } else { SumKind::Psi };
            if a.max {
                let mut sorted = xs.clone();
                sorted.sort_by(f64::total_cmp);
                for r in max_over_characters_multi(&sorted, &m, kind, &t)? {
                    let name = format!("max-{}", kind.name());
                    table.push(sum_row(&name, q, r.argmax_label.clone(), r.x, Complex::new(r.value, 0.0)));
                }
                return Ok(table);
            }
            let s = UnitGroupStructure::build(&m)?;
            let chars: Vec<DirichletCharacter> = match &a.character {
                Some(l) => vec![parse_character(&s, l)?],
                None => s.characters().collect(),
            };
            for &x in &xs {
                for chi in &chars {
                    let r = twisted_sum(kind, x, chi, &t)?;
                    table.push(sum_row(kind.name(), q, r.character_label, x, r.value));
                }
            }
        }
        SumsKind::Exp | SumsKind::Progression => {
            let exp = a.kind == SumsKind::Exp;
            let name = if exp { "exp" } else { "progression" };
            for &x in &xs {
                if a.max {
                    let r = if exp { max_exp_sum(x, q, &t)? } else { max_progression_sum(x, q, &t)? };
                    table.push(sum_row(&format!("max-{name}"), q, r.argmax_label, x, Complex::new(r.value, 0.0)));
                    continue;
                }
                let residues: Vec<i64> = match a.a {
                    Some(r) => vec![r],
                    None => (0..q as i64).collect(),
                };
                for r in residues {
                    let v = if exp {
                        exp_sum(x, q, r, &t)?
                    } else {
                        Complex::new(progression_sum(x, q, r, &t)? as f64, 0.0)
                    };
                    table.push(sum_row(name, q, r.to_string(), x, v));
                }
            }
        }
        SumsKind::Walsh | SumsKind::DirichletPoly => unreachable!("handled above"),
    }
    Ok(table)
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("bad rational {s:?}"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 || n <= 0 || d < 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn cmd_envelopes(a: &EnvelopeArgs, cfg: &RunConfig) -> Result<Table, CliError> {
    if a.beta {
        if a.grid == 0 {
            return usage("--grid must be positive");
        }
        let max = parse_rational(&a.alpha_max)?;
        let mut table = Table::new(&["alpha", "beta"]);
        for k in 1..=a.grid as i64 {
            let alpha = max * Rational::new(k, a.grid as i64);
            let b = beta(alpha)?;
            let f = |r: Rational| r.to_f64().unwrap_or(f64::NAN);
            table.push(vec![Cell::Float(f(alpha)), Cell::Float(f(b))]);
        }
        return Ok(table);
    }
    let q = a.q.ok_or_else(|| CliError::Usage("envelopes needs --beta or --q".into()))?;
    let grid = a.ln_x.as_deref().ok_or_else(|| CliError::Usage("envelopes needs --ln-x lo:hi:count".into()))?;
    let (lo, hi, n) = parse_grid(grid, "--ln-x")?;
    let env = &cfg.envelope;
    thresholds_q(q)?;
    let mut table = Table::new(&["x", "q", "E1", "E2", "case", "T", "ln_x", "ln_E1", "ln_E2", "ln_T"]);
    for i in 0..n {
        let ln_x = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        let e1 = envelope_e(1, ln_x, q, env)?;
        let e2 = envelope_e(2, ln_x, q, env)?;
        let choice = perron_t_select(ln_x, q, env).ok();
        let (case, t, ln_t) = match choice {
            Some(c) => (Cell::Int(c.case.index() as i64), Cell::Float(c.t()), Cell::Float(c.ln_t)),
            None => (Cell::Int(e1.branch.index() as i64), Cell::Empty, Cell::Empty),
        };
        table.push(vec![
            Cell::Float(ln_x.exp()),
            Cell::Float(q),
            Cell::Float(e1.value()),
            Cell::Float(e2.value()),
            case,
            t,
            Cell::Float(ln_x),
            Cell::Float(e1.ln_value),
            Cell::Float(e2.ln_value),
            ln_t,
        ]);
    }
    Ok(table)
}

fn cmd_scan_zeros(a: &ScanArgs, cfg: &RunConfig) -> Result<serde_json::Value, CliError> {
    let s = UnitGroupStructure::build(&modulus(a.q)?)?;
    let chi = match &a.character {
        Some(l) => parse_character(&s, l)?,
        None => s.characters().find(|c| !c.is_principal()).unwrap_or_else(|| s.principal()),
    };
    let (sigma_min, sigma_max) = parse_range(&a.sigma, "--sigma")?;
    let (t_min, t_max) = parse_range(&a.t, "--t")?;
    let bad = || CliError::Usage(format!("--grid must look like n_sigma,n_t, got {:?}", a.grid));
    let (ns, nt) = a.grid.split_once(',').ok_or_else(bad)?;
    let grid = (ns.trim().parse().map_err(|_| bad())?, nt.trim().parse().map_err(|_| bad())?);
    let rect = Rectangle { sigma_min, sigma_max, t_min, t_max };
    let opts = ScanOptions { target: cfg.target, ..ScanOptions::default() };
    let r = zero_scan(&chi, rect, grid, a.refine_tol, &opts)?;
    let point = |p: ComplexPoint<f64>| json!({ "sigma": p.sigma, "t": p.t });
    Ok(with_header(
        json!({
            "character": chi.label(),
            "rectangle": r.rectangle,
            "grid": [r.grid.0, r.grid.1],
            "min_abs_L": r.min_abs_l,
            "argmin": point(r.argmin),
            "zeros": r.zeros_found.iter().map(|&z| point(z)).collect::<Vec<_>>(),
            "vartheta_used": r.vartheta_used,
            "failed_points": r.failed_points,
        }),
        cfg,
    ))
}

fn cmd_perron(a: &PerronArgs, cfg: &RunConfig) -> Result<serde_json::Value, CliError> {
    let s = UnitGroupStructure::build(&modulus(a.q)?)?;
    let chi = match &a.character {
        Some(l) => parse_character(&s, l)?,
        None => s.principal(),
    };
    if !(a.x.is_finite() && a.x > 2.0) {
        return usage("--x must exceed 2");
    }
    let t = sieve(a.x.floor() as u64, cfg)?;
    let kind = match a.kind {
        PerronKind::Psi => SumKind::Psi,
        PerronKind::Mobius => SumKind::Mobius,
    };
    let opts = PerronOptions { step: a.step, r_constant: a.r_constant, target: cfg.target };
    let r = perron_reconstruct(kind, a.x, &chi, a.height, &opts, &t)?;
    let c = |z: Complex<f64>| json!({ "re": z.re, "im": z.im });
    Ok(with_header(
        json!({
            "kind": kind.name(),
            "x": r.x,
            "q": a.q,
            "character": chi.label(),
            "T": r.height,
            "sigma0": r.sigma0,
            "step": a.step,
            "nodes": r.nodes,
            "integral_value": c(r.integral_value),
            "direct_value": c(r.direct_value),
            "discrepancy": r.discrepancy,
            "R_bound": r.r_bound,
            "within_bound": r.discrepancy < r.r_bound,
        }),
        cfg,
    ))
}

fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig, out: Option<&std::path::Path>) -> Result<u8, CliError> {
    let seed = a.seed.unwrap_or(cfg.seed);
    let ids: Vec<u8> = if a.criterion.is_empty() {
        acceptance::CRITERIA.iter().map(|c| c.0).collect()
    } else {
        a.criterion.clone()
    };
    let mut text = format!("# config_hash={} seed={seed}\n", cfg.hash());
    let mut all = true;
    for id in ids {
        let r = acceptance::run(id, seed)?;
        all &= r.passed;
        text.push_str(&r.line());
        text.push('\n');
    }
    text.push_str(if all { "all criteria passed\n" } else { "some criteria failed\n" });
    emit(&text, out)?;
    Ok(if all { 0 } else { 1 })
}
