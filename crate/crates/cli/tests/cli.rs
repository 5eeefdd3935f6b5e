use std::path::Path;
use std::process::{Command, Output};

fn powmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powmod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV output, split into fields (labels here contain no commas).
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn mobius_sum_mod_one() {
    let o = powmod(&["sums", "--kind", "mobius", "--q", "1", "--x", "10"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    assert_eq!(num(&r[0][4]), -1.0);
    assert_eq!(num(&r[0][5]), 0.0);
}

#[test]
fn csv_header_lines() {
    let o = powmod(&["sums", "--kind", "psi", "--q", "4", "--x", "100"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# powmod "));
    assert!(lines.next().unwrap().starts_with("# config_hash="));
    assert!(lines.next().unwrap().contains("UNPROVEN CONSTANTS"));
    assert_eq!(lines.next().unwrap(), "kind,q,character_label_or_a,x,re,im,abs,normalized");
    assert_eq!(rows(&o).len(), 2);
}

#[test]
fn walsh_three_bits_empty_mask() {
    let o = powmod(&["sums", "--kind", "walsh", "--n", "3", "--A", "0"]);
    assert!(o.status.success());
    assert_eq!(num(&rows(&o)[0][4]), -2.0);
}

#[test]
fn missing_modulus_is_a_usage_error() {
    let o = powmod(&["sums", "--kind", "mobius", "--x", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--q"));
}

#[test]
fn unknown_flag_and_domain_errors_exit_two() {
    assert_eq!(powmod(&["sums", "--bogus"]).status.code(), Some(2));
    assert_eq!(powmod(&["sums", "--kind", "psi", "--q", "9", "--x", "10", "--character", "1,0"]).status.code(), Some(2));
    assert_eq!(powmod(&["perron", "--kind", "psi", "--x", "50", "--q", "1", "--T", "1"]).status.code(), Some(2));
}

#[test]
fn oversized_sieve_exits_three() {
    let o = powmod(&["sums", "--kind", "mobius", "--q", "1", "--x", "1e12"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn beta_grid_hits_three_sevenths() {
    let o = powmod(&["envelopes", "--beta", "--grid", "1000"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 1000);
    let row = &r[299];
    assert!((num(&row[0]) - 3.0 / 7.0).abs() < 1e-15);
    assert!((num(&row[1]) - 5.0 / 7.0).abs() < 1e-15);
}

#[test]
fn envelope_sweep_columns() {
    let o = powmod(&["envelopes", "--q", "1e6", "--ln-x", "10:200:4"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 4);
    for row in &r {
        assert_eq!(row.len(), 10);
        assert!((num(&row[2]).ln() - num(&row[7])).abs() < 1e-9);
    }
}

#[test]
fn perron_psi_within_bound() {
    let o = powmod(&["perron", "--kind", "psi", "--x", "50", "--q", "1", "--T", "500", "--step", "0.05"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["discrepancy"].as_f64().unwrap() < v["R_bound"].as_f64().unwrap());
    assert!(v["config_hash"].is_string());
}

#[test]
fn scan_finds_first_zero_mod_four() {
    let o = powmod(&["scan-zeros", "--q", "4", "--sigma", "0.3:0.7", "--t", "5:7", "--grid", "20,40"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let zeros = v["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 1);
    assert!((zeros[0]["t"].as_f64().unwrap() - 6.020948904697597).abs() < 1e-8);
    assert!((zeros[0]["sigma"].as_f64().unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let o = powmod(&[
            "sums", "--kind", "mobius", "--q", "16", "--x-grid", "10:1e5:7", "--out", p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    assert!(!a.is_empty());
}

fn config_hash(args: &[&str]) -> String {
    let o = powmod(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("# config_hash=")).unwrap();
    line.trim_start_matches("# config_hash=").to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_changes_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sums", "--kind", "mobius", "--q", "1", "--x", "10"];
    let base = config_hash(&args);
    let same = write(dir.path(), "same.conf", "# nothing overridden\n");
    let other = write(dir.path(), "other.conf", "c = 2.5\n");
    let with = |p: &str| {
        let mut a = vec!["--config", p];
        a.extend_from_slice(&args);
        config_hash(&a)
    };
    assert_eq!(with(&same), base);
    assert_ne!(with(&other), base);

    let bad = write(dir.path(), "bad.conf", "zeta = 1\n");
    assert_eq!(powmod(&["--config", &bad, "sums", "--kind", "mobius", "--q", "1", "--x", "10"]).status.code(), Some(2));
}

#[test]
fn verify_reports_each_criterion() {
    let o = powmod(&["verify", "--criterion", "4,5,6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
}
