//! CLI behavior: exit codes, flag validation, and cross-command consistency.

use std::fs;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_geonc");

fn geonc(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("spawn geonc")
}

#[test]
fn missing_required_flag_exits_2() {
    let out = geonc(&["analyze", "--q", "8", "--m", "1", "--eps", "0.1", "--n-range", "20:22"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_rate_bounds_exit_2() {
    let out = geonc(&[
        "rate-region", "--eta0", "0.05", "--r-min", "0.9", "--r-max", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r-min"));
}

#[test]
fn infeasible_budget_exits_3() {
    let out = geonc(&[
        "optimize", "--k", "50", "--m", "100", "--q", "8", "--eps", "0.1",
        "--rho0", "0.8", "--beta0", "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dead_channel_simulation_fails_every_trial() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dead.json");
    fs::write(
        &cfg,
        r#"{"k": 5, "n": 7, "m": 2, "q": 8, "eps": [1.0],
            "codec": "systematic", "relay_mode": "decode_reencode",
            "trials": 50, "seed": 1}"#,
    )
    .unwrap();
    let out = geonc(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().last().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[8], "1", "failure mean should be 1, row: {row}");
    assert_eq!(fields[10], "1", "residual should be 1, row: {row}");
}

#[test]
fn zero_eps_analyze_reports_full_reliability() {
    let out = geonc(&[
        "analyze", "--k", "10", "--q", "8", "--m", "1", "--eps", "0",
        "--n-range", "12:14", "--rho0", "0.8",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(3) {
        let rho_nc = line.split(',').nth(3).unwrap();
        assert_eq!(rho_nc, "1", "line: {line}");
    }
}

#[test]
fn simulate_agrees_with_analyze() {
    // k=20, n=24, q=8, eps=0.1: simulated residual within 3 stderr of analytic
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scn.json");
    fs::write(
        &cfg,
        r#"{"k": 20, "n": 24, "m": 1, "q": 8, "eps": [0.1],
            "codec": "systematic", "relay_mode": "decode_reencode",
            "trials": 20000, "seed": 9}"#,
    )
    .unwrap();
    let sim = geonc(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(sim.status.success());
    let text = String::from_utf8(sim.stdout).unwrap();
    let fields: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    let residual: f64 = fields[10].parse().unwrap();
    let stderr: f64 = fields[11].parse().unwrap();

    let ana = geonc(&[
        "analyze", "--k", "20", "--q", "8", "--m", "1", "--eps", "0.1",
        "--n-range", "24:24", "--rho0", "0.8",
    ]);
    let text = String::from_utf8(ana.stdout).unwrap();
    let eta: f64 = text.lines().last().unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!(
        (residual - eta).abs() <= 3.0 * stderr,
        "simulated {residual} vs analytic {eta} (stderr {stderr})"
    );
}

#[test]
fn connectivity_output_carries_uncoded_horizon() {
    let out = geonc(&[
        "connectivity", "--k", "10", "--m", "4", "--q", "8", "--eps", "0.1",
        "--rho0", "0.8", "--beta0", "500000", "--h-max", "16",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(fields[4], "2", "h_unc should be 2: {text}");
}
