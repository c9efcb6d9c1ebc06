//! The `fiolab` binary end to end: exit codes, output files, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn fiolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiolab"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("fiolab runs")
}

fn run_kind(kind: &str, config: &str, out: &Path) -> Output {
    fiolab(&[
        "--config",
        &format!("configs/{config}.json"),
        "--out",
        out.to_str().unwrap(),
        "--threads",
        "2",
        "run",
        "--kind",
        kind,
    ])
}

#[test]
fn passing_run_exits_zero_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_kind("intro_l2_criterion", "intro_l2_criterion", dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("intro_l2_criterion: PASS"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["results"][0]["kind"], "intro_l2_criterion");
    assert_eq!(report["results"][0]["pass"], true);
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(
        run_kind("l1v_continuity", "l1v_continuity", a.path())
            .status
            .code(),
        Some(0)
    );
    let out = fiolab(&[
        "--config",
        "configs/l1v_continuity.json",
        "--out",
        b.path().to_str().unwrap(),
        "--threads",
        "1",
        "run",
        "--kind",
        "l1v-continuity",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for file in ["report.json", "l1v_schur.csv", "l1v_ratios.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file} differs");
    }
}

#[test]
fn failing_criterion_exits_one() {
    // a tight flat-slope window cannot hold for a growing Schur curve
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"phase": {"kind": "smooth_diffeo", "perturbation_amplitude": 0.45},
            "symbol": {"kind": "bump", "support_radius": 1},
            "y_schedule": [4, 8, 16, 32, 64],
            "thresholds": {"counterexample_max": 0.1}}"#,
    )
    .unwrap();
    let out = fiolab(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "run",
        "--kind",
        "counterexample_growth",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(
        fiolab(&["run", "--kind", "no_such_kind"]).status.code(),
        Some(2)
    );
    // randomized kinds refuse to run without a seed
    let dir = tempfile::tempdir().unwrap();
    let out = fiolab(&[
        "--out",
        dir.path().to_str().unwrap(),
        "run",
        "--kind",
        "l2_bounded",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
}

#[test]
fn kernel_and_tfnorm_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = fiolab(&["--out", d, "kernel", "--y", "-4"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["schur"].as_f64().unwrap() > 0.0);
    assert!(dir.path().join("kernel.csv").exists());

    let bin = dir.path().join("kernel.bin");
    let out = fiolab(&[
        "tfnorm",
        bin.to_str().unwrap(),
        "--norm",
        "modulation",
        "--p",
        "2",
        "--q",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["norm"].as_f64().unwrap() > 0.0);
}

#[test]
fn schur_then_growth_fit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = fiolab(&["--config", "configs/schur_growth.json", "--out", d, "schur"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = dir.path().join("schur.csv");
    let out = fiolab(&[
        "growth-fit",
        csv.to_str().unwrap(),
        "--lo",
        "4",
        "--hi",
        "256",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let fit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let slope = fit["slope"].as_f64().unwrap();
    assert!(slope > 0.3 && slope < 2.0 / 3.0 + 0.1, "{slope}");
}

#[test]
fn verify_phase_reports_both_checks() {
    let out = fiolab(&[
        "--config",
        "configs/schur_growth.json",
        "verify-phase",
        "--gamma",
        "0.9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["hoelder"]["pass"], false);
    assert!(v["l2"]["beta_inf"].as_f64().unwrap() >= 1.0);
}
