//! End-to-end tests of the `csbp` binary: subcommand contracts, JSON output,
//! exit codes, and bitwise determinism of emitted reports.

use std::process::Command;

fn csbp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_csbp"))
}

#[test]
fn operators_check_passes() {
    let out = csbp().args(["operators", "check", "--p-max", "4"]).output().unwrap();
    assert!(out.status.success(), "stdout: {}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("PASS").count(), 4);
}

#[test]
fn operators_dump_is_valid_json() {
    let out = csbp().args(["operators", "dump", "--p", "2"]).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["n_nodes"], 3);
    let q = doc["q_row_major"].as_array().unwrap();
    assert_eq!(q.len(), 9);
    assert!((q[0].as_f64().unwrap() + 0.5).abs() < 1e-15);
    // unsupported degree -> error exit
    let out = csbp().args(["operators", "dump", "--p", "9"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn riccati_solve_and_blowup_json() {
    let out = csbp()
        .args(["riccati", "solve", "--a", "1", "--b", "0", "--c", "1", "--t", "0.785398163397448"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["case"], "TangentPure");
    assert!((doc["y"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let out = csbp()
        .args(["riccati", "blowup", "--a", "1", "--b", "3", "--c", "2"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["case"], "RealRoots");
    assert!((doc["t_star"].as_f64().unwrap() - 2.0f64.ln()).abs() < 1e-12);

    let out = csbp()
        .args(["riccati", "blowup", "--a", "0", "--b", "0", "--c", "3"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["t_star"], "infinite");

    // negative coefficient -> error exit code 2
    let out = csbp()
        .args(["riccati", "solve", "--a", "-1", "--b", "0", "--c", "1", "--t", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn converge_emits_deterministic_reports() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let run = |dir: &std::path::Path| {
        let out = csbp()
            .args([
                "converge",
                "--problem",
                "burgers",
                "--p",
                "2",
                "--ne-list",
                "16,32,64",
                "--t-frac",
                "0.2",
                "--envelope-samples",
                "10",
                "--time-samples",
                "9",
                "--no-dt-guard",
                "--out-dir",
            ])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    };
    run(dir_a.path());
    run(dir_b.path());
    let csv_a = std::fs::read(dir_a.path().join("report.csv")).unwrap();
    let csv_b = std::fs::read(dir_b.path().join("report.csv")).unwrap();
    assert!(!csv_a.is_empty());
    assert_eq!(csv_a, csv_b, "identical configs must produce identical CSV bytes");
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir_a.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["all_checks_pass"], true);
    let csv_text = String::from_utf8(csv_a).unwrap();
    assert!(csv_text.starts_with("h,n_e,e_H,tau_inf,a,b,c,Delta,t_star,envelope,max_margin\n"));
}

#[test]
fn converge_accepts_json_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = serde_json::json!({
        "problem": "burgers",
        "p": 2,
        "ne_list": [16, 32, 64],
        "t_frac": 0.2,
        "time_samples": 9,
        "envelope_samples": 10,
        "dt_guard": false,
        "out_dir": dir.path(),
    });
    let config_path = dir.path().join("study.json");
    std::fs::write(&config_path, serde_json::to_vec(&config).unwrap()).unwrap();
    let out = csbp().arg("converge").arg("--config").arg(&config_path).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("report.csv").exists());
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn scaling_reports_slopes() {
    let out = csbp()
        .args([
            "scaling", "--problem", "burgers", "--p", "2", "--ne-list", "32,64,128,256",
            "--time-samples", "11",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("slope(a)"));
    assert!(text.contains("all checks pass: true"));
}

#[test]
fn simulate_writes_trajectory_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = csbp()
        .args([
            "simulate", "--problem", "burgers", "--p", "3", "--ne-list", "16", "--t-frac", "0.3",
            "--snapshots", "4", "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,energy,snapshot\n"));
    assert!(csv.lines().count() > 10);
    assert_eq!(csv.matches("snapshot_").count(), 4);
    let snap = std::fs::read_to_string(dir.path().join("snapshot_003.csv")).unwrap();
    assert!(snap.starts_with("x,u0\n"));
    assert_eq!(snap.lines().count(), 1 + 48); // header + 16 elements x 3 nodes
}
