//! End-to-end tests of the `funcpd` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn funcpd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_funcpd"))
        .args(args)
        .output()
        .expect("spawning funcpd")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn shift_csv(dir: &Path) -> PathBuf {
    // 40 noiseless curves with a mean jump of 2 half way through
    let mut text = String::new();
    for i in 0..40 {
        let level = if i < 20 { 0.0 } else { 2.0 };
        let row: Vec<String> = (0..11).map(|_| format!("{level}")).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write(dir, "shift.csv", &text)
}

#[test]
fn detect_rejects_a_large_shift() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let out = stdout(&funcpd(&["detect", csv.to_str().unwrap(), "--block-length", "2"]));
    assert!(out.contains("decision"));
    assert!(out.contains("reject"));
    assert!(!out.contains("fail to reject"));
    assert!(out.contains("index 20"));
}

#[test]
fn detect_json_is_reproducible_and_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let args = [
        "detect",
        csv.to_str().unwrap(),
        "--json",
        "--seed",
        "9",
        "--block-length",
        "2",
        "--delta-scan",
    ];
    let a = stdout(&funcpd(&args));
    let b = stdout(&funcpd(&args));
    assert_eq!(a, b, "identical invocations must emit byte-identical JSON");
    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["test"], "classical");
    assert_eq!(parsed["k_hat"], 20);
    assert_eq!(parsed["reject"], true);
    assert!(parsed["delta_hat_alpha"].as_f64().unwrap() > 0.0);
}

#[test]
fn norm_flag_changes_the_statistic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let get = |norm: &str| -> f64 {
        let out = stdout(&funcpd(&[
            "detect",
            csv.to_str().unwrap(),
            "--json",
            "--norm",
            norm,
            "--block-length",
            "2",
        ]));
        serde_json::from_str::<serde_json::Value>(&out).unwrap()["statistic"]
            .as_f64()
            .unwrap()
    };
    let (l1, l2, sup) = (get("l1"), get("l2"), get("sup"));
    assert!(l1 <= l2 + 1e-12 && l2 <= sup + 1e-12);
    // constant-in-t shift: all three norms coincide
    assert!((l1 - sup).abs() < 1e-9);
}

#[test]
fn relevant_subcommand_reports_minimal_delta() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let out = stdout(&funcpd(&[
        "relevant",
        csv.to_str().unwrap(),
        "--delta",
        "0.1",
        "--procedure",
        "p1",
        "--json",
        "--block-length",
        "2",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed["test"], "relevant");
    assert_eq!(parsed["procedure"], "p1");
    assert!(parsed["null_set_measure"].is_number());
    assert!(parsed["delta_hat_alpha"].as_f64().unwrap() > 0.0);
}

#[test]
fn relevant_rejects_non_l1_norm() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let out = funcpd(&[
        "relevant",
        csv.to_str().unwrap(),
        "--delta",
        "0.1",
        "--norm",
        "sup",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("L1 norm only"));
}

#[test]
fn enhanced_subcommand_runs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let out = stdout(&funcpd(&[
        "enhanced",
        csv.to_str().unwrap(),
        "--alpha-n",
        "0.05",
        "--b-eta",
        "100",
        "--json",
        "--block-length",
        "2",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed["test"], "enhanced");
    assert!(parsed["statistic"].as_f64().unwrap() >= parsed["eta"].as_f64().unwrap() * 0.0);
    assert!(parsed["enhancement_term"].as_f64().unwrap() >= 0.0);
}

#[test]
fn export_then_detect_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "scenario.conf",
        "n = 50\nm = 21\nerror_kind = light_iid\nmean_kind = const\nkappa = 2\nseed = 3\n",
    );
    let csv = dir.path().join("sample.csv");
    stdout(&funcpd(&[
        "export-scenario",
        "--spec",
        spec.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]));
    let piped = stdout(&funcpd(&["export-scenario", "--spec", spec.to_str().unwrap()]));
    assert_eq!(piped, fs::read_to_string(&csv).unwrap());
    let out = stdout(&funcpd(&["detect", csv.to_str().unwrap(), "--json"]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed["n"], 50);
    assert_eq!(parsed["m"], 21);
    assert_eq!(parsed["reject"], true);
}

#[test]
fn bandwidth_subcommand_reports_block_length() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let out = stdout(&funcpd(&["bandwidth", csv.to_str().unwrap(), "--json"]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(parsed["block_length"].as_u64().unwrap() >= 1);
    assert_eq!(parsed["n"], 40);
}

#[test]
fn simulate_runs_a_small_plan() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write(
        dir.path(),
        "plan.conf",
        "n = 30\nm = 11\nerror_kind = light_iid\nmean_kind = const\nkappa = 3\n\
         reps = 5\nreplicates = 50\nseed = 1\n",
    );
    let args = ["simulate", "--plan", plan.to_str().unwrap(), "--json"];
    let a = stdout(&funcpd(&args));
    let b = stdout(&funcpd(&args));
    assert_eq!(a, b, "identical plans must emit byte-identical JSON");
    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["rejection_rate"], 1.0);
    assert_eq!(parsed["plan"]["scenario"]["kappa"], 3.0);
    assert!(parsed.get("runtime_seconds").is_none());
}

#[test]
fn cusum_out_writes_tidy_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = shift_csv(dir.path());
    let out_path = dir.path().join("cusum.csv");
    stdout(&funcpd(&[
        "detect",
        csv.to_str().unwrap(),
        "--block-length",
        "2",
        "--cusum-out",
        out_path.to_str().unwrap(),
    ]));
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,s,l1,l2,sup"));
    assert_eq!(lines.count(), 41);
}

#[test]
fn errors_exit_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "1,2\n3,oops\n");
    let out = funcpd(&["detect", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("oops"));

    let single = write(dir.path(), "single.csv", "1,2,3\n");
    let out = funcpd(&["detect", single.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("need at least 2 curves"));

    let out = funcpd(&["detect", dir.path().join("missing.csv").to_str().unwrap()]);
    assert!(!out.status.success());
}
