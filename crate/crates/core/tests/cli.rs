use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn growthfx(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growthfx"))
        .args(args)
        .current_dir(cwd)
        .env_remove("GROWTHFX_DEFAULTS")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn single_check_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = growthfx(
        &[
            "certify-bessel",
            "--alpha",
            "0.5",
            "--grid",
            "log:1e-6:1e4:500",
            "--out",
            "r.json",
            "--csv",
            "r.csv",
            "--svg",
            "r.svg",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&dir.path().join("r.json"));
    assert_eq!(r["schema_version"], "growthfx.report/1");
    assert_eq!(r["check_id"], "certify-bessel");
    assert_eq!(r["pass"], true);
    assert_eq!(r["analytic_floor"]["provenance"], "corrected-derivation");
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x_or_mu,t,lhs,rhs,ratio"));
    assert!(std::fs::read_to_string(dir.path().join("r.svg")).unwrap().contains("<svg"));
}

#[test]
fn report_goes_to_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = growthfx(&["certify-mehler", "--grid", "linear:0:10:21"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["check_id"], "certify-mehler");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_errors_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["bogus", "--out", "x.json"],
        vec![],
        vec!["certify-symspace", "--eta0", "1.0", "--out", "x.json"],
        vec!["certify-bessel", "--grid", "log:0:1:5", "--out", "x.json"],
        vec!["verify-euclid", "--corpus", "triangle", "--out", "x.json"],
    ] {
        let out = growthfx(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    std::fs::write(dir.path().join("bad.toml"), "alpha = 0.5\nwibble = 3\n").unwrap();
    let out = growthfx(&["certify-bessel", "--config", "bad.toml", "--out", "x.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files, vec!["bad.toml"]);
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = growthfx(
        &["certify-jacobi", "--alpha", "1", "--beta", "0", "--t-grid", "linear:0:30:5", "--out", "x.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn bundle_isolates_a_failing_check() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bundle.toml"),
        r#"
[[check]]
name = "strict-mehler"
command = "certify-mehler"
params = { tolerance = 1e-30 }

[[check]]
name = "bessel"
command = "certify-bessel"
params = { grid = "log:1e-6:1e4:300" }

[[check]]
name = "broken"
command = "certify-symspace"
params = { eta0 = 5.0 }
"#,
    )
    .unwrap();
    let out = growthfx(&["report-bundle", "--config", "bundle.toml", "--out", "b.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let b = json(&dir.path().join("b.json"));
    let checks = b["checks"].as_array().unwrap();
    let names: Vec<_> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["bessel", "broken", "strict-mehler"]);
    assert_eq!(checks[0]["pass"], true);
    assert_eq!(checks[1]["pass"], false);
    assert!(checks[1]["error"].as_str().unwrap().contains("eta0"));
    assert_eq!(checks[2]["pass"], false);
    assert!(checks[2]["report"]["violation_count"].as_u64().unwrap() > 0);
    assert!(dir.path().join("b_csv/bessel.csv").exists());
}

#[test]
fn empty_or_nested_bundles_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.toml"), "").unwrap();
    std::fs::write(
        dir.path().join("nested.toml"),
        "[[check]]\nname = \"inner\"\ncommand = \"report-bundle\"\n",
    )
    .unwrap();
    for cfg in ["empty.toml", "nested.toml", "missing.toml"] {
        let out = growthfx(&["report-bundle", "--config", cfg, "--out", "b.json"], dir.path());
        assert_eq!(out.status.code(), Some(2), "{cfg}");
    }
    assert!(!dir.path().join("b.json").exists());
}

#[test]
fn defaults_file_override() {
    let dir = tempfile::tempdir().unwrap();
    let text = growthfx::run::DEFAULTS_TOML.replace("version = \"2026.1\"", "version = \"test-1\"");
    std::fs::write(dir.path().join("defaults.toml"), text).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_growthfx"))
        .args(["certify-mehler", "--grid", "linear:0:5:6"])
        .current_dir(dir.path())
        .env("GROWTHFX_DEFAULTS", dir.path().join("defaults.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["params"]["defaults_version"], "test-1");
}
