use std::path::Path;
use std::process::{Command, Output};

use growthlab::census::CensusReport;
use growthlab::cli::{emit_plotdata, PlotKind, PlotSource};
use growthlab::schemes::NuSequence;
use serde_json::Value;

fn growthlab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growthlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn growthlab")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text
        .lines()
        .rev()
        .find(|l| l.starts_with('{'))
        .expect("json diagnostic");
    serde_json::from_str(line).expect("valid json")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn scheme_file_feeds_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = growthlab(
        dir.path(),
        &["scheme", "--scheme", "remark32", "--k-max", "3"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "csv"))
        .expect("scheme csv");

    let check_dir = tempfile::tempdir().unwrap();
    let out = growthlab(
        check_dir.path(),
        &[
            "check",
            "--scheme-file",
            csv.to_str().unwrap(),
            "--kind",
            "L2_LOG",
            "--weight",
            "logpower:0.5",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m = manifest(check_dir.path());
    assert_eq!(m["subcommand"], "check");
    assert_eq!(m["status"], "ok");
    assert!(check_dir.path().join("score_plot.dat").exists());
}

#[test]
fn unknown_subcommand_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = growthlab(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let diag = stderr_json(&out);
    assert_eq!(diag["error"], "UNKNOWN_SUBCOMMAND");
    assert!(diag["message"].as_str().unwrap().contains("frobnicate"));
}

#[test]
fn missing_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = growthlab(dir.path(), &["run", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"].is_string());
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"scheme": {"scheme": "remark32", "k_max": 2}, "model": {"kind": "rademacher"}, "seed": 1, "trials": 4, "radii": {"rule": "explicit", "radii": [0.5]}, "bogus": 1}"#,
    )
    .unwrap();
    let out = growthlab(dir.path(), &["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let diag = stderr_json(&out);
    assert_eq!(diag["error"], "CONFIG_INVALID");
    assert!(diag["message"].as_str().unwrap().contains("bogus"));
}

#[test]
fn growth_reproduces_from_its_config() {
    let first = tempfile::tempdir().unwrap();
    let out = growthlab(
        first.path(),
        &[
            "--seed", "7", "--trials", "6", "growth", "--scheme", "remark32", "--k-max", "3",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m = manifest(first.path());
    assert_eq!(m["status"], "ok");
    assert_eq!(m["seed"], 7);

    let second = tempfile::tempdir().unwrap();
    let config = first.path().join("config.json");
    let out = growthlab(
        second.path(),
        &["run", "--config", config.to_str().unwrap()],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a = std::fs::read(first.path().join("report.json")).unwrap();
    let b = std::fs::read(second.path().join("report.json")).unwrap();
    assert_eq!(a, b);
    assert_eq!(manifest(second.path())["config_hash"], m["config_hash"]);
}

#[test]
fn domain_error_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = growthlab(dir.path(), &["weights", "--ratio-A", "0.5"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(stderr_json(&out)["error"].is_string());
}

#[test]
fn plot_kind_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let report = CensusReport {
        p: NuSequence::Log,
        rows: vec![],
    };
    let err = emit_plotdata(&PlotSource::Census(&report), PlotKind::Score, dir.path()).unwrap_err();
    assert_eq!(err.code(), "KIND_MISMATCH");
}
