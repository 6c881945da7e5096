use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn ssl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssl")).args(args).output().expect("spawn ssl")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = ssl(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn eig_square_gives_pi_squared() {
    let r = json(&["eig", "square", "--k", "2", "--h-factor", "40"]);
    let values = r["spectrum"]["values"].as_array().unwrap();
    for k in 1..=2 {
        let mu = values[k].as_f64().unwrap();
        assert!((mu - PI * PI).abs() / (PI * PI) < 1e-3, "mu_{k} = {mu}");
    }
}

#[test]
fn report_embeds_versioned_config() {
    let r = json(&["eig", "disk", "--k", "1", "--h-factor", "20"]);
    assert_eq!(r["version"], 1);
    assert_eq!(r["config"]["version"], 1);
    assert_eq!(r["config"]["command"], "eig");
    assert_eq!(r["config"]["shape"][0], "disk");
}

#[test]
fn bad_shape_exits_with_2() {
    let out = ssl(&["eig", "blob"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown shape"));
}

#[test]
fn replay_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let args = [
        "--out",
        out_dir.to_str().unwrap(),
        "optimize",
        "interior",
        "square",
        "2",
        "--k",
        "1",
        "--strategy",
        "pwa:12",
        "--starts",
        "2",
        "--max-iter",
        "3",
        "--h-factor",
        "15",
        "--final-h-factor",
        "20",
        "--sequential",
    ];
    assert!(ssl(&args).status.success());
    for f in ["report.json", "trace.csv", "shape.svg", "shape.json"] {
        assert!(out_dir.join(f).is_file(), "{f} missing");
    }
    let first: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    let again = json(&["run", out_dir.join("report.json").to_str().unwrap()]);
    assert_eq!(first, again);
}

#[test]
fn disk_is_not_its_own_interior_minimizer_for_k3() {
    let out = ssl(&["self-domain", "disk", "--k", "3", "--mode", "interior"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains(": NO"), "{text}");
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--out", dir.path().to_str().unwrap(), "scan", "hull-square-points", "--k", "1", "--grid", "3", "--h-factor", "15"];
    assert!(ssl(&args).status.success());
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert!(csv.lines().count() >= 4, "{csv}");
}
