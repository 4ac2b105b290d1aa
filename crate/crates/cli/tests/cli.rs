use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz-kit")).args(args).env_remove("ORLICZ_KIT_THREADS").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sobolev_conjugate_of_the_square_at_one() {
    let out = kit(&["target", "sobolev-conjugate", "--A", "powerlog:p=2", "--n", "2", "--s", "0.5", "--at", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out)["result"]["value"][0].as_f64().unwrap();
    assert!((v - 8.0 / 27.0).abs() < 1e-6, "{v}");
}

#[test]
fn luxemburg_norm_of_an_indicator() {
    let out = kit(&["norm", "luxemburg", "--A", "powerlog:p=2", "--f", "chi:0,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out)["result"]["value"].as_f64().unwrap();
    assert!((v - 2f64.sqrt()).abs() < 1e-9, "{v}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(kit(&["transmogrify"]).status.code(), Some(2));
    assert_eq!(kit(&["young", "eval", "--A", "nonsense:1", "--at", "1"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"seed": 1, "no_such_key": 3}"#).unwrap();
    assert_eq!(kit(&["--config", cfg.to_str().unwrap(), "suite", "lemma"]).status.code(), Some(2));
    fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(kit(&["--config", cfg.to_str().unwrap(), "suite", "lemma"]).status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_orlicz-kit"))
        .args(["young", "eval", "--A", "power:2", "--at", "1"])
        .env("ORLICZ_KIT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn failed_check_exits_with_one() {
    // a tolerance far below rounding makes the exactness checks fail
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("tight.json");
    fs::write(&cfg, r#"{"tolerances": {"exactness": 1e-30}}"#).unwrap();
    let out = kit(&["--config", cfg.to_str().unwrap(), "--out", dir.path().join("r").to_str().unwrap(), "suite", "exactness"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = read_json(&dir.path().join("r/report.json"));
    assert_eq!(doc["pass"], Value::Bool(false));
    assert_eq!(doc["suites"][0]["rows"][0]["tolerance"].as_f64(), Some(1e-30));
}

#[test]
fn command_without_checks_reports_zero_checks() {
    let dir = TempDir::new().unwrap();
    let out = kit(&["--out", dir.path().to_str().unwrap(), "young", "eval", "--A", "power:3", "--at", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = read_json(&dir.path().join("report.json"));
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["checks"], 0);
    assert_eq!(doc["suites"].as_array().unwrap().len(), 0);
}

#[test]
fn polya_suite_writes_one_row_per_trial() {
    let dir = TempDir::new().unwrap();
    let out = kit(&["--out", dir.path().to_str().unwrap(), "suite", "polya"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = read_json(&dir.path().join("report.json"));
    assert_eq!(doc["passed"], 200);
    let mut rows = csv::Reader::from_path(dir.path().join("trials.csv")).unwrap();
    assert_eq!(rows.records().count(), 200);
}

#[test]
fn fixed_seed_reproduces_the_report() {
    let dir = TempDir::new().unwrap();
    let run = |sub: &str| {
        let d = dir.path().join(sub);
        let out = kit(&["--seed", "7", "--out", d.to_str().unwrap(), "suite", "lemma"]);
        assert_eq!(out.status.code(), Some(0));
        let mut doc = read_json(&d.join("report.json"));
        doc.as_object_mut().unwrap().remove("generated_at");
        doc["config"].as_object_mut().unwrap().remove("output");
        (doc, fs::read(d.join("trials.csv")).unwrap(), fs::read(d.join("plots.csv")).unwrap())
    };
    let (first, second) = (run("a"), run("b"));
    assert_eq!(first.0, second.0);
    assert_eq!(first.1, second.1);
    assert_eq!(first.2, second.2);
    assert_eq!(first.0["config"]["seed"], 7);
}

#[test]
fn target_sweep_plots_one_row_per_s() {
    let dir = TempDir::new().unwrap();
    let out = kit(&["--out", dir.path().to_str().unwrap(), "suite", "thma-sweep"]);
    assert_eq!(out.status.code(), Some(0));
    let mut plots = csv::Reader::from_path(dir.path().join("plots.csv")).unwrap();
    let headers = plots.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h.contains("constant")), "{headers:?}");
    let xs: Vec<f64> = plots.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(xs, vec![0.25, 0.4, 0.5, 0.6, 0.75, 0.9]);
}

#[test]
fn suite_list_names_every_suite() {
    let out = kit(&["suite", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let names = String::from_utf8(out.stdout).unwrap();
    for n in ["exactness", "polya", "lemma", "thma-sweep", "extension"] {
        assert!(names.lines().any(|l| l == n), "{n}");
    }
}
