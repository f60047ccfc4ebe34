use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simlabel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const LINE: &str = r#"{"version": 1, "kind": "similar",
  "space": {"type": "points", "metric": "l1", "dim": 1},
  "sets": [[[0], [10]], [[1]], [[2]]]}"#;

const TWO_NODE: &str = r#"{"version": 1, "kind": "labeling",
  "space": {"type": "matrix", "distances": [[0, 1], [1, 0]]},
  "node_costs": [[0, 5], [3, 0]]}"#;

#[test]
fn solve_line_instance_with_exact() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "line.json", LINE);
    let out = run(&["solve", p.to_str().unwrap(), "--with-exact", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ratio"], 1.0);
    assert_eq!(v["root"], 1);
    assert_eq!(v["objective"], 8.0);
    assert_eq!(v["exact"]["objective"], 8.0);
    assert_eq!(v["guarantee_ok"], true);
    assert_eq!(v["per_root_star_values"], serde_json::json!([3.0, 2.0, 3.0]));
    assert!(v["timings"]["per_root_dp_secs"].is_number());
}

#[test]
fn solve_two_node_labeling() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "ab.json", TWO_NODE);
    let out = run(&["solve", p.to_str().unwrap(), "--problem", "labeling", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["objective"], 1.0);
    assert_eq!(v["assignment"], serde_json::json!([0, 1]));
    assert!(v["root"].is_u64());

    let text = run(&["solve", p.to_str().unwrap()]);
    assert!(stdout(&text).contains("objective   1"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("g.json");
    let gen = run(&[
        "gen", "--family", "points", "--n", "40", "--k", "5", "--seed", "3", "--out",
        p.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_str(&stdout(o)).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let one = run(&["solve", p.to_str().unwrap(), "--output", "json", "--threads", "1"]);
    let four = run(&["solve", p.to_str().unwrap(), "--output", "json", "--threads", "4"]);
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn problem_mismatch_is_input_error() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "ab.json", TWO_NODE);
    let out = run(&["solve", p.to_str().unwrap(), "--problem", "similar"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_file_exits_1() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "bad.json", r#"{"version": 1, "kind": "similar", "sets": 3}"#);
    let out = run(&["solve", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("schema error"), "{}", stderr(&out));

    let missing = run(&["solve", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn guarantee_violation_exits_2() {
    // not a metric; validation is skipped so the factor-2 bound can fail
    let text = r#"{"version": 1, "kind": "similar", "skip_validation": true,
      "space": {"type": "matrix", "distances": [[0, 10, 100, 0], [10, 0, 1, 1], [100, 1, 0, 1], [0, 1, 1, 0]]},
      "sets": [[0, 1], [2], [3]]}"#;
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "nonmetric.json", text);
    let out = run(&["solve", p.to_str().unwrap(), "--with-exact", "--output", "json"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["objective"], 202.0);
    assert_eq!(v["exact"]["objective"], 6.0);
    assert_eq!(v["guarantee_ok"], false);

    let validate = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(validate.status.code(), Some(1));
    assert!(stdout(&validate).contains("d(0,2) > d(0,1) + d(1,2)"));
}

#[test]
fn validate_valid_matrix() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "ab.json", TWO_NODE);
    let out = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "valid");
}

#[test]
fn validate_reports_witness_as_json() {
    let text = r#"{"version": 1, "kind": "labeling",
      "space": {"type": "matrix", "distances": [[0, 1], [2, 0]]}, "node_costs": [[0, 0]]}"#;
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "asym.json", text);
    let out = run(&["validate", p.to_str().unwrap(), "--output", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0], serde_json::json!({"axiom": "asymmetry", "p": 0, "q": 1}));
}

#[test]
fn exact_over_budget_exits_1() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "line.json", LINE);
    let out = run(&["exact", p.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("budget"));

    let ok = run(&["exact", p.to_str().unwrap(), "--output", "json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["objective"], 8.0);
    assert_eq!(v["enumerated_count"], 2);
}

#[test]
fn gen_then_solve_pipeline() {
    let dir = TempDir::new().unwrap();
    for family in ["points", "random-metric", "strings"] {
        for problem in ["similar", "labeling"] {
            let p = dir.path().join(format!("{family}-{problem}.json"));
            let gen = run(&[
                "gen", "--family", family, "--problem", problem, "--n", "5", "--k", "3", "--seed",
                "11", "--masks", "--out", p.to_str().unwrap(),
            ]);
            assert!(gen.status.success(), "{}", stderr(&gen));
            let out = run(&["solve", p.to_str().unwrap(), "--with-exact", "--output", "json"]);
            assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
            let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
            assert!(v["ratio"].as_f64().unwrap() <= 2.0 + 1e-9);
        }
    }
}

#[test]
fn gen_is_deterministic_on_stdout() {
    let args = ["gen", "--family", "strings", "--n", "4", "--k", "2", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("}\n"));
}

#[test]
fn bench_single_cell() {
    let out = run(&[
        "bench", "--family", "points", "--n-list", "8", "--k-list", "3", "--reps", "1", "--output",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn bench_reports_slopes() {
    let out = run(&["bench", "--n-list", "10,20", "--k-list", "3,6", "--reps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("slope vs n (k=3)"));
    assert!(s.contains("slope vs k (n=20)"));
}

#[test]
fn bench_rejects_empty_grid() {
    let out = run(&["bench", "--n-list", "0", "--k-list", "3"]);
    assert_eq!(out.status.code(), Some(1));
}
