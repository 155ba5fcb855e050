use std::process::{Command, Output};

use serde_json::Value;

fn erdos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erdos")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn approx(v: &Value) -> f64 {
    v["approx"].as_str().unwrap().parse().unwrap()
}

#[test]
fn count_only() {
    let out = erdos(&["enumerate", "--q", "3", "--count-only"]);
    assert!(out.status.success());
    assert_eq!(out.stdout, b"2\n");
    let out = erdos(&["enumerate", "--q", "9", "--parity", "odd", "--count-only"]);
    assert_eq!(out.stdout, b"16\n");
}

#[test]
fn enumerate_csv_has_header_and_rows() {
    let out = erdos(&["--format", "csv", "enumerate", "--q", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank,function");
    assert_eq!(lines.len(), 7);
}

#[test]
fn lvalue_at_three() {
    let out = erdos(&["lvalue", "--q", "3", "--f", "+-0", "--k", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["metadata"]["tool"], "erdos");
    assert_eq!(v["result"]["sign"], "positive");
    let pi = std::f64::consts::PI;
    assert!((approx(&v["result"]) - pi / (3.0 * 3f64.sqrt())).abs() < 1e-12);
}

#[test]
fn moments_by_enumeration_and_partition() {
    let out = erdos(&["moments", "--q", "5", "--k", "1", "--order", "2"]);
    assert!(out.status.success());
    let m = approx(&json(&out)["result"]);
    assert!((m - 0.789568352087).abs() < 1e-9);

    let out = erdos(&["moments", "--q", "11", "--k", "1", "--order", "4", "--method", "partition"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["result"]["cross_check"]["overlap"], true);
}

#[test]
fn moments_requires_q_or_limit() {
    assert_eq!(erdos(&["moments", "--k", "1", "--order", "2"]).status.code(), Some(2));
    let out = erdos(&["moments", "--q", "5", "--limit", "--k", "1", "--order", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = erdos(&["moments", "--q", "5", "--k", "1", "--order", "65"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn montecarlo_is_seeded() {
    let args = ["moments", "--q", "101", "--k", "1", "--order", "2", "--method", "montecarlo", "--seed", "7"];
    let a = erdos(&args);
    let b = erdos(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["metadata"]["seed"], 7);
}

#[test]
fn verify_and_guard() {
    let out = erdos(&["verify", "--max-q", "15"]);
    assert!(out.status.success());
    let records = json(&out)["result"]["records"].as_array().unwrap().clone();
    assert_eq!(records.len(), 7);
    assert!(records.iter().all(|r| r["certified_zero_count"] == 0 && r["undecided_count"] == 0));
    assert_eq!(erdos(&["verify", "--max-q", "19"]).status.code(), Some(2));
}

#[test]
fn density_csv() {
    let out = erdos(&["--format", "csv", "density", "--max-q", "15", "--mode", "bound"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,numerator,denominator,ratio"));
    assert!(text.lines().last().unwrap().starts_with("15,73,4706,"));
}

#[test]
fn distribution_writes_payload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let out = erdos(&["distribution", "--q", "9", "--k", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = std::fs::read_to_string(&path).unwrap();
    assert!(rows.lines().count() > 1);
}

#[test]
fn dedekind_reciprocity() {
    let out = erdos(&["dedekind", "--a", "2,3,5", "--m", "0,0,0", "--check-reciprocity"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["result"]["reciprocity"]["holds"], true);
}

#[test]
fn csv_rejected_where_unsupported() {
    let out = erdos(&["--format", "csv", "spoly", "--u", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
