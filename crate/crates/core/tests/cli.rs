use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn tm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-mirror")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_hesse_reports_cubic_coefficient() {
    let out = tm(&["verify", "--family", "hesse", "--tau", "i"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["name"], "hesse");
    assert!(report["spec_hash"].as_str().unwrap().len() == 64);
    assert!(report["params"]["tol"].is_number());
    let mu = &report["observations"]["cubic_coefficient"];
    let re = mu[0].as_f64().unwrap();
    assert!((re - (3.0 + 3.0 * 3f64.sqrt())).abs() < 1e-9, "{mu}");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn kummer_invariant_basis_has_twenty_rows_at_level_three() {
    let out = tm(&["--builtin", "kummer-generic", "basis", "--k", "3", "--invariant"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);

    let out = tm(&["--builtin", "kummer-degenerate", "basis", "--k", "3", "--invariant", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn hesse_has_no_quadratic_relations() {
    let out = tm(&["--builtin", "hesse", "relations", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["relations"].as_array().unwrap().is_empty());
    assert_eq!(v["words"].as_array().unwrap().len(), 6);
}

#[test]
fn sklyanin_noncommutative_relations() {
    let out = tm(&["--builtin", "sklyanin", "relations", "--degree", "2", "--noncommutative"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["relations"].as_array().unwrap().len(), 3);
}

#[test]
fn quasihomogeneous_sextic_via_weighted_generators() {
    let out = tm(&["--builtin", "quasihomogeneous", "relations", "--degree", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["generators"], serde_json::json!(["X", "Y", "Z"]));
    assert_eq!(v["relations"].as_array().unwrap().len(), 1);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &std::path::Path| {
        vec!["verify".to_string(), "--family".into(), "all".into(), "--terms".into(), "4".into(), "--out".into(), p.display().to_string()]
    };
    let run = |p: &std::path::Path, jobs: &str| {
        let mut v = args(p);
        v.extend(["--jobs".to_string(), jobs.to_string()]);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        tm(&refs)
    };
    assert_eq!(run(&a, "1").status.code(), Some(0));
    assert_eq!(run(&b, "3").status.code(), Some(0));
    let ta = fs::read(&a).unwrap();
    assert_eq!(ta, fs::read(&b).unwrap());
    let reports: Vec<Value> = serde_json::from_slice(&ta).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 7);
}

#[test]
fn spec_file_and_product() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n3.spec");
    fs::write(&path, "M = 1\nB = 0\nN = 3\n").unwrap();
    let p = path.display().to_string();
    let out = tm(&["--spec", &p, "product", "--left", "0@1", "--right", "1/3@1", "--mirror"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["level"], 2);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    assert!(v["mirror"]["max_difference"].as_f64().unwrap() < 1e-10);

    let out = tm(&["--spec", &p, "check"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    // unknown flag
    assert_eq!(tm(&["check", "--frobnicate"]).status.code(), Some(2));
    // missing spec
    assert_eq!(tm(&["basis", "--k", "1"]).status.code(), Some(2));
    // bad tau
    assert_eq!(tm(&["verify", "--family", "hesse", "--tau", "nonsense"]).status.code(), Some(2));

    // failing torus condition: N^T M not positive definite
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.spec");
    fs::write(&path, "M = -1\nN = 3\n").unwrap();
    let out = tm(&["--spec", &path.display().to_string(), "check"]);
    assert_eq!(out.status.code(), Some(1));

    // the series cannot reach the tolerance inside the radius cap
    let out = tm(&["--max-radius", "1", "--tol", "1e-300", "verify", "--family", "hesse"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_report_rows() {
    let out = tm(&["verify", "--family", "veronese", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("report,id,residual,tolerance,pass"));
    assert!(lines.all(|l| l.starts_with("veronese,") && l.ends_with(",true")));
}
