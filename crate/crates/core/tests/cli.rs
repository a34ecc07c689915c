use std::path::Path;
use std::process::{Command, Output};

use cliffordlab::report::{Report, SCHEMA};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliffordlab"))
        .args(args)
        .env("CLIFFORDLAB_JOBS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn write_poly(dir: &Path, name: &str, polys: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, format!(r#"{{"vars": ["x"], "polys": {polys}}}"#)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_main_d3_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["verify-main", "-d", "3", "--jobs", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["passed"], true);
    assert_eq!(v["T_count"], 20736);
    assert_eq!(v["workers"], 2);
    assert_eq!(v["violations"], Value::Array(vec![]));
    assert_eq!(v["details"]["pinned_T_count"], 20736);
}

#[test]
fn verify_main_other_checks() {
    for check in ["extraneous", "ef-cover"] {
        let out = run(&["verify-main", "-d", "3", "--check", check]);
        assert_eq!(code(&out), 0, "{check}");
        assert_eq!(report(&out).t_count, Some(20736));
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify-main", "-d", "4"][..],
        &["verify-main", "-d", "5"],
        &["verify-main", "--jobs", "0"],
        &["sample-ef", "-d", "9"],
        &["teleport-demo", "-d", "11"],
        &["frobnicate"],
        &[],
        &["verify-certificate", "--ideal", "/nonexistent.json", "--components", "/nonexistent.json"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn check_minors_reports_all_zero() {
    let out = run(&["check-minors"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r.details["minor_count"], 28);
    assert!(r.notes[0].starts_with("28 minors, all zero"));
}

#[test]
fn derive_ef_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ef.json");
    let out = run(&["derive-ef", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.details["E_terms"], 112);
    assert_eq!(r.details["E_degree"], 8);
    assert_eq!(r.details["F_degree"], 5);
    assert_eq!(r.details["polys"]["polys"].as_array().unwrap().len(), 2);
    assert!(r.details["spot_checks"].as_u64().unwrap() > 150);
}

#[test]
fn sample_ef_is_reproducible() {
    let a = run(&["sample-ef", "-d", "5", "-n", "2000", "--seed", "9"]);
    let b = run(&["sample-ef", "-d", "5", "-n", "2000", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(report(&a).content_json(), report(&b).content_json());
    assert_eq!(report(&a).details["stats"]["consistent"], 2000);
    let c = run(&["sample-ef", "-d", "5", "-n", "2000", "--seed", "10"]);
    assert_ne!(report(&a).content_json(), report(&c).content_json());
}

#[test]
fn teleport_demo_trace() {
    let a = run(&["teleport-demo", "--seed", "4", "--instances", "3"]);
    let b = run(&["teleport-demo", "--seed", "4", "--instances", "3"]);
    assert_eq!(code(&a), 0);
    let r = report(&a);
    assert_eq!(r.content_json(), report(&b).content_json());
    let trials = r.details["trials"].as_array().unwrap();
    assert_eq!(trials.len(), 3);
    for t in trials {
        for f in t["fidelities"].as_array().unwrap() {
            assert!((f.as_f64().unwrap() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn certificates() {
    let dir = tempfile::tempdir().unwrap();
    let ideal = write_poly(dir.path(), "i.json", r#"[[{"c": "1", "e": [2]}, {"c": "1", "e": [1]}]]"#);
    let c1 = write_poly(dir.path(), "c1.json", r#"[[{"c": "1", "e": [1]}]]"#);
    let c2 = write_poly(dir.path(), "c2.json", r#"[[{"c": "1", "e": [1]}, {"c": "1", "e": [0]}]]"#);
    let sq = write_poly(dir.path(), "sq.json", r#"[[{"c": "1", "e": [2]}]]"#);

    let out = run(&["verify-certificate", "--ideal", &ideal, "--components", &c1, &c2, "--primes", "3,5,7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out).details["domains"], serde_json::json!(["Q", "Z_3", "Z_5", "Z_7"]));

    let out = run(&["verify-certificate", "--ideal", &c1, "--components", &sq, "--exact-cofactors"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r.violations[0]["witness"], "x");
    assert_eq!(r.violations[0]["domain"], "Q");

    let bad = write_poly(dir.path(), "bad.json", r#"[[{"c": "1", "e": [1, 2]}]]"#);
    assert_eq!(code(&run(&["verify-certificate", "--ideal", &bad, "--components", &c1])), 2);
    let out = run(&["verify-certificate", "--ideal", &ideal, "--components", &c1, "--primes", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let out = run(&["selftest", "--out", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.passed);
    assert_eq!(r.details["criteria"].as_array().unwrap().len(), 11);
}
