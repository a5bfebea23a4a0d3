//! End-to-end runs of the `cstar-check` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cstar-check"));
    c.env_remove("CSTAR_TOLERANCES");
    c
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report on stdout")
}

#[test]
fn orthonormal_basis_with_diagonal_symbol_verifies() {
    let out = bin().arg("run").arg(scenario("orthonormal_diagonal.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["checks"][0]["certificate"]["verdict"], "verified");
    assert_eq!(r["checks"][0]["theorem"], "riesz_invertibility");
    assert_eq!(r["summary"]["VIOLATION"], 0);
}

#[test]
fn undefined_reference_exits_with_input_error() {
    let out = bin().arg("run").arg(scenario("undefined_reference.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "unresolved_reference");
    assert_eq!(err["name"], "F");
}

#[test]
fn missing_file_and_malformed_json_are_input_errors() {
    let out = bin().args(["run", "/nonexistent/scenario.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"algebra\": [1],\n  \"rank\": -1\n}\n").unwrap();
    let out = bin().arg("run").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "parse");
    assert_eq!(err["line"], 3);
    assert_eq!(err["field"], "rank");
}

#[test]
fn mixed_algebra_scenario_verifies_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bin()
        .arg("run")
        .arg(scenario("mixed_algebra.json"))
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["summary"]["unexpected"], 0);
    assert_eq!(r["checks"].as_array().unwrap().len(), 4 + 10);
}

#[test]
fn run_is_deterministic_and_seed_sensitive() {
    let run = |seed: &str| {
        bin()
            .arg("run")
            .arg(scenario("mixed_algebra.json"))
            .args(["--seed", seed, "--trials", "5"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn tolerance_override_is_echoed_and_validated() {
    let out = bin()
        .arg("run")
        .arg(scenario("orthonormal_diagonal.json"))
        .env("CSTAR_TOLERANCES", r#"{"residual": 1e-9}"#)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["environment"]["tolerance_source"], "env:CSTAR_TOLERANCES");
    assert_eq!(r["environment"]["tolerances"]["residual"], 1e-9);

    let out = bin()
        .arg("suite")
        .env("CSTAR_TOLERANCES", r#"{"residual": 1e-20}"#)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generated_fragment_runs_as_a_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let frag = dir.path().join("frag.json");
    let out = bin()
        .args(["gen", "dual_pair", "--algebra", "2,1", "--rank", "2", "--len", "4", "--seed", "9", "--out"])
        .arg(&frag)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    // add a check against the emitted literals and run it
    let mut sc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&frag).unwrap()).unwrap();
    sc["objects"]["I"] = serde_json::json!({ "kind": "identity", "len": 4 });
    sc["checks"] = serde_json::json!([
        { "theorem": "dual_frame", "x": "gen_x", "dual": "gen_dual", "u": "I", "expect": "verified" }
    ]);
    let full = dir.path().join("scenario.json");
    std::fs::write(&full, sc.to_string()).unwrap();
    let out = bin().arg("run").arg(&full).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    // same seed, same bytes
    let again = dir.path().join("again.json");
    bin()
        .args(["gen", "dual_pair", "--algebra", "2,1", "--rank", "2", "--len", "4", "--seed", "9", "--out"])
        .arg(&again)
        .output()
        .unwrap();
    assert_eq!(std::fs::read(&frag).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn infeasible_generator_is_an_input_error() {
    let out = bin()
        .args(["gen", "riesz_basis", "--rank", "3", "--len", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "invalid_generator");
}

#[test]
fn violation_in_a_literal_scenario_exits_one() {
    // U = diag(0,1) makes the contraction estimate fail for a dual pair whose
    // dual Bessel bound exceeds the frame's: a genuine counterexample
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    std::fs::write(
        &path,
        r#"{
          "algebra": [1], "rank": 2,
          "objects": {
            "X": { "kind": "frame", "vectors": [[0.5, 0], [0, 0.5]] },
            "Xd": { "kind": "frame", "vectors": [[2, 0], [0, 2]] },
            "U": { "kind": "diagonal", "entries": [0, 1] }
          },
          "checks": [ { "theorem": "dual_frame", "x": "X", "dual": "Xd", "u": "U" } ]
        }"#,
    )
    .unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    let r = json(&out);
    assert_eq!(r["checks"][0]["certificate"]["verdict"], "VIOLATION", "{r}");
    assert_eq!(out.status.code(), Some(1));
}
