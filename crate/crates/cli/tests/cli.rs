use std::path::PathBuf;
use std::process::Command;

use mukai_cli::{run, Outcome};
use serde_json::Value;

fn mukai(args: &[&str]) -> Outcome {
    let mut full = vec!["mukai"];
    full.extend_from_slice(args);
    run(full)
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

/// Re-emits parsed output and compares bytes.
fn assert_roundtrip(out: &Outcome) {
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let again = mukai_core::json::to_canonical_string(&v).unwrap() + "\n";
    assert_eq!(again, out.stdout);
}

const OMEGA: &str = r#"{"r":0,"c1":[0,0,0,0,0,0],"a":1}"#;

#[test]
fn classify_from_data_file() {
    let out = mukai(&["classify", "--v", &data("rank2_indecomposable.json")]);
    let v = json(&out);
    assert_eq!(v["mukai_square"], "10");
    assert_eq!(v["dim_moduli"], "12");
    assert_eq!(v["indecomposable"], true);
    assert_eq!(v["perp"]["gram"], serde_json::json!([["-2", "-1"], ["-1", "2"]]));
    assert!(v["verdict"].as_str().unwrap().contains("Hilb^5"));
    assert_roundtrip(&out);
}

#[test]
fn classify_with_surface_flag() {
    let out = mukai(&["--surface", "ns1:4", "classify", "--v", r#"{"r":2,"c1":[1],"a":1}"#]);
    let v = json(&out);
    assert_eq!(v["regime"], "4");
    assert_eq!(v["kummer_k3"]["case_tag"], "I-odd-a");
}

#[test]
fn pair_mismatched_dimensions() {
    let out = mukai(&["pair", "--x", r#"{"r":1,"c1":[0,0],"a":0}"#, "--y", OMEGA]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--x") && out.stderr.contains("dimension mismatch"), "{}", out.stderr);
}

#[test]
fn pair_values() {
    let out = mukai(&["pair", "--x", r#"{"r":1,"c1":"f1","a":0}"#, "--y", r#"{"r":"1","c1":"f2","a":3}"#]);
    let v = json(&out);
    assert_eq!(v["pairing"], "-2");
    assert_eq!(v["euler_chi"], "2");
    assert_roundtrip(&out);
}

#[test]
fn malformed_json_reports_location() {
    let out = mukai(&["pair", "--x", r#"{"r":1,"c1":[0,0,0,0,0,0],"a":0"#, "--y", OMEGA]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1 column"), "{}", out.stderr);
}

#[test]
fn unknown_label_is_input_error() {
    let out = mukai(&["fm", "--x", r#"{"r":0,"c1":"f3","a":0}"#]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("f3"));
    let out = mukai(&["oracle-integrals", "--n", "3", "--pattern", "l^4", "--l", "h"]);
    assert_eq!(out.code, 2);
}

#[test]
fn missing_file_is_input_error() {
    let out = mukai(&["classify", "--v", "/nonexistent/v.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("cannot read"));
}

#[test]
fn kummer_vector_report() {
    let out = mukai(&["kummer-vector", "--r", "2", "--d", "1", "--n", "4", "--a", "1"]);
    let v = json(&out);
    assert_eq!(v["w"]["case_tag"], "I-odd-a");
    assert_eq!(v["w"]["xi_square"], "-4");
    assert_eq!(v["w"]["b"], "-1");
    for (_, ok) in v["checks"].as_object().unwrap() {
        assert_eq!(ok, true);
    }
    assert_roundtrip(&out);

    let out = mukai(&["kummer-vector", "--r", "2", "--d", "1", "--n", "1", "--a", "-1"]);
    assert_eq!(out.code, 2, "n odd with r even is rejected");
}

#[test]
fn fm_point_class() {
    let out = mukai(&["fm", "--dir", "forward", "--x", OMEGA]);
    let v = json(&out);
    assert_eq!(v["output"]["r"], "1");
    assert_eq!(v["roundtrip"], true);
    let out = mukai(&["fm", "--dir", "inverse", "--x", r#"{"r":1,"c1":[0,0,0,0,0,0],"a":0}"#]);
    assert_eq!(json(&out)["output"]["a"], "1");
}

#[test]
fn theta_coordinates() {
    let input = r#"{"theta":{"t":{"r":2,"r1":1,"d":1,"d1":0,"n":3},"x":{"r":0,"c1":[0,0,1,0,0,0],"a":0}}}"#;
    let out = mukai(&["theta", "--input", input]);
    let v = json(&out);
    assert_eq!(v["q"], v["x_square"]);
    assert_eq!(v["isometry"], true);
    assert_eq!(v["y"][3], "0");
    assert_roundtrip(&out);

    // r₁, d₁ filled in from the companion solution
    let input = r#"{"t":{"r":2,"d":1,"n":3},"x":{"r":0,"c1":[0,0,1,0,0,0],"a":0}}"#;
    assert_eq!(json(&mukai(&["theta", "--input", input]))["t"]["r1"], "1");

    let bad = r#"{"theta":{"t":{"r":2,"r1":1,"d":1,"d1":0,"n":3},"x":{"r":1,"c1":[0,0,0,0,0,0],"a":1}}}"#;
    assert_eq!(mukai(&["theta", "--input", bad]).code, 2);
}

#[test]
fn oracle_integrals_subcommand() {
    let out = mukai(&["oracle-integrals", "--n", "3", "--pattern", "l^2 e^2", "--l", "f1+f2"]);
    let v = json(&out);
    assert_eq!(v["oracle"], "-36");
    assert_eq!(v["match"], true);
    assert_roundtrip(&out);

    let out = mukai(&["oracle-integrals", "--n", "3", "--pattern", "l^2 x^2", "--l", "f1+f2", "--x", "f1-f2"]);
    assert_eq!(json(&out)["match"], true);

    let out = mukai(&["oracle-integrals", "--n", "3", "--pattern", "l^2 x^2", "--l", "f1+f2"]);
    assert_eq!(out.code, 2, "x is required");
    let out = mukai(&["oracle-integrals", "--n", "3", "--pattern", "l^3", "--l", "f1"]);
    assert_eq!(out.code, 2, "degree mismatch");
    let out = mukai(&["--n-max", "3", "oracle-integrals", "--n", "4", "--pattern", "l^6", "--l", "f1"]);
    assert_eq!(out.code, 2, "beyond n_max");
}

#[test]
fn fujiki_subcommand() {
    let out = mukai(&["fujiki-check", "--n", "3", "--l", "f1+f2", "--x", "f1-f2", "--k", "-1"]);
    let v = json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["q_x"], "-8");
}

#[test]
fn perp_subcommand() {
    let out = mukai(&["perp", "--v", OMEGA]);
    let v = json(&out);
    assert_eq!(v["orthogonal"], true);
    assert_eq!(v["perp"]["gram"].as_array().unwrap().len(), 7);
    assert_eq!(v["discriminant"], "0");
}

#[test]
fn selftest_is_deterministic() {
    let args = ["--seed", "11", "selftest", "--samples", "10"];
    let (a, b) = (mukai(&args), mukai(&args));
    assert_eq!(json(&a)["passed"], true);
    assert_eq!(a, b);
}

#[test]
fn text_format() {
    let out = mukai(&["--format", "text", "classify", "--v", &data("rank2_indecomposable.json")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().next().unwrap().contains("dim M = 12"));
    assert!(out.stdout.contains("indecomposable: true"));
}

#[test]
fn usage_errors() {
    assert_eq!(mukai(&["frobnicate"]).code, 2);
    assert_eq!(mukai(&["pair", "--x", OMEGA]).code, 2);
    assert_eq!(mukai(&["--help"]).code, 0);
}

#[test]
fn binary_reads_n_max_from_environment() {
    let bin = env!("CARGO_BIN_EXE_mukai");
    let out = Command::new(bin)
        .args(["oracle-integrals", "--n", "4", "--pattern", "l^6", "--l", "f1+f2"])
        .env("MUKAI_N_MAX", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin)
        .args(["oracle-integrals", "--n", "3", "--pattern", "l^4", "--l", "f1+f2"])
        .env("MUKAI_N_MAX", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["oracle"], "36");
}
