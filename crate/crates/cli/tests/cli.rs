use std::process::{Command, Output};

use serde_json::{json, Value};

fn planeaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planeaut")).args(args).output().expect("binary runs")
}

fn parsed(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const SHEAR_FAMILY: &str =
    r#"{"group": {"kind": "cyclic", "orders": [2]}, "field": "Q(x)", "generators": [{"components": ["-z1 + 2*x*z2^2", "z2"]}]}"#;

#[test]
fn identity_has_empty_polydegree() {
    let out = planeaut(&["polydegree", r#"{"field": "Q", "components": ["z1", "z2"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(parsed(&out), json!({"polydegree": []}));
}

#[test]
fn non_automorphism_exits_3() {
    let out = planeaut(&["decompose", r#"{"field": "Q", "components": ["z1", "z1*z2"]}"#]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(parsed(&out)["error"], "NotAnAutomorphism");
}

#[test]
fn schema_problems_exit_2() {
    let out = planeaut(&["invert", "{not json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(parsed(&out)["error"], "SchemaError");
    let out = planeaut(&["invert", r#"{"field": "Q(", "components": ["z1", "z2"]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(planeaut(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(planeaut(&["selftest", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn compose_then_invert() {
    let f = r#"{"field": "Q", "components": ["z1 + z2^3", "z2"]}"#;
    let out = planeaut(&["invert", f]);
    assert_eq!(out.status.code(), Some(0));
    let inv = parsed(&out);
    assert_eq!(inv["components"][0], json!([[[1, 0], "1"], [[0, 3], "-1"]]));
    let pair = json!({"f": serde_json::from_str::<Value>(f).unwrap(), "g": inv}).to_string();
    let id = parsed(&planeaut(&["compose", &pair]));
    assert_eq!(id["components"], json!([[[[1, 0], "1"]], [[[0, 1], "1"]]]));
}

#[test]
fn decomposition_lists_the_word() {
    let out = planeaut(&["decompose", r#"{"field": "Q(zeta_3)", "components": ["z1 + zeta*z2^2", "z2 + 1"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = parsed(&out);
    assert_eq!(v["polydegree"], json!([2]));
    assert_eq!(v["field"], "Q(zeta_3)");
    assert_eq!(v["word"].as_array().unwrap().len(), 3);
}

#[test]
fn field_flag_supplies_missing_descriptor() {
    let out = planeaut(&["--field", "Q(zeta_4)", "polydegree", r#"{"components": ["z1 + zeta*z2^2", "z2"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(parsed(&out), json!({"polydegree": [2]}));
}

#[test]
fn centralizer_reports_structure() {
    let out = planeaut(&["centralizer", "--weight", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = planeaut(&["centralizer", "--polydegree", "2", "--k", "3", "--weight", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = parsed(&out);
    assert_eq!(v["group"], json!({"a": 2, "b": 1, "k": 3}));
    assert!(v["case"].is_string());
}

#[test]
fn linearize_cyclic_group() {
    let g = r#"{"kind": "cyclic", "orders": [2], "field": "Q", "generators": [{"components": ["-z1 + z2^2", "z2"]}]}"#;
    let out = planeaut(&["linearize", g]);
    assert_eq!(out.status.code(), Some(0));
    let v = parsed(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["rho"], json!([[["-1", "0"], ["0", "1"]]]));
}

#[test]
fn remove_pole_at_origin() {
    let req = r#"{"psi": {"field": "Q(x)", "components": ["z1 + z2^2/x", "z2"]}, "rho": [[["1", "0"], ["0", "-1"]]]}"#;
    let out = planeaut(&["remove-pole", "--at", "0", req]);
    assert_eq!(out.status.code(), Some(0));
    let v = parsed(&out);
    assert_eq!(v["psi"]["components"][0], json!([[[1, 0], "1"], [[0, 2], "1"]]));
    let w: Vec<Value> = v["trace"].as_array().unwrap().iter().map(|s| s["w"].clone()).collect();
    assert_eq!(w, vec![json!([3, 1]), json!([1, 0])]);
}

#[test]
fn family_report_verifies_and_tamper_fails() {
    let out = planeaut(&["family", SHEAR_FAMILY]);
    assert_eq!(out.status.code(), Some(0));
    let report = parsed(&out);
    assert_eq!(report["verified"], true);
    let family: Value = serde_json::from_str(SHEAR_FAMILY).unwrap();
    let req = json!({"family": family, "report": report}).to_string();
    assert_eq!(planeaut(&["verify", &req]).status.code(), Some(0));
    let mut bad = report.clone();
    bad["psi"]["components"] = json!(["z1", "z2"]);
    let req = json!({"family": family, "report": bad}).to_string();
    let out = planeaut(&["verify", &req]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(parsed(&out), json!({"verified": false}));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = planeaut(&["family", SHEAR_FAMILY]).stdout;
    let b = planeaut(&["family", SHEAR_FAMILY]).stdout;
    assert_eq!(a, b);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("planeaut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = planeaut(&["--output", path.to_str().unwrap(), "polydegree", r#"{"field": "Q", "components": ["z1", "z2"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v, json!({"polydegree": []}));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_kr_passes() {
    let out = planeaut(&["selftest", "--suite", "kr"]);
    assert_eq!(out.status.code(), Some(0));
    let v = parsed(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "kr");
}
