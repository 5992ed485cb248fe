use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn monogen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monogen")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn dims(out: &Output) -> Vec<u64> {
    json_of(out)["sections"]["cohomology"]["dimensions"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect()
}

#[test]
fn validate_accepts_sweedler() {
    let out = monogen(&["validate", spec("sweedler.json").to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["ok"], Value::Bool(true));
}

#[test]
fn validate_names_rejected_coefficient() {
    let out = monogen(&["validate", spec("sweedler_bad_lambda.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    let failed: Vec<&str> = v["sections"]["validate"]["validation"].as_array().unwrap().iter().filter(|c| c["ok"] == Value::Bool(false)).map(|c| c["check"].as_str().unwrap()).collect();
    assert_eq!(failed, vec!["validate_f"]);
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = std::env::temp_dir().join(format!("monogen-bad-{}", std::process::id()));
    std::fs::write(&dir, "{\"field\": ").unwrap();
    let out = monogen(&["validate", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    let _ = std::fs::remove_file(dir);
}

#[test]
fn cohomology_tables() {
    let cases = [("sweedler.json", "6", vec![1; 7]), ("truncated_x2.json", "4", vec![2, 1, 1, 1, 1]), ("quaternion_pi_rho1.json", "4", vec![2, 0, 0, 0, 0])];
    for (file, d, want) in cases {
        let out = monogen(&["cohomology", spec(file).to_str().unwrap(), "--max-degree", d]);
        assert!(out.status.success(), "{file}");
        assert_eq!(dims(&out), want, "{file}");
    }
}

#[test]
fn sweedler_products() {
    let out = monogen(&["products", spec("sweedler.json").to_str().unwrap(), "--max-degree", "4"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let cups = v["sections"]["products"]["cup"].as_array().unwrap();
    let entry = |p: u64, q: u64| cups.iter().find(|c| c["deg_a"] == p && c["deg_b"] == q).unwrap()["result_class_coords"].clone();
    assert_eq!(entry(1, 1), serde_json::json!(["0"]));
    assert_eq!(entry(2, 1), serde_json::json!(["1"]));
    assert_eq!(entry(2, 2), serde_json::json!(["1"]));
    assert!(cups.iter().all(|c| c["generic_agrees"] == Value::Bool(true)));
    // unit rows: the degree-0 class 1 acts as identity
    for c in cups.iter().filter(|c| c["deg_a"] == 0) {
        assert_eq!(c["result_class_coords"], serde_json::json!(["1"]));
    }
}

#[test]
fn theorem_selection() {
    let out = monogen(&["theorems", spec("sweedler.json").to_str().unwrap(), "--which", "invariant-shape,shape-cohomology,diagonalizable-twist,group-algebra"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let checks = v["sections"]["theorems"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c["match"] == Value::Bool(true) && c["skipped"] == Value::Bool(false)));

    let out = monogen(&["theorems", spec("swap_qq.json").to_str().unwrap(), "--which", "invariant-shape"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["sections"]["theorems"]["witness"], "none");
    assert_eq!(v["sections"]["theorems"]["checks"][0]["skipped"], Value::Bool(true));
    assert_eq!(v["sections"]["theorems"]["generic_dimensions"], serde_json::json!([3, 1, 1, 1, 1]));

    let out = monogen(&["theorems", spec("truncated_x2.json").to_str().unwrap(), "--which", "identity-twist-complex,identity-twist"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert!(v["sections"]["theorems"]["checks"].as_array().unwrap().iter().all(|c| c["match"] == Value::Bool(true)));

    let out = monogen(&["theorems", spec("sweedler.json").to_str().unwrap(), "--which", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_and_echo_the_instance() {
    let path = spec("taft3.json");
    let a = monogen(&["report", path.to_str().unwrap(), "--max-degree", "3"]);
    let b = monogen(&["report", path.to_str().unwrap(), "--max-degree", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let echo = json_of(&a)["instance"].clone();
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(echo, original);
    let reparsed = monogen::instances::InstanceSpec::from_json(&echo).unwrap();
    assert_eq!(reparsed.algebra.dim(), 9);
}

#[test]
fn text_and_csv_formats() {
    let p = spec("truncated_x2_minus1.json");
    let out = monogen(&["cohomology", p.to_str().unwrap(), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("degree") && text.contains("dim"));
    let out = monogen(&["cohomology", p.to_str().unwrap(), "--format", "csv"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("cohomology,1,0")));
}

#[test]
fn witness_flag_and_out_file() {
    let dir = std::env::temp_dir().join(format!("monogen-out-{}.json", std::process::id()));
    let out = monogen(&["theorems", spec("sweedler.json").to_str().unwrap(), "--which", "shape-cohomology", "--witness", "{\"g\": \"2\"}", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dir).unwrap()).unwrap();
    assert_eq!(v["sections"]["theorems"]["witness"], "2*g");
    let _ = std::fs::remove_file(dir);
    let out = monogen(&["theorems", spec("sweedler.json").to_str().unwrap(), "--witness", "{\"q\": \"1\"}"]);
    assert_eq!(out.status.code(), Some(2));
}
