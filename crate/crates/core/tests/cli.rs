use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hochschild")).args(args).output().expect("binary runs")
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).expect("JSON output")
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hochschild-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn generic_table_exits_zero() {
    let o = run(&["qci", "--q", "generic", "--char", "0", "--table"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o.stdout);
    assert_eq!(v["format"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["table"]["circles"].as_array().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["qci", "--q", "-1"][..],
        &["hh", "--q", "root:3", "--degree", "2"],
        &["verify", "--suite", "laws", "--q", "-1"],
        &["resolve", "--type", "nbar", "--max-degree", "3", "--verify"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn phi_choice_does_not_change_output() {
    for q in ["generic", "-1", "1"] {
        let a = run(&["qci", "--q", q, "--phi", "qci"]);
        let b = run(&["qci", "--q", q, "--phi", "twisted"]);
        assert_eq!(a.stdout, b.stdout, "q = {q}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn verify_homotopy_suite() {
    let o = run(&["verify", "--suite", "homotopy", "--max-degree", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o.stdout);
    assert_eq!(v["passed"], true);
    assert!(v["suites"][0]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn bracket_at_minus_one() {
    let o = run(&["bracket", "--q", "-1", "--f", "x*e(1,0)", "--g", "1*e(2,0)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o.stdout);
    assert_eq!(v["chain_level"], "-2*e(2,0)");
    assert_eq!(v["class"], serde_json::json!(["-2"]));
    assert_eq!(v["internal_degree"], serde_json::json!([2, 0]));
}

#[test]
fn verification_diff_exits_one() {
    // the printed derived check at q = 1 in characteristic 0 does not hold
    let o = run(&["qci", "--q", "1", "--char", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o.stdout);
    let bad: Vec<&Value> =
        v["table"]["derived"].as_array().unwrap().iter().filter(|e| e["matches"] == false).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["rhs"], "xy*e(2,0)");
}

#[test]
fn shipped_algebra_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/lambda_q_generic.json");
    let o = run(&["algebra", "check", "--algebra", path]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o.stdout);
    assert_eq!(v["dim"], 4);
    let b = run(&["algebra", "check", "--algebra", "builtin:lambda_q"]);
    assert_eq!(v["presentation"], json(&b.stdout)["presentation"]);
}

#[test]
fn algebra_errors() {
    let no_unit = temp_file(
        "no_unit.json",
        r#"{"name": "a", "field": {"kind": "Q"}, "grading_rank": 1,
            "basis": [{"label": "1", "degree": [0]}], "unit": "e", "products": []}"#,
    );
    let o = run(&["algebra", "check", "--algebra", no_unit.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = json(&o.stderr);
    assert_eq!(e["format"], 1);
    assert_eq!(e["error"]["kind"], "algebra");
    assert!(e["error"]["detail"].as_str().unwrap().contains("unit not in basis"));

    let products = [("1", "1", "1"), ("1", "x", "x"), ("x", "1", "x"), ("1", "x2", "x2"), ("x2", "1", "x2")];
    let mut entries: Vec<String> = products
        .iter()
        .map(|(l, r, b)| format!(r#"{{"left": "{l}", "right": "{r}", "terms": [{{"coeff": "1", "basis": "{b}"}}]}}"#))
        .collect();
    entries.push(r#"{"left": "1", "right": "x3", "terms": [{"coeff": "1", "basis": "x3"}]}"#.into());
    entries.push(r#"{"left": "x3", "right": "1", "terms": [{"coeff": "1", "basis": "x3"}]}"#.into());
    entries.push(r#"{"left": "x", "right": "x", "terms": [{"coeff": "1", "basis": "x2"}]}"#.into());
    entries.push(r#"{"left": "x", "right": "x2", "terms": [{"coeff": "1", "basis": "x3"}]}"#.into());
    entries.push(r#"{"left": "x2", "right": "x", "terms": [{"coeff": "2", "basis": "x3"}]}"#.into());
    let body = format!(
        r#"{{"name": "bad", "field": {{"kind": "Q"}}, "grading_rank": 1,
            "basis": [{{"label": "1", "degree": [0]}}, {{"label": "x", "degree": [1]}},
                      {{"label": "x2", "degree": [2]}}, {{"label": "x3", "degree": [3]}}],
            "unit": "1", "products": [{}]}}"#,
        entries.join(", ")
    );
    let bad = temp_file("bad.json", &body);
    let o = run(&["algebra", "check", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = json(&o.stderr);
    assert!(e["error"]["detail"].as_str().unwrap().contains("not associative on (x, x, x)"), "{e}");

    let o = run(&["algebra", "check", "--algebra", "/nonexistent/file.json"]);
    assert_eq!(json(&o.stderr)["error"]["kind"], "io");
}

#[test]
fn cochain_errors() {
    let o = run(&["hh", "--f", "x*e(1,0) + y*e(1,0)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(json(&o.stderr)["error"]["kind"], "cochain");
    let o = run(&["bracket", "--f", "z*e(1,0)", "--g", "x"]);
    assert_eq!(json(&o.stderr)["error"]["kind"], "cochain");
}

#[test]
fn root_of_unity_index() {
    let o = run(&["hh", "--q", "root:3", "--f", "e(2r,0)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o.stdout);
    assert_eq!(v["chain_level"], "e(6,0)");
    assert_eq!(v["class"], serde_json::json!(["1"]));
}

#[test]
fn help_goes_to_stdout() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("qci"));
}
