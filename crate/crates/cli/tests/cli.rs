use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

use tcbound_core::complex::fixtures;
use tcbound_core::formats::{complex_to_json, report_from_json};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

fn tcbound(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tcbound")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TRIANGLE: &str = r#"{"points":["a","b","c"],"sets":[["a","b"],["b","c"],["a","c"]]}"#;

const TORUS: &str = r#"{
  "name": "torus7",
  "dim": 2,
  "group": {"name": "Z^2", "class": "abelian", "cd": 2},
  "aspherical": true,
  "complex": "torus7.json"
}"#;

fn torus_dir() -> (TempDir, String) {
    let dir = TempDir::new().unwrap();
    write(&dir, "torus7.json", &complex_to_json(&fixtures::torus7()));
    let space = write(&dir, "torus.json", TORUS);
    (dir, space)
}

#[test]
fn verify_cover_golden() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", TRIANGLE);
    let run = tcbound(&["verify-cover", "--family", &f, "--k", "2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout, "{\n  \"isKCover\": true,\n  \"minOrder\": 2\n}\n");
    assert!(run.stderr.is_empty());
}

#[test]
fn verify_cover_failure_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", TRIANGLE);
    let run = tcbound(&["verify-cover", "--family", &f, "--k", "1"]);
    assert_eq!(run.code, 1);
    assert_eq!(run.json(), json!({"isKCover": false, "minOrder": 2}));
}

#[test]
fn ostrand_extend_with_action() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", r#"{"points":["a","b","c"],"sets":[["a","b"],["b","c"]]}"#);
    let a = write(&dir, "a.json", r#"{"points":["a","b","c"],"generators":[]}"#);
    let run = tcbound(&["ostrand-extend", "--family", &f, "--n", "1", "--m", "3", "--action", &a]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = run.json();
    assert_eq!(v["sets"], json!([["a", "b"], ["b", "c"], ["a", "c"], ["a", "b", "c"]]));
    assert_eq!(
        v["witnesses"],
        json!([
            null,
            null,
            [{"piece": ["a"], "origin": 0}, {"piece": ["c"], "origin": 1}],
            [{"piece": ["a", "b"], "origin": 0}, {"piece": ["c"], "origin": 1}]
        ])
    );

    let out = write(&dir, "g.json", &run.stdout);
    let check = tcbound(&["verify-cover", "--family", &out, "--k", "2"]);
    assert_eq!(check.code, 0);
}

#[test]
fn non_invariant_family_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", r#"{"points":["a","b","c"],"sets":[["a","b"],["b","c"]]}"#);
    let a = write(&dir, "a.json", r#"{"points":["a","b","c"],"generators":[["c","b","a"]]}"#);
    let run = tcbound(&["ostrand-extend", "--family", &f, "--n", "1", "--m", "2", "--action", &a]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.is_empty());
    assert!(run.stderr.contains("not invariant"));
}

#[test]
fn product_cover_and_counterexample() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", r#"{"points":["0","1"],"sets":[["0"],["1"],["0","1"]]}"#);
    let run = tcbound(&["product-cover", "--family-a", &f, "--n", "1", "--family-b", &f, "--m", "1"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.json()["sets"], json!([["(0,0)"], ["(1,1)"], ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]]));

    let a = write(&dir, "a.json", r#"{"points":["0","1"],"sets":[["0"],["1"]]}"#);
    let b = write(&dir, "b.json", r#"{"points":["x","y"],"sets":[["x"],["y"]]}"#);
    let bad = tcbound(&["product-cover", "--family-a", &a, "--n", "1", "--family-b", &b, "--m", "1"]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.contains("precondition"));
}

#[test]
fn nerve_of_triangle() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", TRIANGLE);
    let run = tcbound(&["nerve", "--family", &f]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json(), json!({"vertices": 3, "facets": [[0, 1], [0, 2], [1, 2]]}));
}

#[test]
fn extend_nerve_on_a_line() {
    let dir = TempDir::new().unwrap();
    let dist: Vec<Vec<String>> =
        (0i32..4).map(|i| (0i32..4).map(|j| format!("{}/1", (i - j).abs())).collect()).collect();
    let m = write(&dir, "m.json", &json!({"points": ["0", "1", "2", "3"], "dist": dist}).to_string());
    let f = write(&dir, "f.json", r#"{"points":["0","1","3"],"sets":[["0","1"],["1","3"]]}"#);
    let run = tcbound(&["extend-nerve", "--metric", &m, "--family", &f]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.json()["sets"], json!([["0", "1"], ["1", "2", "3"]]));

    let uncovered = write(&dir, "u.json", r#"{"points":["0","1","3"],"sets":[["0","1"]]}"#);
    assert_eq!(tcbound(&["extend-nerve", "--metric", &m, "--family", &uncovered]).code, 1);
}

#[test]
fn cohomology_and_zcl_of_torus() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.json", &complex_to_json(&fixtures::torus7()));
    let h = tcbound(&["cohomology", "--complex", &k]);
    assert_eq!(h.code, 0);
    let v = h.json();
    assert_eq!(v["betti"], json!([1, 2, 1]));
    assert_eq!(v["basis"], json!([["1"], ["h1_0", "h1_1"], ["h2_0"]]));
    assert!(v["products"].as_array().unwrap().contains(&json!({"left": "h1_0", "right": "h1_1", "result": ["h2_0"]})));

    assert_eq!(tcbound(&["zcl", "--complex", &k]).json()["zcl"], 2);
    assert_eq!(tcbound(&["zcl", "--complex", &k, "--cap", "1"]).json()["zcl"], 1);
}

#[test]
fn bounds_report_for_torus() {
    let (_dir, space) = torus_dir();
    let run = tcbound(&["bounds", "--space", &space]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = run.json();
    assert_eq!(v["facts"]["TC_space(torus7)"], json!({"lo": 2, "hi": 2}));
    assert_eq!(v["facts"]["cat_space(torus7)"], json!({"lo": 2, "hi": 2}));
    assert!(!v["trace"].as_array().unwrap().is_empty());
    let report = report_from_json(&run.stdout).unwrap();
    report.check_self_consistent().unwrap();
}

#[test]
fn contradicting_assertion_exits_one() {
    let (_dir, space) = torus_dir();
    let run = tcbound(&["bounds", "--space", &space, "--assert", "TC_space(torus7)=3..inf"]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.is_empty());
    assert!(run.stderr.contains("inconsistent bounds"), "{}", run.stderr);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{\"points\": [");
    let run = tcbound(&["verify-cover", "--family", &broken, "--k", "1"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.is_empty());
    assert!(run.stderr.contains("malformed JSON"));

    let missing = dir.path().join("missing.json");
    assert_eq!(tcbound(&["nerve", "--family", missing.to_str().unwrap()]).code, 2);

    let f = write(&dir, "f.json", TRIANGLE);
    assert_eq!(tcbound(&["verify-cover", "--family", &f, "--k", "4"]).code, 2);
    assert_eq!(tcbound(&["verify-cover", "--family", &f]).code, 2);

    let (_tdir, space) = torus_dir();
    assert_eq!(tcbound(&["bounds", "--space", &space, "--assert", "TC_space(torus7)"]).code, 2);
    assert_eq!(tcbound(&["bounds", "--space", &space, "--assert", "TC_space(nowhere)=1..1"]).code, 2);

    let no_complex = write(&dir, "space.json", TORUS);
    assert_eq!(tcbound(&["bounds", "--space", &no_complex]).code, 2);

    assert_eq!(tcbound(&["catalog-run", "--name", "klein_bottle"]).code, 2);
}

#[test]
fn catalog_run_passes() {
    let run = tcbound(&["catalog-run"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let outcomes = run.json();
    assert!(outcomes.as_array().unwrap().len() >= 9);
    assert!(outcomes.as_array().unwrap().iter().all(|o| o["passed"] == true));

    let one = tcbound(&["catalog-run", "--name", "torus7"]);
    assert_eq!(one.json(), json!([{"name": "torus7", "passed": true, "mismatches": []}]));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", TRIANGLE);
    let out = dir.path().join("report.json");
    let run = tcbound(&["nerve", "--family", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let written = std::fs::read_to_string(Path::new(&out)).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&written).unwrap()["vertices"], 3);
}
