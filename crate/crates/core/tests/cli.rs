use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const SINGLE_EDGE: &str = r#"{
  "vertices": [1, 2],
  "rotations": {"1": [2], "2": [1]},
  "outer": [1, 2],
  "lists": {"1": [1], "2": [1, 2]}
}"#;

const K2_STRIP: &str = r#"{
  "vertices": [1, 2, 3, 4],
  "rotations": {"1": [2, 3], "2": [4, 3, 1], "3": [1, 2, 4], "4": [3, 2]},
  "outer": [1, 2, 4, 3],
  "lists": {"1": [1], "2": [1, 2, 3], "3": [1, 2, 3], "4": [2, 3]}
}"#;

fn harmonica(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_harmonica"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn decide_single_edge() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "edge.json", SINGLE_EDGE);
    let (code, out) = harmonica(&["decide", "-i", &f, "--p1", "1", "--p2", "2"]);
    assert_eq!(code, 0);
    let expected = "{\n  \"coloring\": {\n    \"1\": 1,\n    \"2\": 2\n  },\n  \"verdict\": \"colorable\"\n}\n";
    assert_eq!(out, expected);
}

#[test]
fn certify_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "strip.json", K2_STRIP);
    let cert = dir.path().join("cert.json");
    let cert = cert.to_str().unwrap();
    let (code, _) = harmonica(&["certify", "-i", &f, "--p1", "1", "--p2", "4", "-o", cert]);
    assert_eq!(code, 2);
    let (code, out) = harmonica(&["verify-cert", "-i", &f, "-c", cert]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "harmonica");

    let golden = r#"{"from":1,"steps":[{"kind":"start","residual":[2,3],"verts":[1,2,3]},{"kind":"base","residual":[2,3],"verts":[2,3,4]}],"to":4}"#;
    let written: Value = serde_json::from_str(&std::fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&written).unwrap(), golden);
}

#[test]
fn decide_and_certify_agree() {
    let dir = TempDir::new().unwrap();
    for (name, text, p2) in [("a.json", SINGLE_EDGE, "2"), ("b.json", K2_STRIP, "4")] {
        let f = write(dir.path(), name, text);
        let (d, _) = harmonica(&["decide", "-i", &f, "--p1", "1", "--p2", p2]);
        let (c, w) = harmonica(&["certify", "-i", &f, "--p1", "1", "--p2", p2]);
        assert_eq!(d, c);
        let cert = write(dir.path(), "w.json", &w);
        let (v, _) = harmonica(&["verify-cert", "-i", &f, "-c", &cert]);
        assert_eq!(v, c);
    }
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "strip.json", K2_STRIP);
    let bad = r#"{"from":1,"steps":[{"kind":"start","residual":[2,3],"verts":[1,2,3]},{"kind":"base","residual":[1,3],"verts":[2,3,4]}],"to":4}"#;
    let c = write(dir.path(), "bad.json", bad);
    let (code, out) = harmonica(&["verify-cert", "-i", &f, "-c", &c]);
    assert_eq!(code, 3);
    assert!(out.contains("error"));
    let col = write(dir.path(), "col.json", r#"{"coloring":{"1":1,"2":2,"3":2,"4":3}}"#);
    assert_eq!(harmonica(&["verify-cert", "-i", &f, "-c", &col]).0, 3);
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "broken.json", "{not json");
    assert_eq!(harmonica(&["decide", "-i", &f, "--p1", "1", "--p2", "2"]).0, 1);
    let strip = write(dir.path(), "strip.json", K2_STRIP);
    let (code, out) = harmonica(&["decide", "-i", &strip, "--p1", "2", "--p2", "4"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c.as_str().unwrap().contains("|L(1)| >= 3")));
    assert_eq!(
        harmonica(&["--palette", "2", "decide", "-i", &strip, "--p1", "1", "--p2", "4"]).0,
        1
    );
    assert_eq!(harmonica(&["decide", "-i", &strip]).0, 1);
}

#[test]
fn phi_and_reduce() {
    let dir = TempDir::new().unwrap();
    let diamond = r#"{
      "vertices": [1, 2, 3, 4],
      "rotations": {"1": [2, 3], "2": [4, 3, 1], "3": [1, 2, 4], "4": [3, 2]},
      "outer": [1, 2, 4, 3],
      "lists": {"1": [1], "2": [1, 2], "3": [1, 2, 3], "4": [1, 2, 3]},
      "S": {"vertices": [1, 2], "edges": [[1, 2]]}
    }"#;
    let f = write(dir.path(), "d.json", diamond);
    let (code, out) = harmonica(&[
        "phi",
        "-i",
        &f,
        "--p",
        "1,2",
        "--pprime",
        "4,3",
        "--colorings",
        "[[1,2]]",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["phi"]["members"], serde_json::json!([[1, 3]]));

    let c4 = r#"{
      "vertices": [1, 2, 3, 4],
      "rotations": {"1": [2, 4], "2": [3, 1], "3": [4, 2], "4": [1, 3]},
      "outer": [1, 2, 3, 4],
      "lists": {"1": [1, 2, 3], "2": [1, 2, 3], "3": [1, 2, 4], "4": [1, 2, 5]}
    }"#;
    let f = write(dir.path(), "c4.json", c4);
    let (code, out) = harmonica(&["reduce", "-i", &f, "--path", "2", "--l0", "1,2", "--center", "1"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["x"], 1);
    assert_eq!(v["canvas"]["lists"]["1"], serde_json::json!([3]));
}

#[test]
fn fuzz_thm3_hundred_trials() {
    let (code, out) = harmonica(&["fuzz", "--profile", "thm3", "--trials", "100", "--seed", "7"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["properties"]["thm3/equivalence"]["pass"], 100);
    let (_, again) = harmonica(&["fuzz", "--profile", "thm3", "--trials", "100", "--seed", "7"]);
    assert_eq!(out, again);
}

#[test]
fn generated_instances_replay_through_decide() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let (code, out) = harmonica(&["gen", "--profile", "thm3", "--seed", &seed.to_string()]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let (p1, p2) = (v["designation"]["p1"].to_string(), v["designation"]["p2"].to_string());
        let f = write(dir.path(), "g.json", &out);
        let (code, _) = harmonica(&["decide", "-i", &f, "--p1", &p1, "--p2", &p2]);
        assert!(code == 0 || code == 2);
    }
}

#[test]
fn output_keys_are_sorted() {
    let (_, out) = harmonica(&["gen", "--profile", "thm9", "--seed", "3"]);
    let keys: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
