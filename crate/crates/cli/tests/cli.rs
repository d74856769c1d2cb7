use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Scratch {
    dir: TempDir,
}

impl Scratch {
    fn new() -> Self {
        Scratch { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }
}

fn wh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wh")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn minimize_reports_minimal_length() {
    let t = Scratch::new();
    let words = t.file("words.json", r#"{"rank":2,"words":[{"kind":"straight","w":"abb"}]}"#);
    let v = json_of(&wh(&["minimize", "-r", "2", "--json", s(&words)]));
    assert_eq!(v["h_min"], 1);
    assert_eq!(v["h_initial"], 3);
}

#[test]
fn equiv_distinguishes_and_certifies() {
    let t = Scratch::new();
    let comm = t.file("s1.json", r#"{"rank":2,"words":["~abAB"]}"#);
    let squares = t.file("s2.json", r#"{"rank":2,"words":[{"kind":"cyclic","w":"aabb"}]}"#);
    let out = wh(&["equiv", "-r", "2", "--json", s(&comm), s(&squares)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["equivalent"], false);

    let abb = t.file("a.json", r#"{"rank":2,"words":["abb"]}"#);
    let a = t.file("b.json", r#"{"rank":2,"words":["a"]}"#);
    let v = json_of(&wh(&["equiv", "-r", "2", "--json", s(&abb), s(&a)]));
    assert_eq!(v["equivalent"], true);
    assert!(v["certificate"]["images"].is_array());
}

#[test]
fn distance_translator_and_dot() {
    let t = Scratch::new();
    let x = t.file("x.json", r#"{"rank":2,"images":["a","b"]}"#);
    let y = t.file("y.json", r#"{"rank":2,"images":["ab","b"]}"#);
    let v = json_of(&wh(&["distance", "-r", "2", "-x", s(&x), "-y", s(&y), "--json"]));
    assert_eq!(v["d"], 1);
    assert_eq!(v["witness"], serde_json::json!(["", "b", "ab"]));

    let v = json_of(&wh(&["translator", "-r", "2", "-x", s(&x), "-y", s(&y), "--json"]));
    assert_eq!(v["is_translator"], true);

    let out = wh(&["gersten-dot", "-r", "2", "-x", s(&x), "-y", s(&y)]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph") && dot.contains("label=\"x1\"") && dot.contains("label=\"y2\""));
}

#[test]
fn peak_reduce_steps_then_equal() {
    let t = Scratch::new();
    let x = t.file("x.json", r#"{"rank":2,"images":["a","b"]}"#);
    let y = t.file("y.json", r#"{"rank":2,"images":["ab","b"]}"#);
    let r = t.file("r.json", r#"{"rank":2,"words":["~abAB"]}"#);
    let v = json_of(&wh(&["peak-reduce", "-r", "2", "-x", s(&x), "-y", s(&y), "--json", s(&r)]));
    assert_eq!(v["kind"], "step");
    assert_eq!(v["case"], 1);
    assert_eq!(v["Yprime"], serde_json::json!(["a", "b"]));
    assert!(v["Vprime"].is_array());

    let v = json_of(&wh(&["peak-reduce", "-r", "2", "-x", s(&x), "-y", s(&x), "--json", s(&r)]));
    assert_eq!(v["kind"], "equal");
}

#[test]
fn exit_codes() {
    let t = Scratch::new();
    let bad_word = t.file("bad.json", r#"{"rank":2,"words":["ab9"]}"#);
    assert_eq!(wh(&["minimize", "-r", "2", s(&bad_word)]).status.code(), Some(2));

    let x = t.file("x.json", r#"{"rank":2,"images":["a","b"]}"#);
    let not_basis = t.file("nb.json", r#"{"rank":2,"images":["aa","b"]}"#);
    assert_eq!(wh(&["distance", "-r", "2", "-x", s(&x), "-y", s(&not_basis)]).status.code(), Some(2));

    let wrong_rank = t.file("w.json", r#"{"rank":3,"words":["abc"]}"#);
    assert_eq!(wh(&["minimize", "-r", "2", s(&wrong_rank)]).status.code(), Some(2));

    let far = t.file("far.json", r#"{"rank":2,"images":["abbab","abb"]}"#);
    let out = wh(&["distance", "-r", "2", "-x", s(&x), "-y", s(&far), "--max-states", "1"]);
    assert_eq!(out.status.code(), Some(3));

    let r = t.file("r.json", r#"{"rank":2,"words":["abb"]}"#);
    let out = wh(&["peak-reduce", "-r", "2", "-x", s(&x), "-y", s(&x), s(&r)]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn json_output_is_repeatable() {
    let t = Scratch::new();
    let s1 = t.file("s1.json", r#"{"rank":2,"words":["abbAB","~aab"]}"#);
    let s2 = t.file("s2.json", r#"{"rank":2,"words":["ab","~aab"]}"#);
    let run = || wh(&["equiv", "-r", "2", "--json", "--seed", "7", s(&s1), s(&s2)]).stdout;
    assert_eq!(run(), run());
}
