//! Golden tests against the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn freeknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeknot")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = freeknot(&full);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn invariant_text_report() {
    let o = freeknot(&["invariant", "1 2 1 2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "word: b b b b\npoint: (0, 0)\nL: 0\nparity:\n  1 OddB\n  2 OddB\n");
}

#[test]
fn invariant_json_round_trips() {
    let v = json(&["invariant", "K1"]);
    assert_eq!(v["L"], 16);
    assert_eq!((v["x"].clone(), v["y"].clone()), (Value::from(0), Value::from(-16)));
    assert_eq!(v["word"].as_array().unwrap().len(), 30);
    let r: freeknot::InvariantResult = serde_json::from_value(v).unwrap();
    assert_eq!(r.l, 16);
}

#[test]
fn word_reports_the_class() {
    let o = freeknot(&["word", "(b' a)^7 b' b (a b)^7"]);
    assert_eq!(stdout(&o), "point: (0, -16)\nL: 16\n");
    let v = json(&["word", "a b"]);
    assert_eq!(v["L"], Value::Null);
    assert_eq!(freeknot(&["word", "a c"]).status.code(), Some(2));
}

#[test]
fn catalog_lists_k1() {
    let o = freeknot(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().find(|l| l.starts_with("K1\t")).expect("K1 listed").to_string();
    assert!(line.contains("L=16"), "{line}");
    let v = json(&["catalog"]);
    let k1 = v.as_array().unwrap().iter().find(|e| e["name"] == "K1").unwrap();
    assert_eq!(k1["expectedL"], 16);
}

#[test]
fn parse_fmap_and_simplify() {
    let v = json(&["parse", "a b a b"]);
    assert_eq!(v["canonical"], "1 2 1 2");
    assert_eq!(v["chords"], 2);
    assert_eq!(stdout(&freeknot(&["fmap", "1 2 1 2 3 3"])), "1 2 1 2 3 3\n1 1\n");
    assert_eq!(stdout(&freeknot(&["fmap", "--iterate", "1 2 1 2"])), "1 2 1 2\n()\n");
    assert_eq!(stdout(&freeknot(&["simplify", "carter-underlying"])), "()\n");
    assert_eq!(json(&["simplify", "1 2 1 2"])["moves"][0]["kind"], "R2Remove");
}

#[test]
fn orbit_and_equiv() {
    let v = json(&["orbit", "1 2 2 3 3 1", "--max-chords", "4", "--max-nodes", "10000"]);
    assert!(v["members"].as_array().unwrap().iter().any(|m| m == "1 2 3 1 2 3"));
    assert_eq!(v["truncated"], false);
    assert_eq!(stdout(&freeknot(&["equiv", "1 2 3 1 2 3", "1 1"])), "Equivalent\n");
    let o = freeknot(&["equiv", "K1", "()"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "Distinct (L: 16 vs 0)\n".to_string()));
    let o = freeknot(&["equiv", "1 2 3 1 2 3", "1 1", "--max-chords", "3", "--max-nodes", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(freeknot(&["invariant", "1 2"]).status.code(), Some(2));
    assert_eq!(freeknot(&["invariant", "1 ; 1"]).status.code(), Some(2));
    assert_eq!(freeknot(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(freeknot(&["movie", "verify", "/nonexistent.json"]).status.code(), Some(2));
    let usage = freeknot(&[]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("Usage"));
}

#[test]
fn movie_verify_reports() {
    let o = freeknot(&["movie", "verify", &fixture("kink.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("genus: 0\n"));
    let v = json(&["movie", "verify", "--strict", &fixture("kink.json")]);
    assert_eq!((v["ok"].clone(), v["reebIsTree"].clone()), (Value::Bool(true), Value::Bool(true)));
    assert_eq!(v["theorem"]["result"], "Consistent");
    let v = json(&["movie", "verify", &fixture("torus.json")]);
    assert_eq!(v["genus"], 1.0);
    assert_eq!(v["reebIsTree"], false);
    let o = freeknot(&["movie", "verify", &fixture("unfinished.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FinalLevelNonEmpty"));
}

#[test]
fn movie_search_and_projection() {
    let v = json(&["movie", "search", "1 2 2 1", "--max-events", "4", "--max-chords", "4"]);
    assert_eq!(v["result"], "Found");
    let movie: freeknot::Movie = serde_json::from_value(v["movie"].clone()).unwrap();
    assert!(freeknot::verify(&movie, false).ok);
    let o = freeknot(&["movie", "search", "K1", "--max-events", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("L = 16"));

    let o = freeknot(&["movie", "fproject", &fixture("odd-pair.json")]);
    assert_eq!(o.status.code(), Some(0));
    let p = freeknot::Movie::from_json(&stdout(&o)).unwrap();
    assert_eq!(p.initial.to_string(), "()");
    assert_eq!(freeknot::verify(&p, false).genus, Some(1.0));
    assert_eq!(freeknot(&["movie", "fproject", &fixture("unfinished.json")]).status.code(), Some(1));
}

#[test]
fn random_movies_are_seeded() {
    let a = stdout(&freeknot(&["--seed", "11", "movie", "random"]));
    let b = stdout(&freeknot(&["movie", "random", "--seed", "11"]));
    assert_eq!(a, b);
    assert_ne!(a, stdout(&freeknot(&["movie", "random", "--seed", "12"])));
    let m = freeknot::Movie::from_json(&a).unwrap();
    assert_eq!(freeknot::verify(&m, false).genus, Some(0.0));
}
