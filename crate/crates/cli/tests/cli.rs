use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knn-tsg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn assert_golden(args: &[&str], name: &str) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), golden(name), "{args:?}");
}

#[test]
fn classify_text_and_json() {
    assert_golden(&["classify", "--n", "6", "--r", "2", "--s", "4", "--semidirect"], "classify_6_2_4_semidirect.txt");
    assert_golden(
        &["classify", "--n", "6", "--r", "2", "--s", "4", "--semidirect", "--format", "json"],
        "classify_6_2_4_semidirect.json",
    );
    assert_golden(&["classify", "--n", "7", "--m", "4", "--format", "json"], "classify_7_4.json");
}

#[test]
fn check_perm_json() {
    assert_golden(&["check-perm", "--n", "3", "--perm", "(v1 w1 v2 w2 v3 w3)", "--format", "json"], "check_perm_6cycle.json");
}

#[test]
fn enumerate_csv() {
    assert_golden(&["enumerate", "--n", "5", "--max-order", "8", "--format", "csv"], "enumerate_5_8.csv");
}

#[test]
fn construct_g1_passes() {
    assert_golden(&["construct", "--family", "g1", "--n", "5", "--m", "4"], "construct_g1_5_4.txt");
}

#[test]
fn json_envelope_keys() {
    let cases: [&[&str]; 6] = [
        &["classify", "--n", "10", "--r", "4", "--s", "4"],
        &["enumerate", "--n", "4", "--max-order", "6"],
        &["check-perm", "--n", "4", "--perm", "(v1 v2)(w1 w2)"],
        &["construct", "--family", "j2", "--n", "6", "--s", "4"],
        &["oracle", "--max-n", "3", "--max-m", "6"],
        &["verify-so4", "--family", "g3", "--m", "8"],
    ];
    for args in cases {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let o = run(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        for key in ["query", "verdict", "matched_conditions", "witnesses"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
    }
}

#[test]
fn deterministic_output() {
    let args = ["construct", "--family", "j1", "--n", "10", "--r", "2", "--s", "4", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["oracle", "--max-n", "4", "--max-m", "8", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--n", "6", "--m", "4", "--r", "2"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--n", "6", "--m", "4", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let o = run(&["check-perm", "--n", "3", "--perm", "(v1 v2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["verdict"].is_null() && v["error"].is_string());

    assert_eq!(run(&["construct", "--family", "g2", "--n", "5", "--m", "3"]).status.code(), Some(1));
    // Non-realizable automorphisms are a completed query, not a failure.
    let o = run(&["check-perm", "--n", "3", "--perm", "(v1 v2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("realizable: false"));
}

#[test]
fn open_witnesses_are_skipped() {
    let o = run(&["construct", "--family", "j1", "--n", "8", "--r", "2", "--s", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = v["witnesses"].as_array().unwrap();
    assert_eq!(w.len(), 2);
    assert!(w.iter().all(|x| x["status"] == "skipped"));
}
