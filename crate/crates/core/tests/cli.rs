use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn percop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percop"))
        .args(args)
        .env_remove("PERCOP_STATE_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("percop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn generate_then_triple() {
    let path = scratch("bowtie.json");
    let p = path.to_str().unwrap();
    let out = percop(&["generate", "bowtie_221", "--out", p]);
    assert!(out.status.success());
    let out = percop(&["triple", p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["footprint"].as_u64(), v["max_snapshot"].as_u64(), v["periodic"].as_u64()),
               (Some(2), Some(2), Some(1)));
    assert_eq!(v["expected_match"], Value::Bool(true));
}

#[test]
fn expected_mismatch_exits_2() {
    let path = scratch("wrong.json");
    std::fs::write(
        &path,
        "{\"expected\": {\"copnum\": 2}, \"n\": 2, \"period\": 1, \"snapshots\": [[[0,1]]], \"version\": 1}",
    )
    .unwrap();
    assert_eq!(percop(&["triple", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn solve_writes_a_trace() {
    let inst = scratch("q3.json");
    let trace = scratch("q3-trace.json");
    assert!(percop(&["generate", "q3_rotation", "--out", inst.to_str().unwrap()]).status.success());
    let out = percop(&["solve", inst.to_str().unwrap(), "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["copnum"].as_u64(), Some(3));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(t["steps"].as_array().is_some());

    let capped = percop(&["solve", inst.to_str().unwrap(), "--max-cops", "2"]);
    assert_eq!(json(&capped)["copnum"], Value::Null);
}

#[test]
fn corners_and_treewidth() {
    let inst = scratch("circ.json");
    assert!(percop(&["generate", "circulant_123", "--out", inst.to_str().unwrap()]).status.success());
    let out = percop(&["corners", inst.to_str().unwrap(), "--k", "2"]);
    assert_eq!(json(&out)["count"].as_u64(), Some(0));

    let pet = scratch("pet.json");
    assert!(percop(&["generate", "petersen_311", "--out", pet.to_str().unwrap()]).status.success());
    let tw = json(&percop(&["treewidth", pet.to_str().unwrap()]));
    assert_eq!(tw["treewidth"].as_u64(), Some(4));
    let bound = percop(&["tw-bound", pet.to_str().unwrap()]);
    assert_eq!(bound.status.code(), Some(0));
    assert_eq!(json(&bound)["bag_strategy"]["wins"], Value::Bool(true));
}

#[test]
fn parse_errors_carry_codes() {
    let path = scratch("loop.json");
    std::fs::write(&path, "{\"n\": 2, \"period\": 1, \"snapshots\": [[[1,1]]], \"version\": 1}").unwrap();
    let out = percop(&["triple", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("E005") && err.contains("self-loop forbidden"), "{err}");
}

#[test]
fn budget_errors_exit_3() {
    let inst = scratch("pet-budget.json");
    assert!(percop(&["generate", "constant_333", "--out", inst.to_str().unwrap()]).status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_percop"))
        .args(["solve", inst.to_str().unwrap()])
        .env("PERCOP_STATE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_builtin_spec() {
    let out = percop(&["search", "--spec", "circulant_123"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "found");
    assert_eq!(v["witness"]["certificate"]["copnum"].as_u64(), Some(3));
}

#[test]
fn verify_table_passes_and_is_stable() {
    let a = percop(&["verify-table"]);
    let b = percop(&["verify-table"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["counts"]["pass"].as_u64(), Some(11));

    let human = percop(&["--human", "verify-table"]);
    let text = String::from_utf8(human.stdout).unwrap();
    assert!(text.contains("UNDETERMINED") && text.contains("bowtie_221"));

    let missing = percop(&["verify-table", "--witness-dir", "/nonexistent"]);
    assert_eq!(missing.status.code(), Some(2));
    let skipped = percop(&["verify-table", "--skip-search-rows", "--witness-dir", "/nonexistent"]);
    assert_eq!(skipped.status.code(), Some(0));
}
