use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhlattice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn evolve_writes_a_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    let out = run(&["evolve", "--law", "hh2d", "--frame", "L:6x3", "--seed", "ones", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["grid"]["frame"], "L:6x3");
    let sites = doc["grid"]["sites"].as_array().unwrap();
    assert_eq!(sites.len(), 7 * 4);
    let x21 = sites.iter().find(|s| s["n"] == 2 && s["t"] == 1).unwrap();
    assert_eq!(x21["value"], "3");
}

#[test]
fn random_seed_is_recorded_and_reproducible() {
    let a = run(&["evolve", "--law", "det1", "--k", "2", "--seed", "random:42"]);
    assert!(matches!(a.status.code(), Some(0) | Some(2)));
    let b = run(&["evolve", "--law", "det1", "--k", "2", "--seed", "random:42"]);
    assert_eq!(a.stdout, b.stdout);
    if a.status.code() == Some(0) {
        assert_eq!(json(&a)["seed"], "random:42");
    }
    let c = run(&["evolve", "--seed", "random", "--frame", "L:3x2"]);
    assert_eq!(c.status.code(), Some(0));
    let seed = json(&c)["seed"].as_str().unwrap().to_string();
    assert!(seed.starts_with("random:"));
    let again = run(&["evolve", "--seed", &seed, "--frame", "L:3x2"]);
    assert_eq!(json(&again)["grid"], json(&c)["grid"]);
}

#[test]
fn usage_errors_exit_1() {
    let out = run(&["evolve", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(1));
    assert_eq!(run(&["evolve", "--law", "det1"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "reduce", "--K", "2", "--M", "2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn pole_exits_2_with_the_site() {
    let out = run(&["evolve", "--seed", "0,1,1,1,1", "--frame", "L:2x1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "singular");
    assert_eq!(err["site"]["n"], 2);
    assert_eq!(err["site"]["t"], 1);
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "d4-zero", "--symbolic"][..],
        &["verify", "d3-shift"],
        &["verify", "dodgson"],
        &["verify", "frieze-f3f4", "--seed", "random:3"],
        &["verify", "det-general", "--law", "det2", "--k", "1", "--seed", "random:1"],
        &["verify", "linearize", "--seed", "random:5"],
        &["verify", "extended-laurent"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        let doc = json(&out);
        assert_eq!(doc["passed"], true);
        assert!(!doc["assertions"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_laurent_reports_denominators() {
    let out = run(&["verify", "laurent", "--frame", "L:6x4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let sites = doc["data"]["laurent"]["sites"].as_array().unwrap();
    let s42 = sites.iter().find(|s| s["site"]["n"] == 4 && s["site"]["t"] == 2).unwrap();
    assert_eq!(s42["q_degree"], 5);
    assert_eq!(doc["data"]["laurent"]["mismatches"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_reduce_reports_k_lin() {
    let out = run(&["verify", "reduce", "--K", "2", "--M", "1", "--len", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["data"]["K_lin"], "28");
    assert_eq!(doc["data"]["sequence"]["terms"].as_array().unwrap().len(), 20);
}

#[test]
fn verify_entropy_writes_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deg.csv");
    let out = run(&["verify", "entropy", "--degrees-csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(path).unwrap();
    assert!(csv.starts_with("ray,index,n,t,q_degree,p_degree\n"));
    assert!(csv.contains("along_t,0,4,1,3,4"));
}

#[test]
fn sequences() {
    let out = run(&["seq", "hh", "--k", "1", "--seed", "ones", "--len", "10", "--format", "text"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1,1,1,3,7,31,85,393,1093,5071");
    let out = run(&["seq", "dana-scott", "--seed", "ones", "--len", "10", "--format", "text"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("2,3,5,13,22,41"));
    let out = run(&["seq", "hh", "--len", "20", "--find-recurrence", "8"]);
    let doc = json(&out);
    assert_eq!(doc["all_integers"], true);
    assert_eq!(doc["constant_recurrence"]["order"], 6);
    let out = run(&["seq", "frieze24", "--seed", "1,2,3,4", "--len", "7", "--format", "csv"]);
    let csv = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(csv.starts_with("index,numerator,denominator,is_integer\n1,1,1,true\n"));
    assert!(csv.ends_with("7,12,1,true\n"));
    let out = run(&["seq", "frieze24", "--seed", "symbolic", "--len", "5"]);
    let doc = json(&out);
    assert_eq!(doc["all_integers"], false);
}

#[test]
fn singular_sequence_exits_2() {
    let out = run(&["seq", "frieze24", "--seed", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert!(err["message"].as_str().unwrap().contains("step j=1"));
    assert_eq!(err["last_good_index"], 4);
}
