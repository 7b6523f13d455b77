use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relhecke")).args(args).env_remove("RELHECKE_PRIME").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_counts() {
    let out = run(&["verify", "--suite", "counts", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["details"]["expected"], 15);
    assert_eq!(v["details"]["matchings"], 15);
    assert_eq!(v["details"]["relevant"], 15);
    assert_eq!(v["suite"], "counts");
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_annihilator_reports_three_families() {
    let out = run(&["verify", "--suite", "annihilator", "--n", "2"]);
    let v = json(&out);
    let families = v["details"]["families"].as_array().unwrap();
    assert_eq!(families.len(), 3);
    assert_eq!(families[0]["passed"], true);
    assert_eq!(families[1]["passed"], true);
    let failed = !v["failures"].as_array().unwrap().is_empty();
    assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }));
}

#[test]
fn distinguish_full_rank_chain() {
    let out = run(&["distinguish", "--multisegment", "[[0,3],[0,3]]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "yes_section9");
    assert_eq!(v["config"]["trials"], 500);
    assert_eq!(v["eps_s"].as_array().unwrap().len(), 3);
    let out = run(&["distinguish", "--multisegment", "[[0,0],[1,1]]"]);
    assert_eq!(json(&out)["verdict"], "no");
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["distinguish", "--multisegment", "[[0,1],[2,3],[0,3]]", "--seed", "7", "--trials", "300"][..],
        &["verify", "--suite", "quiver-example", "--n", "2", "--seed", "3"][..],
        &["orbits", "--n", "3", "--side", "dual"][..],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--suite", "nope", "--n", "1"][..],
        &["verify", "--suite", "counts", "--n", "6"][..],
        &["verify", "--suite", "q1", "--n", "2", "--bound", "4"][..],
        &["orbits", "--n", "6"][..],
        &["distinguish", "--multisegment", "[[3,1]]"][..],
        &["act", "--n", "2", "--element", "{}", "--on", "{}"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn prime_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_relhecke"))
        .args(["distinguish", "--multisegment", "[[0,1]]", "--trials", "20"])
        .env("RELHECKE_PRIME", "7")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["prime"], 7);
    let out = Command::new(env!("CARGO_BIN_EXE_relhecke"))
        .args(["distinguish", "--multisegment", "[[0,1]]"])
        .env("RELHECKE_PRIME", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let orbits = dir.path().join("orbits.dot");
    let out = run(&["orbits", "--n", "2", "--dot", orbits.to_str().unwrap()]);
    assert_eq!(json(&out)["count"], 3);
    let dot = std::fs::read_to_string(&orbits).unwrap();
    assert!(dot.starts_with("digraph") && dot.contains("->"));
    let poset = dir.path().join("poset.dot");
    let out = run(&["poset", "--dims", "[1,1,1,1]", "--dot", poset.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 8);
    assert!(std::fs::read_to_string(&poset).unwrap().contains("[0,3]"));
}

#[test]
fn act_generator_on_f_max() {
    let out = run(&["act", "--n", "2", "--element", r#"{"N":4,"window":[1,3,2,4]}"#, "--on", r#"{"n":2,"pairs":[[1,2,0],[3,4,0]]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["pairs"], serde_json::json!([[1, 3, 0], [2, 4, 0]]));
    let out = run(&["act", "--n", "2", "--element", r#"{"N":4,"window":[2,1,3,4]}"#, "--on", r#"{"n":2,"pairs":[[1,2,0],[3,4,0]]}"#]);
    assert_eq!(json(&out)["terms"][0]["coeff"], serde_json::json!({"lo": 2, "coeffs": [1]}));
}
