use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordanscope"))
        .args(args)
        .env_remove("JORDANSCOPE_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn census_document_shape() {
    let doc = json(&run(&["census", "builtin:nilpotent_zw", "--point", "1,1"]));
    assert_eq!(doc["schema"], "v1");
    assert_eq!(doc["manifest"]["command"], "census");
    assert_eq!(doc["manifest"]["seed"], 0);
    assert_eq!(doc["manifest"]["input_hash"].as_str().unwrap().len(), 64);
    assert_eq!(doc["result"]["census"]["blocks"][0]["2"], 1);
    assert!(doc["manifest"].get("timing_ms").is_none());
}

#[test]
fn census_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("census.json");
    let out = run(&["census", "builtin:j3split", "--point", "0", "--out", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let verify = |p: &Path| run(&["verify", "builtin:j3split", "--point", "0", "--census", p.to_str().unwrap()]);
    assert_eq!(code(&verify(&good)), 0);

    // claim a 2-block and a 1-block instead of the 3-block at 0
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    let census = &mut doc["result"]["census"];
    let blocks = census["blocks"].as_array().unwrap().clone();
    assert_eq!(blocks[0], serde_json::json!({"3": 1}));
    census["blocks"][0] = serde_json::json!({"1": 1, "2": 1});
    census.as_object_mut().unwrap().remove("aggregate");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(code(&verify(&bad)), 1);

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&verify(&bad)), 2);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(code(&run(&["census", "builtin:nope", "--point", "0"])), 2);
    assert_eq!(code(&run(&["census", "builtin:pm_zeta", "--point", "1,2"])), 2);
    assert_eq!(code(&run(&["census", "builtin:pm_zeta", "--point", "z+"])), 2);
    assert_eq!(code(&run(&["census", "builtin:pm_zeta", "--point", "0", "--tol", "2"])), 2);
    assert_eq!(code(&run(&["scan", "builtin:pm_zeta", "--box", "-1:1", "--res", "1"])), 2);
    assert_eq!(code(&run(&["track", "builtin:pm_zeta", "--path", "1"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fam.json");
    std::fs::write(&f, r#"{"n": 2, "params": ["z"], "entries": [["z", "q"], ["0", "z"]]}"#).unwrap();
    assert_eq!(code(&run(&["census", f.to_str().unwrap(), "--point", "0"])), 2);
    std::fs::write(&f, r#"{"n": 2, "params": ["z"], "entries": [["z", "1"]]}"#).unwrap();
    assert_eq!(code(&run(&["census", f.to_str().unwrap(), "--point", "0"])), 2);
    std::fs::write(&f, r#"{"n": 2, "params": ["z"], "entries": [["z", "1"], ["0", "z^(1/2)"]]}"#).unwrap();
    assert_eq!(code(&run(&["census", f.to_str().unwrap(), "--point", "0"])), 2);
}

#[test]
fn family_file_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pm.json");
    std::fs::write(&f, r#"{"n": 2, "params": ["z"], "entries": [["z", "1"], ["0", "-z"]], "label": "pm_zeta"}"#).unwrap();
    let a = json(&run(&["census", f.to_str().unwrap(), "--point", "0.5"]));
    let b = json(&run(&["census", "builtin:pm_zeta", "--point", "0.5"]));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["manifest"]["input_hash"], b["manifest"]["input_hash"]);
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_jordanscope"))
        .args(["census", "builtin:pm_zeta", "--point", "0"])
        .env("JORDANSCOPE_TOL", "1e-10")
        .output()
        .unwrap();
    assert_eq!(json(&out)["manifest"]["tolerances"]["rel_tol"], 1e-10);
    let out = Command::new(env!("CARGO_BIN_EXE_jordanscope"))
        .args(["census", "builtin:pm_zeta", "--point", "0"])
        .env("JORDANSCOPE_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn empty_sets_are_marked() {
    let split = json(&run(&["split-set", "builtin:const_j2", "--samples", "10"]));
    assert_eq!(split["result"]["empty"], true);
    assert!(split["result"]["functions"].as_array().unwrap().is_empty());
    let jst = json(&run(&["jst-set", "builtin:identity3", "--samples", "10"]));
    assert_eq!(jst["result"]["empty"], true);
    let jst = json(&run(&["jst-set", "builtin:nilpotent_zw", "--samples", "10"]));
    assert_eq!(jst["result"]["empty"], false);
    let split = json(&run(&["split-set", "builtin:pm_zeta", "--samples", "10"]));
    assert_eq!(split["result"]["functions"], serde_json::json!(["-4*z^2"]));
}

#[test]
fn scan_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = (dir.path().join("scan.json"), dir.path().join("scan.csv"));
    let res = run(&[
        "scan",
        "builtin:pm_zeta",
        "--box",
        "-1:1",
        "--res",
        "5",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let summary = &doc["result"]["summary"];
    assert_eq!(summary["total"], 5);
    assert_eq!(summary["split"], 1);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn track_reports_the_event() {
    let doc = json(&run(&["track", "builtin:pm_zeta", "--path", "1;-1", "--steps", "20"]));
    let events = doc["result"]["events"].as_array().unwrap();
    assert_eq!(events.len(), 1);
}

#[test]
fn verify_builtin_corpus_passes_and_strict_flags_known_defects() {
    let out = run(&["verify", "--builtin-corpus", "--samples", "200"]);
    assert_eq!(json(&out)["result"]["all_pass"], true);
    let out = run(&["verify", "builtin:pm_zeta", "--samples", "1000", "--strict-bounds"]);
    assert_eq!(code(&out), 1);
}
