use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn ctask(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctask"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn write_edge(dir: &Path) -> PathBuf {
    let path = dir.join("edge.json");
    let edge = json!({
        "vertices": [
            { "id": 0, "color": 0, "payload": "a" },
            { "id": 1, "color": 1, "payload": "b" },
        ],
        "facets": [[0, 1]],
    });
    fs::write(&path, edge.to_string()).unwrap();
    path
}

/// A depth-1 zigzag on the edge: each subdivision vertex goes to the base
/// vertex of its own color, which folds the edge back over itself.
fn write_fold_map(dir: &Path, edge: &Path) -> PathBuf {
    let subdivision_path = dir.join("edge-ch1.json");
    let status = ctask(&[
        "subdivide",
        edge.to_str().unwrap(),
        "--depth",
        "1",
        "--out",
        subdivision_path.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let subdivision: Value =
        serde_json::from_str(&fs::read_to_string(&subdivision_path).unwrap()).unwrap();
    let witness: serde_json::Map<String, Value> = subdivision["complex"]["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["id"].to_string(), v["color"].clone()))
        .collect();
    let map = json!({
        "domain": subdivision,
        "codomain": serde_json::from_str::<Value>(&fs::read_to_string(edge).unwrap()).unwrap(),
        "witness": witness,
    });
    let path = dir.join("fold.json");
    fs::write(&path, map.to_string()).unwrap();
    path
}

#[test]
fn validate_reports_shape_and_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_edge(dir.path());

    let output = ctask(&["complex", "validate", edge.to_str().unwrap()]);
    assert!(output.status.success());
    let report = stdout_json(&output);
    assert_eq!(report["vertices"], 2);
    assert_eq!(report["facets"], 1);
    assert_eq!(report["dimension"], 1);

    let bad = dir.path().join("bad.json");
    let clash = json!({
        "vertices": [
            { "id": 0, "color": 0, "payload": "a" },
            { "id": 1, "color": 0, "payload": "b" },
        ],
        "facets": [[0, 1]],
    });
    fs::write(&bad, clash.to_string()).unwrap();
    let output = ctask(&["complex", "validate", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&output.stderr).expect("stderr is JSON");
    assert!(err["error"].is_string());
}

#[test]
fn subdividing_an_edge_twice_yields_nine_cells() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_edge(dir.path());
    let output = ctask(&["subdivide", edge.to_str().unwrap(), "--depth", "2"]);
    assert!(output.status.success());
    let subdivision = stdout_json(&output);
    assert_eq!(subdivision["complex"]["facets"].as_array().unwrap().len(), 9);
    assert_eq!(subdivision["depth"], 2);
}

#[test]
fn consensus_search_is_refuted_at_depth_one() {
    let dir = tempfile::tempdir().unwrap();
    let task = dir.path().join("consensus.json");
    let output = ctask(&[
        "task",
        "gen-failsafe",
        "--n",
        "2",
        "--k",
        "0",
        "--out",
        task.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let output = ctask(&["task", "search", task.to_str().unwrap(), "--depth", "1"]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stdout_json(&output)["refuted_at_depth"], 1);
}

#[test]
fn approximation_decisions_verify_and_solve_the_induced_task() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_edge(dir.path());
    let map = write_fold_map(dir.path(), &edge);

    let decision = dir.path().join("decision.json");
    let output = ctask(&[
        "approx",
        "run",
        map.to_str().unwrap(),
        "--out",
        decision.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let output = ctask(&[
        "approx",
        "verify",
        map.to_str().unwrap(),
        "--decision",
        decision.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(stdout_json(&output)["verified"], true);

    let task = dir.path().join("task.json");
    let output = ctask(&[
        "task",
        "induce",
        map.to_str().unwrap(),
        "--out",
        task.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let output = ctask(&[
        "task",
        "verify",
        task.to_str().unwrap(),
        "--decision",
        decision.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(stdout_json(&output)["valid"], true);
}

#[test]
fn chromaticity_violations_exit_one_with_a_located_witness() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_edge(dir.path());
    let subdivision_path = dir.path().join("edge-ch1.json");
    ctask(&[
        "subdivide",
        edge.to_str().unwrap(),
        "--depth",
        "1",
        "--out",
        subdivision_path.to_str().unwrap(),
    ]);
    let subdivision: Value =
        serde_json::from_str(&fs::read_to_string(&subdivision_path).unwrap()).unwrap();
    let images: serde_json::Map<String, Value> = subdivision["complex"]["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["id"].to_string(), json!({ "support": { "0": "1" } })))
        .collect();
    let constant = json!({
        "domain": subdivision,
        "codomain": serde_json::from_str::<Value>(&fs::read_to_string(&edge).unwrap()).unwrap(),
        "images": images,
    });
    let path = dir.path().join("constant.json");
    fs::write(&path, constant.to_string()).unwrap();

    let output = ctask(&["map", "check-chromatic", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let verdict = stdout_json(&output);
    assert_eq!(verdict["verdict"], "violation");
    assert!(verdict["at"]["support"].is_object());
}

#[test]
fn evaluation_and_projection_agree_with_exact_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_edge(dir.path());
    let map = write_fold_map(dir.path(), &edge);

    let output = ctask(&[
        "map",
        "evaluate",
        map.to_str().unwrap(),
        "--point",
        r#"{"support":{"0":"1/4","1":"3/4"}}"#,
    ]);
    assert!(output.status.success());
    let image = stdout_json(&output);
    assert_eq!(image["support"]["0"], "3/4");
    assert_eq!(image["support"]["1"], "1/4");

    let output = ctask(&[
        "map",
        "project",
        map.to_str().unwrap(),
        "--color",
        "1",
        "--point",
        r#"{"support":{"0":"1/4","1":"3/4"}}"#,
    ]);
    assert!(output.status.success());
    assert_eq!(stdout_json(&output)["support"]["0"], "1");
}

#[test]
fn export_reemits_documents_in_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_edge(dir.path());
    let map = write_fold_map(dir.path(), &edge);
    let task = dir.path().join("task.json");
    ctask(&["task", "induce", map.to_str().unwrap(), "--out", task.to_str().unwrap()]);

    let first = ctask(&["export", task.to_str().unwrap()]);
    assert!(first.status.success());
    let reexported = dir.path().join("task2.json");
    fs::write(&reexported, &first.stdout).unwrap();
    let second = ctask(&["export", reexported.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);

    let output = ctask(&["export", edge.to_str().unwrap(), "--format", "yaml"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn manifests_replay_commands_with_stored_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let task = dir.path().join("consensus.json");
    ctask(&["task", "gen-failsafe", "--n", "2", "--k", "0", "--out", task.to_str().unwrap()]);

    let manifest = dir.path().join("manifest.json");
    let body = json!({
        "command": ["task", "search"],
        "inputs": [task.to_str().unwrap()],
        "parameters": { "depth": "1" },
        "seed": 0,
    });
    fs::write(&manifest, body.to_string()).unwrap();
    let output = ctask(&["run-manifest", manifest.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stdout_json(&output)["refuted_at_depth"], 1);

    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, json!({ "command": ["export"], "extra": 1 }).to_string()).unwrap();
    let output = ctask(&["run-manifest", unknown.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let first = ctask(&["apxagree", "solve", "--k", "1/2", "--m1", "3/5"]);
    let second = ctask(&["apxagree", "solve", "--k", "1/2", "--m1", "3/5"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let report = stdout_json(&first)["report"].clone();
    assert_eq!(report["rounds"], 4);
    assert_eq!(report["mesh"], "1/81");
    assert_eq!(report["within_one_third"], true);
}
