use std::path::PathBuf;
use std::process::Command;

use nodal_lls::cli::{self, combine_verdicts, Status};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nodal-lls-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Runs in process and returns (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("nodal-lls").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}")))
}

#[test]
fn worked_instance_is_a_member_by_both_methods() {
    let (code, report) = run_json(&["lls-check", &data("worked.json"), "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "member");
    let c = &report["result"]["candidates"][0];
    assert_eq!(c["rho"], 1);
    assert_eq!(c["kernel"]["member"], true);
    assert_eq!(c["eh"]["member"], true);
    let dims: Vec<u64> = c["kernel"]["kernel_dims"].as_array().unwrap().iter().map(|k| k["kernel"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1]);
}

#[test]
fn gluing_scalars_change_the_verdict() {
    let (code, report) = run_json(&["lls-check", &data("banana.json")]);
    assert_eq!(code, 1);
    let verdicts: Vec<&str> = report["result"]["candidates"].as_array().unwrap().iter().map(|c| c["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, vec!["negative", "member"]);
    assert_eq!(report["result"]["genus"], 1);
}

#[test]
fn rational_instances() {
    // x − 1/2 vanishes at the node, so (x − 1/2, 0) and (0, 1) both glue
    let (code, report) = run_json(&["lls-check", &data("rational.json"), "--candidate", "0"]);
    assert_eq!(code, 0, "{report}");
    let (code, report) = run_json(&["lls-check", &data("rational.json"), "--candidate", "1"]);
    assert_eq!(code, 1, "{report}");
    assert_eq!(report["result"]["candidates"][0]["verdict"], "negative");
}

#[test]
fn loops_are_rejected() {
    let (code, out, err) = run(&["validate", &data("loop.json")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["lls-check"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["lls-check", "/nonexistent/instance.json"]).0, 2);
}

#[test]
fn json_reports_are_reproducible() {
    let a = run(&["--format", "json", "lls-check", &data("worked.json")]);
    let b = run(&["--format", "json", "lls-check", &data("worked.json")]);
    assert_eq!(a.1, b.1);
    let a = run(&["--format", "json", "corpus", "--suite", "multitree", "--seed", "4", "--samples", "3"]);
    let b = run(&["--format", "json", "corpus", "--suite", "multitree", "--seed", "4", "--samples", "3"]);
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a.1, b.1);
}

#[test]
fn text_and_json_agree() {
    let (_, report) = run_json(&["lls-check", &data("worked.json")]);
    let (code, text, _) = run(&["lls-check", &data("worked.json")]);
    assert_eq!(code, 0);
    assert!(text.starts_with("lls-check ["));
    assert!(text.lines().next().unwrap().ends_with(": member"));
    let members = text.lines().filter(|l| l.trim() == "member: true").count();
    let json_members = report["result"]["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| [&c["kernel"]["member"], &c["eh"]["member"]])
        .filter(|m| **m == Value::Bool(true))
        .count();
    assert_eq!(members, json_members);
}

#[test]
fn structural_commands() {
    let (code, r) = run_json(&["validate", &data("worked.json")]);
    assert_eq!(code, 0, "{r}");
    let (code, r) = run_json(&["twist", &data("worked.json"), "--multiset", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["result"]["vertex_weights"], serde_json::json!([0, 1]));
    let (code, r) = run_json(&["bar-g", &data("worked.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["nodes"].as_array().unwrap().len(), 2);
    let (code, r) = run_json(&["concentrate", &data("worked.json"), "--vertex", "B"]);
    assert_eq!(code, 0, "{r}");
    let (code, r) = run_json(&["sections", &data("worked.json"), "--w", "1,0"]);
    assert_eq!(code, 0, "{r}");
    let (code, r) = run_json(&["bridge", &data("worked.json"), "--extra", "1,1"]);
    assert!(code == 0 || code == 1, "{r}");
}

#[test]
fn linked_det_commands() {
    let (code, r) = run_json(&["linked-det", "validate", &data("chain.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["s_linked"], true);
    let (code, r) = run_json(&["linked-det", "check", &data("chain.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["ranks"], serde_json::json!([1, 1, 1]));
    let dir = scratch_dir("linked");
    let path = dir.join("chain.json");
    let (code, _) = run_json(&["linked-det", "gen", "--seed", "5", "--field", "3", "--d", "2", "--n", "3", "--ranks", "1,1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, r) = run_json(&["linked-det", "validate", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["s_linked"], true);
    let (code, _, err) = run(&["linked-det", "check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("no flags"));
    let (code, r) = run_json(&["linked-det", "complete", &data("chain.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["interior"].as_array().unwrap().len(), 1);
}

#[test]
fn small_corpus_runs() {
    let (code, r) = run_json(&["corpus", "--suite", "equivalence", "--p", "2", "--r", "0", "--max-nodes", "1", "--max-chain", "1", "--max-degree", "2"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["disagree"], 0);
    assert!(r["result"]["cases"].as_u64().unwrap() > 0);
    let (code, r) = run_json(&["corpus", "--suite", "linked", "--p", "2", "--d", "2", "--lengths", "2", "--samples", "2"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn disagreement_contract() {
    assert_eq!(combine_verdicts(Some(true), Some(false)), Status::Disagreement);
    assert_eq!(Status::Disagreement.exit_code(), 3);
    let dir = scratch_dir("bug");
    let f = nodal_lls::exactalg::PrimeField::new(7).unwrap();
    let file = nodal_lls::cli::schema::InstanceFile::parse(&std::fs::read_to_string(data("worked.json")).unwrap()).unwrap();
    let inst = file.build(&f).unwrap();
    let cand = file.build_candidate(&inst, &file.candidates[0]).unwrap();
    let path = cli::write_bug_bundle(&dir, &inst, 0, &cand, serde_json::json!({ "kernel": true, "eh": false })).unwrap();
    let bundle: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(bundle["schema"], "nodal-lls/bug@1");
    // the bundle's instance replays through the normal entry point
    let replay = dir.join("replay.json");
    std::fs::write(&replay, bundle["instance"].to_string()).unwrap();
    assert_eq!(run(&["lls-check", replay.to_str().unwrap()]).0, 0);
}

#[test]
fn binary_matches_in_process_run() {
    let bin = env!("CARGO_BIN_EXE_nodal-lls");
    let out = Command::new(bin).args(["--format", "json", "lls-check", &data("worked.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run(&["--format", "json", "lls-check", &data("worked.json")]).1);
    let out = Command::new(bin).args(["validate", &data("loop.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
