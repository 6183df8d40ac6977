//! Integration tests for the command-line surface and a few wire-protocol
//! corner cases that the acceptance suite does not exercise directly.

use std::path::{Path, PathBuf};
use std::process::Command;

use acvp_core::model::parse_vector_set;
use acvp_kit::protocol::{spawn_runner, RunnerFailure};
use acvp_kit::validator::{validate_library, ValidateConfig};

const ACVPKIT: &str = env!("CARGO_BIN_EXE_acvpkit");
const FIXTURE_RUNNER: &str = env!("CARGO_BIN_EXE_acvp-fixture-runner");
const REF_RUNNER: &str = env!("CARGO_BIN_EXE_acvp-ref-runner");

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn acvpkit(args: &[&str]) -> std::process::Output {
    Command::new(ACVPKIT).args(args).output().unwrap()
}

#[test]
fn lint_exit_codes() {
    let good = fixtures_dir().join("vectors/sha2_256_kat.json");
    let bad = fixtures_dir().join("schema/bad_gcm.json");
    assert_eq!(acvpkit(&["lint", good.to_str().unwrap()]).status.code(), Some(0));
    let out = acvpkit(&["lint", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("tcId 1"));
    assert_eq!(acvpkit(&["lint", "/no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn expand_then_group_round_trips_shared_fields() {
    let demo = fixtures_dir().join("vectors/sha2_256_shared_demo.json");
    let expanded = acvpkit(&["expand", demo.to_str().unwrap()]);
    assert!(expanded.status.success());
    let expanded_text = String::from_utf8(expanded.stdout).unwrap();
    let vs = parse_vector_set(&expanded_text).unwrap();
    assert!(vs.groups.iter().all(|g| g.subgroups.is_empty()));
    // every case now carries its own msg literal
    assert!(vs.groups[0].tests.iter().all(|t| t.fields.contains_key("msg")));

    let tmp = std::env::temp_dir().join(format!("acvp-expand-{}.json", std::process::id()));
    std::fs::write(&tmp, &expanded_text).unwrap();
    let grouped = acvpkit(&["group", tmp.to_str().unwrap()]);
    assert!(grouped.status.success());
    let grouped_vs = parse_vector_set(&String::from_utf8(grouped.stdout).unwrap()).unwrap();
    // two of the three demo cases share a msg, so it must not hoist; a
    // field common to all three (there is none besides tcId) would
    let group = &grouped_vs.groups[0];
    assert!(!group.shared_fields.contains_key("msg"));
    std::fs::remove_file(&tmp).unwrap();
}

#[test]
fn group_hoists_common_fields() {
    let tmp = std::env::temp_dir().join(format!("acvp-group-{}.json", std::process::id()));
    std::fs::write(
        &tmp,
        r#"{"vsId":9,"algorithm":"SHA2-256","revision":"1.0","testGroups":[
            {"tgId":1,"tests":[
                {"tcId":1,"msg":"AB","note":"x"},
                {"tcId":2,"msg":"AB","note":"y"}]}]}"#,
    )
    .unwrap();
    let out = acvpkit(&["group", tmp.to_str().unwrap()]);
    assert!(out.status.success());
    let vs = parse_vector_set(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let group = &vs.groups[0];
    assert!(group.shared_fields.contains_key("msg"), "common msg should hoist");
    assert!(!group.shared_fields.contains_key("note"), "differing field must stay");
    assert!(group.tests.iter().all(|t| !t.fields.contains_key("msg")));
    std::fs::remove_file(&tmp).unwrap();
}

#[test]
fn generate_is_deterministic_and_spec_checked() {
    let tmp = std::env::temp_dir().join(format!("acvp-gen-{}.bin", std::process::id()));
    std::fs::write(&tmp, b"generator determinism probe").unwrap();
    let a = acvpkit(&["generate", "--spec", "gcm", "--input", tmp.to_str().unwrap()]);
    let b = acvpkit(&["generate", "--spec", "gcm", "--input", tmp.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    parse_vector_set(&String::from_utf8(a.stdout).unwrap()).unwrap();

    let bad = acvpkit(&["generate", "--spec", "nope", "--input", tmp.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_file(&tmp).unwrap();
}

#[test]
fn run_prints_responses_and_propagates_failures() {
    let vec_file = fixtures_dir().join("vectors/bn_kat.json");
    let ok = acvpkit(&["run", "--runner", REF_RUNNER, vec_file.to_str().unwrap()]);
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"vsId\": 401"));

    // ECDSA is schema-only: the reference runner refuses it
    let ecdsa = fixtures_dir().join("schema/ecdsa_schema.json");
    let refused = acvpkit(&["run", "--runner", REF_RUNNER, ecdsa.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("refused"));
}

#[test]
fn validate_reports_wrong_answers_as_mismatches() {
    let pairs = vec![(
        fixtures_dir().join("vectors/sha2_256_kat.json"),
        fixtures_dir().join("expected/sha2_256_kat.json"),
    )];
    let report = validate_library(
        &pairs,
        FIXTURE_RUNNER,
        &["wrong-answer".to_string()],
        &ValidateConfig { timeout_ms: 5_000 },
    )
    .unwrap();
    assert!(!report.overall_pass());
    let counts = report.counts();
    assert_eq!(counts.get("pass").copied().unwrap_or(0), 0);
    assert!(counts.get("mismatch").copied().unwrap_or(0) > 0);
}

#[test]
fn banner_before_handshake_is_a_protocol_failure() {
    let err = match spawn_runner(FIXTURE_RUNNER, &["banner".to_string()], 2_000, false) {
        Err(e) => e,
        Ok(_) => panic!("banner runner should fail the handshake"),
    };
    match &err {
        RunnerFailure::Protocol { line, .. } => {
            assert!(line.contains("fixture runner v1"), "offending line not reported: {line}");
        }
        other => panic!("expected a protocol failure, got {other}"),
    }
}

#[test]
fn timeout_reaps_the_child() {
    let mut session =
        spawn_runner(REF_RUNNER, &["--timeout-self-test".to_string()], 500, false).unwrap();
    let pid = session.child_pid();
    let demo = fixtures_dir().join("vectors/sha2_256_shared_demo.json");
    let vs = parse_vector_set(&std::fs::read_to_string(demo).unwrap()).unwrap();
    let failure = session.run_vector_set(&vs).unwrap_err();
    assert!(matches!(failure, RunnerFailure::Timeout { .. }), "{failure}");
    drop(session);
    // the supervisor must have killed and waited on the hung child
    if let Ok(stat) = std::fs::read_to_string(format!("/proc/{pid}/stat")) {
        let state = stat
            .rsplit(')')
            .next()
            .and_then(|rest| rest.trim_start().chars().next());
        assert_ne!(state, Some('Z'), "child {pid} left as a zombie");
    }
}

#[test]
fn validate_cli_json_report_shape() {
    let out = Command::new(ACVPKIT)
        .args(["validate", "--runner", REF_RUNNER, "--json", "--expected"])
        .arg(fixtures_dir().join("expected"))
        .arg(fixtures_dir().join("vectors"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.get("verdicts").and_then(|v| v.as_array()).is_some());
    assert_eq!(report.pointer("/overall").and_then(|v| v.as_str()), Some("pass"));
    assert!(report.pointer("/counts/pass").and_then(|v| v.as_u64()).unwrap() > 0);
}
