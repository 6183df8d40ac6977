//! Response comparison and library validation: run vector sets against a
//! runner and diff the answers against expected response sets.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Value};

use acvp_core::model::{
    field_value_to_json, parse_response_set, parse_vector_set, FieldMap, FieldValue, ResponseSet,
};

use crate::protocol::{spawn_runner, RunnerFailure, RunnerReply, RunnerSession};

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Mismatch {
        field: String,
        expected: String,
        actual: String,
    },
    /// Present in expected, absent from actual.
    Missing,
    /// Present in actual, absent from expected.
    Extra,
    RunnerError(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Mismatch { .. } => "mismatch",
            Verdict::Missing => "missing",
            Verdict::Extra => "extra",
            Verdict::RunnerError(_) => "runner-error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseVerdict {
    pub vs_id: u64,
    pub tc_id: u64,
    pub verdict: Verdict,
    /// Extra fields in the actual result, reported informationally.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub verdicts: Vec<CaseVerdict>,
    /// Set-level problems (vs_id mismatch, unreadable files, refusals).
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for name in ["pass", "mismatch", "missing", "extra", "runner-error"] {
            counts.insert(name, 0);
        }
        for v in &self.verdicts {
            *counts.get_mut(v.verdict.name()).unwrap() += 1;
        }
        counts
    }

    pub fn overall_pass(&self) -> bool {
        self.errors.is_empty() && self.verdicts.iter().all(|v| v.verdict == Verdict::Pass)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.verdicts.extend(other.verdicts);
        self.errors.extend(other.errors);
    }

    pub fn to_json(&self) -> Value {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                let mut obj = json!({
                    "vsId": v.vs_id,
                    "tcId": v.tc_id,
                    "verdict": v.verdict.name(),
                });
                if let Verdict::Mismatch { field, expected, actual } = &v.verdict {
                    obj["field"] = json!(field);
                    obj["expected"] = json!(expected);
                    obj["actual"] = json!(actual);
                }
                if let Verdict::RunnerError(message) = &v.verdict {
                    obj["message"] = json!(message);
                }
                if !v.notes.is_empty() {
                    obj["notes"] = json!(v.notes);
                }
                obj
            })
            .collect();
        let counts: BTreeMap<_, _> = self.counts();
        json!({
            "overall": if self.overall_pass() { "pass" } else { "fail" },
            "counts": counts,
            "errors": self.errors,
            "verdicts": verdicts,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            match &v.verdict {
                Verdict::Pass => {}
                Verdict::Mismatch { field, expected, actual } => {
                    let _ = writeln!(
                        out,
                        "vs {} tc {}: mismatch on `{field}`: expected {expected}, got {actual}",
                        v.vs_id, v.tc_id
                    );
                }
                Verdict::Missing => {
                    let _ = writeln!(out, "vs {} tc {}: missing from actual results", v.vs_id, v.tc_id);
                }
                Verdict::Extra => {
                    let _ = writeln!(out, "vs {} tc {}: not in expected results", v.vs_id, v.tc_id);
                }
                Verdict::RunnerError(message) => {
                    let _ = writeln!(out, "vs {} tc {}: runner error: {message}", v.vs_id, v.tc_id);
                }
            }
            for note in &v.notes {
                let _ = writeln!(out, "vs {} tc {}: note: {note}", v.vs_id, v.tc_id);
            }
        }
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        let counts = self.counts();
        let _ = writeln!(
            out,
            "{}: {} pass, {} mismatch, {} missing, {} extra, {} runner-error",
            if self.overall_pass() { "PASS" } else { "FAIL" },
            counts["pass"],
            counts["mismatch"],
            counts["missing"],
            counts["extra"],
            counts["runner-error"],
        );
        out
    }
}

fn render(value: &FieldValue) -> String {
    field_value_to_json(value).to_string()
}

/// Field-level equality with hex compared case-insensitively: byte-like
/// values are compared as bytes, everything else structurally.
fn values_agree(a: &FieldValue, b: &FieldValue) -> bool {
    if let (Some(x), Some(y)) = (a.as_bytes(), b.as_bytes()) {
        return x == y;
    }
    a == b
}

fn compare_case(vs_id: u64, tc_id: u64, expected: &FieldMap, actual: &FieldMap) -> CaseVerdict {
    let mut notes = Vec::new();
    for name in actual.keys() {
        if !expected.contains_key(name) {
            notes.push(format!("extra field `{name}` in actual result"));
        }
    }
    for (name, want) in expected {
        match actual.get(name) {
            None => {
                return CaseVerdict {
                    vs_id,
                    tc_id,
                    verdict: Verdict::Mismatch {
                        field: name.clone(),
                        expected: render(want),
                        actual: "<absent>".to_string(),
                    },
                    notes,
                }
            }
            Some(got) if !values_agree(want, got) => {
                return CaseVerdict {
                    vs_id,
                    tc_id,
                    verdict: Verdict::Mismatch {
                        field: name.clone(),
                        expected: render(want),
                        actual: render(got),
                    },
                    notes,
                }
            }
            Some(_) => {}
        }
    }
    CaseVerdict { vs_id, tc_id, verdict: Verdict::Pass, notes }
}

pub fn compare_responses(expected: &ResponseSet, actual: &ResponseSet) -> ValidationReport {
    let mut report = ValidationReport::default();
    if expected.vs_id != actual.vs_id {
        report.errors.push(format!(
            "vsId mismatch: expected {}, actual {}",
            expected.vs_id, actual.vs_id
        ));
        return report;
    }
    let actual_by_id: BTreeMap<u64, &FieldMap> =
        actual.results.iter().map(|(id, fields)| (*id, fields)).collect();
    let expected_ids: std::collections::BTreeSet<u64> =
        expected.results.iter().map(|(id, _)| *id).collect();

    for (tc_id, want) in &expected.results {
        match actual_by_id.get(tc_id) {
            Some(got) => report
                .verdicts
                .push(compare_case(expected.vs_id, *tc_id, want, got)),
            None => report.verdicts.push(CaseVerdict {
                vs_id: expected.vs_id,
                tc_id: *tc_id,
                verdict: Verdict::Missing,
                notes: vec![],
            }),
        }
    }
    for (tc_id, _) in &actual.results {
        if !expected_ids.contains(tc_id) {
            report.verdicts.push(CaseVerdict {
                vs_id: expected.vs_id,
                tc_id: *tc_id,
                verdict: Verdict::Extra,
                notes: vec![],
            });
        }
    }
    report
}

// ---------------------------------------------------------------------------
// validate_library

pub struct ValidateConfig {
    pub timeout_ms: u64,
}

fn runner_error_report(expected: &ResponseSet, message: &str) -> ValidationReport {
    ValidationReport {
        verdicts: expected
            .results
            .iter()
            .map(|(tc_id, _)| CaseVerdict {
                vs_id: expected.vs_id,
                tc_id: *tc_id,
                verdict: Verdict::RunnerError(message.to_string()),
                notes: vec![],
            })
            .collect(),
        errors: vec![],
    }
}

/// Run every (vector set, expected responses) pair against the runner and
/// aggregate the per-case verdicts. A runner failure yields runner-error
/// verdicts for that set and a fresh runner for the next one.
pub fn validate_library(
    pairs: &[(PathBuf, PathBuf)],
    command: &str,
    args: &[String],
    config: &ValidateConfig,
) -> Result<ValidationReport, String> {
    let mut report = ValidationReport::default();
    let mut session: Option<RunnerSession> = None;
    for (vs_path, expected_path) in pairs {
        let vs_text = std::fs::read_to_string(vs_path)
            .map_err(|e| format!("{}: {e}", vs_path.display()))?;
        let expected_text = std::fs::read_to_string(expected_path)
            .map_err(|e| format!("{}: {e}", expected_path.display()))?;
        let vs = parse_vector_set(&vs_text).map_err(|e| format!("{}: {e}", vs_path.display()))?;
        let expected = parse_response_set(&expected_text)
            .map_err(|e| format!("{}: {e}", expected_path.display()))?;

        if session.is_none() {
            session = Some(
                spawn_runner(command, args, config.timeout_ms, false)
                    .map_err(|e| format!("cannot spawn runner: {e}"))?,
            );
        }
        let outcome = session.as_mut().unwrap().run_vector_set(&vs);
        match outcome {
            Ok(RunnerReply::Responses(actual)) => report.merge(compare_responses(&expected, &actual)),
            Ok(RunnerReply::Refused { message }) => {
                report.merge(runner_error_report(&expected, &message))
            }
            Err(failure) => {
                report.merge(runner_error_report(&expected, &failure.to_string()));
                // poisoned: force a respawn for the next set
                session = None;
                if matches!(failure, RunnerFailure::Spawn(_)) {
                    return Err(failure.to_string());
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(vs_id: u64, results: &[(u64, &[(&str, FieldValue)])]) -> ResponseSet {
        ResponseSet {
            vs_id,
            results: results
                .iter()
                .map(|(id, fields)| {
                    let map: FieldMap = fields
                        .iter()
                        .map(|(k, v)| (k.to_string(), v.clone()))
                        .collect();
                    (*id, map)
                })
                .collect(),
        }
    }

    #[test]
    fn identical_sets_pass() {
        let a = rs(1, &[(1, &[("md", FieldValue::HexBytes(vec![0xAB]))])]);
        let report = compare_responses(&a, &a.clone());
        assert!(report.overall_pass());
        assert_eq!(report.counts()["pass"], 1);
    }

    #[test]
    fn hex_comparison_is_case_insensitive() {
        let expected = rs(1, &[(1, &[("md", FieldValue::Text("ab12".into()))])]);
        let actual = rs(1, &[(1, &[("md", FieldValue::Text("AB12".into()))])]);
        assert!(compare_responses(&expected, &actual).overall_pass());
    }

    #[test]
    fn mismatch_names_case_and_field() {
        let expected = rs(1, &[(3, &[("md", FieldValue::HexBytes(vec![0xAB]))])]);
        let actual = rs(1, &[(3, &[("md", FieldValue::HexBytes(vec![0xAC]))])]);
        let report = compare_responses(&expected, &actual);
        assert_eq!(report.verdicts.len(), 1);
        assert_eq!(report.verdicts[0].tc_id, 3);
        assert!(matches!(&report.verdicts[0].verdict, Verdict::Mismatch { field, .. } if field == "md"));
    }

    #[test]
    fn missing_and_extra_are_symmetric() {
        let expected = rs(1, &[(1, &[]), (2, &[])]);
        let actual = rs(1, &[(1, &[]), (9, &[])]);
        let report = compare_responses(&expected, &actual);
        assert_eq!(report.counts()["missing"], 1);
        assert_eq!(report.counts()["extra"], 1);
        let swapped = compare_responses(&actual, &expected);
        assert_eq!(swapped.counts()["missing"], 1);
        assert_eq!(swapped.counts()["extra"], 1);
    }

    #[test]
    fn extra_fields_are_informational() {
        let expected = rs(1, &[(1, &[("md", FieldValue::HexBytes(vec![1]))])]);
        let actual = rs(
            1,
            &[(1, &[("md", FieldValue::HexBytes(vec![1])), ("debug", FieldValue::Int(5))])],
        );
        let report = compare_responses(&expected, &actual);
        assert!(report.overall_pass());
        assert_eq!(report.verdicts[0].notes.len(), 1);
    }

    #[test]
    fn vs_id_mismatch_is_report_level() {
        let a = rs(1, &[]);
        let b = rs(2, &[]);
        let report = compare_responses(&a, &b);
        assert!(!report.overall_pass());
        assert_eq!(report.errors.len(), 1);
    }
}
