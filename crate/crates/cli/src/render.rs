//! Report builders and the three output renderings. JSON is byte-stable:
//! struct fields serialize in declaration order, map keys are sorted, and
//! nothing depends on wall-clock time unless timings were asked for.

use std::collections::BTreeMap;

use serde::Serialize;

use semistar_core::topology::FinSpace;
use semistar_core::verify::{Status, VerdictReport};

#[derive(Serialize)]
pub struct SpaceReport {
    pub space: String,
    pub model: String,
    pub inverse: bool,
    pub points: Vec<String>,
    pub opens: Vec<Vec<usize>>,
    pub checks: BTreeMap<String, bool>,
}

pub fn space_report(kind: &str, model: &str, space: &FinSpace, inverse: bool) -> SpaceReport {
    let opens = space
        .opens()
        .iter()
        .map(|&o| (0..space.n()).filter(|&x| o & (1 << x) != 0).collect())
        .collect();
    let mut checks = BTreeMap::new();
    checks.insert("quasi-compact".to_string(), space.is_quasi_compact(space.full_mask()));
    checks.insert("sober".to_string(), space.is_sober());
    checks.insert("spectral".to_string(), space.is_spectral());
    checks.insert("t0".to_string(), space.is_t0());
    SpaceReport {
        space: kind.to_string(),
        model: model.to_string(),
        inverse,
        points: space.labels().to_vec(),
        opens,
        checks,
    }
}

pub fn space_text(report: &SpaceReport, space: &FinSpace) -> String {
    let mut out = String::new();
    let head = if report.inverse { " (inverse topology)" } else { "" };
    out.push_str(&format!("space {} on {}{head}\n", report.space, report.model));
    out.push_str(&format!("points: {}\n", report.points.len()));
    for (i, p) in report.points.iter().enumerate() {
        out.push_str(&format!("  {i}: {p}\n"));
    }
    out.push_str(&format!("opens: {}\n", space.opens().len()));
    for &o in space.opens() {
        out.push_str(&format!("  {}\n", space.set_label(o)));
    }
    out.push_str("checks:\n");
    for (name, ok) in &report.checks {
        out.push_str(&format!("  {name}: {ok}\n"));
    }
    out
}

/// One node per point, one edge per covering pair of the specialization
/// order, drawn upward.
pub fn space_dot(report: &SpaceReport, space: &FinSpace) -> String {
    let mut out = String::new();
    out.push_str("digraph specialization {\n");
    out.push_str(&format!(
        "  label=\"{} on {}{}\";\n",
        report.space,
        report.model,
        if report.inverse { ", inverse topology" } else { "" }
    ));
    out.push_str("  rankdir=BT;\n  node [shape=box];\n");
    for (i, p) in report.points.iter().enumerate() {
        out.push_str(&format!("  n{i} [label=\"{}\"];\n", dot_escape(p)));
    }
    for (x, y) in space.hasse_edges() {
        out.push_str(&format!("  n{x} -> n{y};\n"));
    }
    out.push_str("}\n");
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub check_id: String,
    pub claim: String,
    pub model: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    pub witness: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

pub fn verdict_json(r: &VerdictReport, runtime_ms: Option<u64>) -> VerdictJson {
    let (status, skip_reason) = match &r.status {
        Status::Pass => ("PASS", None),
        Status::Fail => ("FAIL", None),
        Status::Skip(reason) => ("SKIP", Some(reason.clone())),
    };
    VerdictJson {
        check_id: r.check_id.to_string(),
        claim: r.claim.to_string(),
        model: r.model.clone(),
        status: status.to_string(),
        skip_reason,
        witness: r.witness.clone(),
        runtime_ms,
    }
}

pub fn verdicts_text(reports: &[VerdictReport], timings: &[Option<u64>]) -> String {
    let mut out = String::new();
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for (r, ms) in reports.iter().zip(timings) {
        let time = ms.map(|ms| format!(" ({ms} ms)")).unwrap_or_default();
        match &r.status {
            Status::Pass => {
                passed += 1;
                out.push_str(&format!("PASS {}{time}  {}\n", r.check_id, r.claim));
            }
            Status::Fail => {
                failed += 1;
                out.push_str(&format!("FAIL {}{time}  {}\n", r.check_id, r.claim));
            }
            Status::Skip(reason) => {
                skipped += 1;
                out.push_str(&format!("SKIP {}{time}  {reason}\n", r.check_id));
            }
        }
        for (key, value) in &r.witness {
            out.push_str(&format!("       {key}: {value}\n"));
        }
    }
    out.push_str(&format!(
        "{} checks: {passed} passed, {failed} failed, {skipped} skipped\n",
        reports.len()
    ));
    out
}

pub fn to_json_string(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
