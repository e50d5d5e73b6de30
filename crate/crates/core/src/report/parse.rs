use std::collections::HashSet;

use serde_json::Value;
use sha2::{Digest, Sha256};

use super::ReportDocument;
use crate::error::ReportError;

pub const REPORT_SCHEMA: &str = "stream-report/v1";

/// Key the scaffolder uses for inline guidance. Ignored on read.
pub(crate) const COMMENT_KEY: &str = "//";

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedReport {
    pub report: ReportDocument,
    /// Unrecognized keys and missing blocks. Never fatal.
    pub warnings: Vec<String>,
}

pub fn parse_report(source: &str) -> Result<ParsedReport, ReportError> {
    let source = source.trim_start_matches('\u{feff}');
    let mut value: Value = serde_json::from_str(source).map_err(|e| ReportError::Malformed(e.to_string()))?;
    match value.get("schema") {
        Some(Value::String(s)) if s == REPORT_SCHEMA => {}
        Some(Value::String(s)) => return Err(ReportError::UnknownSchema(s.clone())),
        Some(_) => return Err(ReportError::Malformed("`schema` must be a string".into())),
        None => return Err(ReportError::Malformed("missing `schema` field".into())),
    }
    strip_comments(&mut value);

    let mut warnings = Vec::new();
    let report: ReportDocument = serde_ignored::deserialize(value, |path| {
        warnings.push(format!("unrecognized field `{path}`"));
    })
    .map_err(|e| ReportError::Malformed(e.to_string()))?;

    let mut names = HashSet::new();
    for e in &report.evaluations {
        if !names.insert(e.name.as_str()) {
            return Err(ReportError::DuplicateEvaluation(e.name.clone()));
        }
    }
    warnings.extend(absent_blocks(&report));
    Ok(ParsedReport { report, warnings })
}

fn strip_comments(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove(COMMENT_KEY);
            map.values_mut().for_each(strip_comments);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_comments),
        _ => {}
    }
}

fn absent_blocks(r: &ReportDocument) -> Vec<String> {
    let mut out = Vec::new();
    let mut note = |what: &str| out.push(format!("absent block: {what}"));
    if r.evaluations.is_empty() {
        note("evaluations");
    }
    if r.shared.threat_models.is_empty() {
        note("shared.threat_models");
    }
    if r.shared.model_versions.is_empty() {
        note("shared.model_versions");
    }
    if r.shared.standard_elicitation.is_none() {
        note("shared.standard_elicitation");
    }
    if r.shared.results_interpretation.is_none() {
        note("shared.results_interpretation");
    }
    for e in &r.evaluations {
        let g = e.metadata.grading_method;
        if g.has_human() && e.construction.human_grading.is_none() {
            note(&format!("evaluations[{}].construction.human_grading", e.name));
        }
        if g.has_auto() && e.construction.auto_grading.is_none() {
            note(&format!("evaluations[{}].construction.auto_grading", e.name));
        }
        if e.baseline.is_none() {
            note(&format!("evaluations[{}].baseline", e.name));
        }
    }
    out
}

/// Canonical text: keys in schema order, 2-space indentation, trailing newline.
pub fn serialize_report(report: &ReportDocument) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

/// SHA-256 of the canonical serialization, lowercase hex.
pub fn report_digest(report: &ReportDocument) -> String {
    hex::encode(Sha256::digest(serialize_report(report).as_bytes()))
}
