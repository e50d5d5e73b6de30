use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::score::score_report;
use super::{apply_judgments, auto_assess, GradeValue, ScoringConfig};
use crate::agreement::RaterMatrix;
use crate::error::SessionError;
use crate::report::ReportDocument;
use crate::rubric::Rubric;

pub const SESSION_SCHEMA: &str = "stream-grades/v1";

/// Scope label for once-per-report criteria.
pub const REPORT_SCOPE: &str = "report";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Met,
    Unmet,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Judgment {
    pub seq: u64,
    pub requirement: String,
    /// Evaluation name, or `report` for once-per-report criteria.
    pub scope: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub r#override: bool,
}

/// A judgment before the session assigns it a sequence number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewJudgment {
    pub requirement: String,
    pub scope: String,
    pub verdict: Verdict,
    #[serde(default)]
    pub comment: Option<String>,
    #[serde(default)]
    pub r#override: bool,
}

/// One grader's append-only judgment log for one report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraderSession {
    pub schema: String,
    pub grader: String,
    pub report_digest: String,
    pub rubric_version: String,
    pub created: String,
    pub updated: String,
    pub judgments: Vec<Judgment>,
}

impl GraderSession {
    pub fn new(grader: &str, report_digest: &str, rubric_version: &str, now: &str) -> Self {
        GraderSession {
            schema: SESSION_SCHEMA.to_string(),
            grader: grader.to_string(),
            report_digest: report_digest.to_string(),
            rubric_version: rubric_version.to_string(),
            created: now.to_string(),
            updated: now.to_string(),
            judgments: Vec::new(),
        }
    }

    /// Sequence number of the latest judgment, 0 when empty.
    pub fn last_seq(&self) -> u64 {
        self.judgments.last().map_or(0, |j| j.seq)
    }

    /// Appends judgments if `base_seq` is still the latest sequence number.
    pub fn append(&mut self, base_seq: u64, batch: Vec<NewJudgment>, now: &str) -> Result<(), SessionError> {
        let expected = self.last_seq();
        if base_seq != expected {
            return Err(SessionError::StaleSequence { expected, got: base_seq });
        }
        for (seq, j) in (expected + 1..).zip(batch) {
            self.judgments.push(Judgment {
                seq,
                requirement: j.requirement,
                scope: j.scope,
                verdict: j.verdict,
                comment: j.comment,
                r#override: j.r#override,
            });
        }
        self.updated = now.to_string();
        Ok(())
    }

    /// Latest judgment per (requirement, scope), in order of first appearance.
    pub fn effective(&self) -> Vec<&Judgment> {
        let mut order: Vec<(&str, &str)> = Vec::new();
        let mut latest: BTreeMap<(&str, &str), &Judgment> = BTreeMap::new();
        for j in &self.judgments {
            let key = (j.requirement.as_str(), j.scope.as_str());
            if latest.insert(key, j).is_none() {
                order.push(key);
            }
        }
        order.into_iter().map(|k| latest[&k]).collect()
    }
}

pub fn parse_session(source: &str) -> Result<GraderSession, SessionError> {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let value: serde_json::Value =
        serde_json::from_str(source).map_err(|e| SessionError::Malformed(e.to_string()))?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(SESSION_SCHEMA) => {}
        Some(other) => return Err(SessionError::UnknownSchema(other.to_string())),
        None => return Err(SessionError::Malformed("missing `schema`".into())),
    }
    let session: GraderSession =
        serde_json::from_value(value).map_err(|e| SessionError::Malformed(e.to_string()))?;
    let mut prev = 0;
    for j in &session.judgments {
        if j.seq <= prev {
            return Err(SessionError::Malformed(format!("sequence numbers must increase (found {} after {prev})", j.seq)));
        }
        prev = j.seq;
    }
    Ok(session)
}

pub fn serialize_session(session: &GraderSession) -> String {
    let mut s = serde_json::to_string_pretty(session).expect("session serializes");
    s.push('\n');
    s
}

/// Ratings from several graders, reduced to cells every grader could grade.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedRatings {
    pub matrix: RaterMatrix,
    /// Cells left out of the matrix, with the reason.
    pub excluded: Vec<ExcludedCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedCell {
    pub item: String,
    pub reason: String,
}

/// Grades the report once per session and lines the graders up cell by cell.
///
/// Cells that some grader ruled not applicable or left pending are excluded.
/// Disagreement over applicability is reported, since it is itself a
/// disagreement the matrix cannot show.
pub fn merge_grader_sessions(
    sessions: &[GraderSession],
    report: &ReportDocument,
    rubric: &Rubric,
) -> Result<MergedRatings, SessionError> {
    if sessions.len() < 2 {
        return Err(SessionError::TooFewSessions);
    }
    let base = auto_assess(report, rubric).map_err(|e| SessionError::Malformed(e.to_string()))?;
    if sessions.iter().any(|s| s.report_digest != base.report_digest) {
        return Err(SessionError::ReportMismatch);
    }
    if sessions.iter().any(|s| s.rubric_version != rubric.version) {
        return Err(SessionError::RubricMismatch);
    }
    let config = ScoringConfig { allow_pending: true, ..ScoringConfig::default() };
    let mut cards = Vec::with_capacity(sessions.len());
    for s in sessions {
        let judged = apply_judgments(&base, s, rubric)?;
        cards.push(score_report(&judged, rubric, &config).expect("pending allowed"));
    }

    let mut items = Vec::new();
    let mut values = Vec::new();
    let mut excluded = Vec::new();
    let first = &cards[0];
    for (r, row) in first.rows.iter().enumerate() {
        for (c, col) in first.columns.iter().enumerate() {
            let cells: Vec<_> = cards.iter().map(|card| &card.rows[r].cells[c]).collect();
            let item = format!("{}/{}", row.label, col.criterion);
            let na = cells.iter().filter(|cell| cell.grade == GradeValue::NotApplicable).count();
            if na == cells.len() {
                continue;
            }
            if na > 0 {
                excluded.push(ExcludedCell { item, reason: format!("applicability disagreement ({na} of {} graders ruled it out)", cells.len()) });
                continue;
            }
            if cells.iter().any(|cell| cell.pending) {
                excluded.push(ExcludedCell { item, reason: "judgments pending".into() });
                continue;
            }
            values.push(cells.iter().map(|cell| cell.grade.points()).collect());
            items.push(item);
        }
    }
    let raters = sessions.iter().map(|s| s.grader.clone()).collect();
    Ok(MergedRatings { matrix: RaterMatrix { items, raters, values }, excluded })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nj(req: &str, v: Verdict) -> NewJudgment {
        NewJudgment { requirement: req.into(), scope: "e".into(), verdict: v, comment: None, r#override: false }
    }

    #[test]
    fn append_checks_base_seq() {
        let mut s = GraderSession::new("g", "d", "stream-v1", "t0");
        s.append(0, vec![nj("1(i)A", Verdict::Met), nj("1(i)B", Verdict::Met)], "t1").unwrap();
        assert_eq!(s.last_seq(), 2);
        assert_eq!(s.append(1, vec![], "t2"), Err(SessionError::StaleSequence { expected: 2, got: 1 }));
    }

    #[test]
    fn later_judgments_supersede() {
        let mut s = GraderSession::new("g", "d", "stream-v1", "t0");
        s.append(0, vec![nj("1(i)A", Verdict::Met), nj("1(i)B", Verdict::Met)], "t1").unwrap();
        s.append(2, vec![nj("1(i)A", Verdict::Unmet)], "t2").unwrap();
        let eff = s.effective();
        assert_eq!(eff.len(), 2);
        assert_eq!(eff[0].verdict, Verdict::Unmet);
        assert_eq!(s.judgments.len(), 3);
    }

    #[test]
    fn round_trip() {
        let mut s = GraderSession::new("g", "d", "stream-v1", "t0");
        s.append(0, vec![nj("1(i)A", Verdict::NotApplicable)], "t1").unwrap();
        assert_eq!(parse_session(&serialize_session(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_non_increasing_seq() {
        let mut s = GraderSession::new("g", "d", "stream-v1", "t0");
        s.append(0, vec![nj("1(i)A", Verdict::Met), nj("1(i)B", Verdict::Met)], "t1").unwrap();
        s.judgments[1].seq = 1;
        assert!(matches!(parse_session(&serialize_session(&s)), Err(SessionError::Malformed(_))));
        assert!(matches!(parse_session(r#"{"schema":"x"}"#), Err(SessionError::UnknownSchema(_))));
    }
}
