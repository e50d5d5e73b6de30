#![allow(dead_code)]

use stream_audit::grading::{auto_assess, GraderSession, NewJudgment, Status, Verdict, REPORT_SCOPE};
use stream_audit::report::{parse_report, report_digest};
use stream_audit::Rubric;

pub const GOLD: &str = include_str!("../../../core/tests/fixtures/gold-report.json");

/// Every requirement left pending by the auto-assessment, as (scope, requirement).
pub fn pending_items() -> Vec<(String, String)> {
    let a = auto_assess(&parse_report(GOLD).unwrap().report, Rubric::builtin()).unwrap();
    let scopes = a
        .evaluations
        .iter()
        .map(|e| (e.name.clone(), &e.criteria))
        .chain(std::iter::once((REPORT_SCOPE.to_string(), &a.report_level)));
    let mut out = Vec::new();
    for (scope, records) in scopes {
        for s in records.iter().flat_map(|r| &r.statuses) {
            if s.status == Status::PendingJudgment {
                out.push((scope.clone(), s.requirement.clone()));
            }
        }
    }
    out
}

/// Judgments resolving every pending item; `unmet` lists requirements judged Unmet instead of Met.
pub fn batch(unmet: &[&str]) -> Vec<NewJudgment> {
    pending_items()
        .into_iter()
        .map(|(scope, requirement)| NewJudgment {
            verdict: if unmet.contains(&requirement.as_str()) { Verdict::Unmet } else { Verdict::Met },
            requirement,
            scope,
            comment: None,
            r#override: false,
        })
        .collect()
}

pub fn session(grader: &str, unmet: &[&str]) -> GraderSession {
    let report = parse_report(GOLD).unwrap().report;
    let mut s = GraderSession::new(grader, &report_digest(&report), "stream-v1", "2026-01-01T00:00:00Z");
    s.append(0, batch(unmet), "2026-01-01T00:00:00Z").unwrap();
    s
}
