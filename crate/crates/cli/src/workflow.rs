//! Report workflows shared by the command line and the HTTP service.
//!
//! Both front ends go through these functions so that the same inputs yield
//! byte-identical documents.

use serde::Serialize;
use stream_audit::agreement::{agreement_summary, AgreementReport, AlphaMetric, KappaWeighting};
use stream_audit::error::{AgreementError, AssessError, JudgmentError, ReportError, ScoreError, SessionError};
use stream_audit::grading::{apply_judgments, auto_assess, merge_grader_sessions, score_report, Assessment, GraderSession, Scorecard, ScoringConfig};
use stream_audit::report::{parse_report, ParsedReport};
use stream_audit::Rubric;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorkflowError {
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Assess(#[from] AssessError),
    #[error("{grader}: {source}")]
    Judgment { grader: String, source: JudgmentError },
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Agreement(#[from] AgreementError),
}

/// Pretty JSON with a trailing newline, the layout of every document the tool writes.
pub fn to_document<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn load_report(source: &str) -> Result<ParsedReport, WorkflowError> {
    Ok(parse_report(source)?)
}

/// Auto-assessment with each session's judgments applied in order.
///
/// A later session overrides an earlier one where both judge the same requirement.
pub fn assess_with_sessions(
    parsed: &ParsedReport,
    sessions: &[GraderSession],
    rubric: &Rubric,
) -> Result<Assessment, WorkflowError> {
    let mut assessment = auto_assess(&parsed.report, rubric)?;
    for s in sessions {
        assessment = apply_judgments(&assessment, s, rubric)
            .map_err(|source| WorkflowError::Judgment { grader: s.grader.clone(), source })?;
    }
    Ok(assessment)
}

pub fn scorecard(
    parsed: &ParsedReport,
    sessions: &[GraderSession],
    rubric: &Rubric,
    config: &ScoringConfig,
) -> Result<Scorecard, WorkflowError> {
    let assessment = assess_with_sessions(parsed, sessions, rubric)?;
    Ok(score_report(&assessment, rubric, config)?)
}

pub fn agreement(
    parsed: &ParsedReport,
    sessions: &[GraderSession],
    rubric: &Rubric,
    weighting: KappaWeighting,
    metric: AlphaMetric,
) -> Result<AgreementReport, WorkflowError> {
    let merged = merge_grader_sessions(sessions, &parsed.report, rubric)?;
    let mut report = agreement_summary(&merged.matrix, weighting, metric)?;
    report.excluded = merged.excluded;
    Ok(report)
}
