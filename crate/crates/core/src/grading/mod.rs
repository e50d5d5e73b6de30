//! From report and judgments to grades.
//!
//! [`auto_assess`] settles what the document alone can settle, graders fill in
//! the rest through [`GraderSession`]s, and [`score_report`] rolls statuses up
//! into a [`Scorecard`].

mod assess;
mod grade;
mod score;
mod session;

use serde::{Deserialize, Serialize};

pub use assess::{apply_judgments, auto_assess, Assessment, EvaluationAssessment, ASSESSMENT_SCHEMA};
pub use grade::{grade_criterion, Grade, GradeValue, Outcome};
pub use score::{display_percent, score_report, CategoryTotal, Cell, Column, Row, RowKind, Scorecard};
pub use session::{
    merge_grader_sessions, parse_session, serialize_session, ExcludedCell, GraderSession, Judgment, MergedRatings,
    NewJudgment, Verdict, REPORT_SCOPE, SESSION_SCHEMA,
};

/// Default share of applicable full-credit items needed for Satisfied.
pub const DEFAULT_FULL_CREDIT_THRESHOLD: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringConfig {
    pub full_credit_threshold: f64,
    /// Score anyway while judgments are pending, counting them as not satisfied.
    pub allow_pending: bool,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig { full_credit_threshold: DEFAULT_FULL_CREDIT_THRESHOLD, allow_pending: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    MetAuto,
    MetJudged,
    Unmet,
    NotApplicable,
    PendingJudgment,
}

impl Status {
    pub fn is_met(self) -> bool {
        matches!(self, Status::MetAuto | Status::MetJudged)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementStatus {
    pub requirement: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub judge: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub overridden: bool,
}

impl RequirementStatus {
    pub(crate) fn auto(requirement: &str, status: Status, note: Option<String>) -> Self {
        RequirementStatus { requirement: requirement.to_string(), status, note, judge: None, overridden: false }
    }

    /// Settled by the engine rather than a grader.
    pub fn is_auto_resolved(&self) -> bool {
        self.judge.is_none() && self.status != Status::PendingJudgment
    }
}

/// Statuses for one applicable criterion in one scope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionRecord {
    pub criterion: String,
    pub statuses: Vec<RequirementStatus>,
    /// Ids of special rules whose fact trigger held for this scope.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fact_rules: Vec<String>,
}

impl CriterionRecord {
    pub fn pending(&self) -> usize {
        self.statuses.iter().filter(|s| s.status == Status::PendingJudgment).count()
    }
}
