use thiserror::Error;

use crate::rubric::{PredicateParseError, RubricFinding};

#[derive(Debug, Error)]
pub enum RubricError {
    #[error("malformed rubric: {0}")]
    Malformed(String),
    #[error("unknown rubric schema `{0}`")]
    UnknownSchema(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("{0}")]
    LeafCountMismatch(String),
    #[error("{0}")]
    BranchGroups(String),
    #[error("invalid rubric: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<RubricFinding>),
}

impl From<PredicateParseError> for RubricError {
    fn from(e: PredicateParseError) -> Self {
        RubricError::Malformed(e.to_string())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Malformed(String),
    #[error("unknown report schema `{0}`")]
    UnknownSchema(String),
    #[error("duplicate evaluation name `{0}`")]
    DuplicateEvaluation(String),
    #[error("unknown evaluation `{0}`")]
    UnknownEvaluation(String),
    #[error("unknown schema path `{0}`")]
    UnknownPath(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssessError {
    /// The rubric names a presence path this report schema does not declare.
    #[error("rubric and report schema disagree: unknown path `{path}` in {requirement}")]
    SchemaSkew { requirement: String, path: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JudgmentError {
    #[error("session targets report {found}, assessment is for {expected}")]
    ReportMismatch { expected: String, found: String },
    #[error("session uses rubric {found}, assessment uses {expected}")]
    VersionMismatch { expected: String, found: String },
    #[error("requirement not applicable: {requirement} in {scope}")]
    NotApplicable { requirement: String, scope: String },
    #[error("unknown requirement `{0}`")]
    UnknownRequirement(String),
    #[error("unknown scope `{0}`")]
    UnknownScope(String),
    #[error("{requirement} in {scope} was resolved automatically; set override and give a comment to change it")]
    OverrideRequired { requirement: String, scope: String },
    #[error("{requirement} in {scope}: a comment is required for {what}")]
    CommentRequired { requirement: String, scope: String, what: &'static str },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradeError {
    #[error("no status for applicable requirement {0}")]
    MissingStatus(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("{0} judgments pending")]
    Pending(usize),
    #[error(transparent)]
    Grade(#[from] GradeError),
    #[error("assessment uses rubric {found}, scoring with {expected}")]
    VersionMismatch { expected: String, found: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("malformed session: {0}")]
    Malformed(String),
    #[error("unknown session schema `{0}`")]
    UnknownSchema(String),
    #[error("need at least two graders")]
    TooFewSessions,
    #[error("sessions target different reports")]
    ReportMismatch,
    #[error("sessions use different rubric versions")]
    RubricMismatch,
    #[error("stale sequence number: expected {expected}, got {got}")]
    StaleSequence { expected: u64, got: u64 },
    #[error(transparent)]
    Judgment(#[from] JudgmentError),
}

#[derive(Debug, Error, PartialEq)]
pub enum AgreementError {
    #[error("no complete pairs")]
    NoCompletePairs,
    #[error("need at least two raters")]
    TooFewRaters,
    #[error("need at least two items rated by two or more raters")]
    TooFewItems,
    #[error("value {0} is not on the grade scale {{0, 0.5, 1}}")]
    OffScale(f64),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScorecardError {
    #[error("malformed scorecard: {0}")]
    Malformed(String),
    #[error("unknown scorecard schema `{0}`")]
    UnknownSchema(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScaffoldError {
    #[error("a report needs at least one evaluation")]
    NoEvaluations,
    #[error("invalid plan for evaluation {index}: {message}")]
    InvalidPlan { index: usize, message: String },
}
