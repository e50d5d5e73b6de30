//! Per-evaluation facts that select which rubric branches apply.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimpleFormat {
    MultipleChoice,
    MultipleSelect,
    ShortAnswer,
    OpenEnded,
    Agentic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormatShare {
    pub format: SimpleFormat,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerFormat {
    MultipleChoice,
    MultipleSelect,
    ShortAnswer,
    OpenEnded,
    Agentic,
    Mixed(Vec<FormatShare>),
}

impl AnswerFormat {
    /// One representative of each shape; `Mixed` uses an even two-way split.
    pub fn variants() -> Vec<AnswerFormat> {
        vec![
            AnswerFormat::MultipleChoice,
            AnswerFormat::MultipleSelect,
            AnswerFormat::ShortAnswer,
            AnswerFormat::OpenEnded,
            AnswerFormat::Agentic,
            AnswerFormat::Mixed(vec![
                FormatShare { format: SimpleFormat::MultipleChoice, proportion: 0.5 },
                FormatShare { format: SimpleFormat::ShortAnswer, proportion: 0.5 },
            ]),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingMethod {
    AnswerKeyOnly,
    HumanGraded,
    AutoGraded,
    Both,
}

impl GradingMethod {
    pub const ALL: [GradingMethod; 4] = [
        GradingMethod::AnswerKeyOnly,
        GradingMethod::HumanGraded,
        GradingMethod::AutoGraded,
        GradingMethod::Both,
    ];

    pub fn has_human(self) -> bool {
        matches!(self, GradingMethod::HumanGraded | GradingMethod::Both)
    }

    pub fn has_auto(self) -> bool {
        matches!(self, GradingMethod::AutoGraded | GradingMethod::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    HumanBaseline,
    NoHumanBaseline,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 2] = [BaselineKind::HumanBaseline, BaselineKind::NoHumanBaseline];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationMetadata {
    pub answer_format: AnswerFormat,
    pub grading_method: GradingMethod,
    pub baseline_kind: BaselineKind,
}

/// Tolerance on the sum of mixed-format proportions.
pub const PROPORTION_TOLERANCE: f64 = 1e-9;

impl EvaluationMetadata {
    pub fn new(answer_format: AnswerFormat, grading_method: GradingMethod, baseline_kind: BaselineKind) -> Self {
        EvaluationMetadata { answer_format, grading_method, baseline_kind }
    }

    /// Problems with the metadata itself, e.g. mixed proportions that do not sum to 1.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let AnswerFormat::Mixed(shares) = &self.answer_format {
            if shares.is_empty() {
                out.push("mixed answer format lists no formats".to_string());
            }
            if shares.iter().any(|s| !(0.0..=1.0).contains(&s.proportion)) {
                out.push("mixed format proportion outside [0, 1]".to_string());
            }
            let sum: f64 = shares.iter().map(|s| s.proportion).sum();
            if (sum - 1.0).abs() > PROPORTION_TOLERANCE {
                out.push(format!("mixed format proportions sum to {sum}, expected 1"));
            }
        }
        out
    }

    /// Every combination of answer format, grading method and baseline kind.
    pub fn cross_product() -> Vec<EvaluationMetadata> {
        let mut out = Vec::new();
        for format in AnswerFormat::variants() {
            for grading in GradingMethod::ALL {
                for baseline in BaselineKind::ALL {
                    out.push(EvaluationMetadata::new(format.clone(), grading, baseline));
                }
            }
        }
        out
    }
}
