//! The STREAM v1 standard as immutable, versioned data.
//!
//! A [`Rubric`] holds six categories of criteria. Each criterion carries a
//! branch condition over [`EvaluationMetadata`], a minimum tier and a
//! full-credit tier of atomic requirements, and any footnote overrides that
//! change how the tiers combine into a grade.

mod applicability;
mod file;
mod predicate;
mod validate;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use applicability::{
    applicable_criteria, applicable_requirements, branch_applies, ApplicableCriterion,
    Applicability,
};
pub(crate) use applicability::requirement_applicability;
pub use file::{load_rubric, rubric_to_json, RUBRIC_SCHEMA};
pub use predicate::{FactKey, Predicate, PredicateParseError};
pub use validate::{validate_rubric, RubricFinding, RubricFindingKind};

use crate::error::RubricError;

/// Identifier of the embedded rubric.
pub const BUILTIN_VERSION: &str = "stream-v1";

const BUILTIN_SOURCE: &str = include_str!("../../data/stream-v1.json");

/// Expected criterion count per category, in category order.
pub const CATEGORY_LEAF_COUNTS: [usize; 6] = [3, 9, 3, 3, 5, 5];

/// Total number of criteria in the standard.
pub const CRITERION_COUNT: usize = 28;

#[derive(Debug, Clone, PartialEq)]
pub struct Rubric {
    pub version: String,
    pub categories: Vec<Category>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    PerEvaluation,
    OncePerReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Category {
    pub id: u8,
    pub title: String,
    pub scope: Scope,
    pub criteria: Vec<Criterion>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Always,
    HumanGraded,
    AutoGraded,
    HumanBaseline,
    NoHumanBaseline,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Always => "always",
            Branch::HumanGraded => "human_graded",
            Branch::AutoGraded => "auto_graded",
            Branch::HumanBaseline => "human_baseline",
            Branch::NoHumanBaseline => "no_human_baseline",
        }
    }

    pub fn parse(s: &str) -> Option<Branch> {
        [
            Branch::Always,
            Branch::HumanGraded,
            Branch::AutoGraded,
            Branch::HumanBaseline,
            Branch::NoHumanBaseline,
        ]
        .into_iter()
        .find(|b| b.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    /// Label such as `2(iv-a)`.
    pub id: String,
    pub title: String,
    /// One-line checklist question.
    pub summary: String,
    pub branch: Branch,
    pub minimum: Vec<AtomicRequirement>,
    pub full_credit: Vec<AtomicRequirement>,
    pub overrides: Vec<SpecialRule>,
}

impl Criterion {
    /// Minimum items followed by full-credit items, in label order.
    pub fn requirements(&self) -> impl Iterator<Item = &AtomicRequirement> {
        self.minimum.iter().chain(self.full_credit.iter())
    }

    pub fn requirement(&self, id: &str) -> Option<&AtomicRequirement> {
        self.requirements().find(|r| r.id == id)
    }

    /// Branch group such as `2(iv)` for `2(iv-a)`; `None` for unbranched criteria.
    pub fn branch_group(&self) -> Option<String> {
        self.id.find('-').map(|i| format!("{})", &self.id[..i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Minimum,
    FullCredit,
}

impl Tier {
    pub fn label(self) -> &'static str {
        match self {
            Tier::Minimum => "minimum",
            Tier::FullCredit => "full credit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Always,
    OnlyIf(Predicate),
    WhereApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Satisfied mechanically when the report schema path resolves to a present value.
    Presence(String),
    Judgment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicRequirement {
    /// Label such as `1(i)A`.
    pub id: String,
    pub text: String,
    pub tier: Tier,
    pub condition: Condition,
    pub check: CheckKind,
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleTrigger {
    /// Holds when the predicate is true for the evaluation's facts.
    Fact(Predicate),
    /// Holds when the named requirement of the same criterion is met.
    Met(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleEffect {
    /// All applicable minimum items met earns Satisfied.
    MinimumSufficesForFull,
    /// The named minimum item counts as met.
    CountsAsMet(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialRule {
    pub id: String,
    pub trigger: RuleTrigger,
    pub effect: RuleEffect,
    /// The footnote or sentence of the standard the rule encodes.
    pub provenance: String,
}

impl Rubric {
    /// The embedded STREAM v1 rubric. Parsed once and shared.
    pub fn builtin() -> &'static Rubric {
        static BUILTIN: OnceLock<Rubric> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            load_rubric(BUILTIN_SOURCE).expect("embedded stream-v1 rubric must load")
        })
    }

    pub fn builtin_source() -> &'static str {
        BUILTIN_SOURCE
    }

    /// Resolve `builtin`, `stream-v1` or rubric document text.
    pub fn from_name_or_source(spec: &str) -> Result<Rubric, RubricError> {
        match spec.trim() {
            "builtin" | BUILTIN_VERSION => Ok(Rubric::builtin().clone()),
            other => load_rubric(other),
        }
    }

    pub fn criteria(&self) -> impl Iterator<Item = (&Category, &Criterion)> {
        self.categories.iter().flat_map(|c| c.criteria.iter().map(move |cr| (c, cr)))
    }

    pub fn criterion(&self, id: &str) -> Option<&Criterion> {
        self.criteria().map(|(_, c)| c).find(|c| c.id == id)
    }

    pub fn category_of(&self, criterion_id: &str) -> Option<&Category> {
        self.criteria().find(|(_, c)| c.id == criterion_id).map(|(cat, _)| cat)
    }

    /// Finds the criterion owning a requirement id.
    pub fn requirement(&self, id: &str) -> Option<(&Criterion, &AtomicRequirement)> {
        self.criteria()
            .map(|(_, c)| c)
            .find_map(|c| c.requirement(id).map(|r| (c, r)))
    }

    pub fn criterion_count(&self) -> usize {
        self.categories.iter().map(|c| c.criteria.len()).sum()
    }

    pub fn requirement_ids(&self) -> Vec<&str> {
        self.criteria().flat_map(|(_, c)| c.requirements().map(|r| r.id.as_str())).collect()
    }
}
