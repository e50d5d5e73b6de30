use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CriterionRecord, ScoringConfig, Status};
use crate::error::GradeError;
use crate::rubric::{Criterion, RuleEffect, RuleTrigger, Tier};

/// Slack for comparing a full-credit share against the threshold.
const SHARE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GradeValue {
    #[serde(rename = "S")]
    Satisfied,
    #[serde(rename = "P")]
    Partial,
    #[serde(rename = "N")]
    NotSatisfied,
    #[serde(rename = "NA")]
    NotApplicable,
}

impl GradeValue {
    /// Points on the 1 / 0.5 / 0 scale; `None` for not applicable.
    pub fn points(self) -> Option<f64> {
        match self {
            GradeValue::Satisfied => Some(1.0),
            GradeValue::Partial => Some(0.5),
            GradeValue::NotSatisfied => Some(0.0),
            GradeValue::NotApplicable => None,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            GradeValue::Satisfied => "S",
            GradeValue::Partial => "P",
            GradeValue::NotSatisfied => "N",
            GradeValue::NotApplicable => "NA",
        }
    }
}

impl fmt::Display for GradeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GradeValue::Satisfied => "satisfied",
            GradeValue::Partial => "partial",
            GradeValue::NotSatisfied => "not satisfied",
            GradeValue::NotApplicable => "not applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grade {
    pub value: GradeValue,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Graded(Grade),
    /// Judgments still outstanding; the grade is what they would give if all came back unmet.
    Pending { count: usize, provisional: Grade },
}

impl Outcome {
    pub fn grade(&self) -> &Grade {
        match self {
            Outcome::Graded(g) => g,
            Outcome::Pending { provisional, .. } => provisional,
        }
    }
}

/// Folds a criterion's statuses into a grade.
pub fn grade_criterion(
    record: &CriterionRecord,
    criterion: &Criterion,
    config: &ScoringConfig,
) -> Result<Outcome, GradeError> {
    let status_of = |id: &str| record.statuses.iter().find(|s| s.requirement == id).map(|s| s.status);
    for req in criterion.requirements() {
        if status_of(&req.id).is_none() {
            return Err(GradeError::MissingStatus(req.id.clone()));
        }
    }

    let mut met: BTreeSet<&str> = criterion
        .requirements()
        .filter(|r| status_of(&r.id).is_some_and(Status::is_met))
        .map(|r| r.id.as_str())
        .collect();
    let mut applied = Vec::new();
    let mut suffices = false;
    for rule in &criterion.overrides {
        let fired = match &rule.trigger {
            RuleTrigger::Fact(_) => record.fact_rules.contains(&rule.id),
            RuleTrigger::Met(id) => met.contains(id.as_str()),
        };
        if !fired {
            continue;
        }
        match &rule.effect {
            RuleEffect::MinimumSufficesForFull => suffices = true,
            RuleEffect::CountsAsMet(id) => {
                if let Some(r) = criterion.requirement(id) {
                    met.insert(r.id.as_str());
                }
            }
        }
        applied.push(rule.id.as_str());
    }

    let applicable = |tier: Tier| {
        criterion
            .requirements()
            .filter(move |r| r.tier == tier && status_of(&r.id) != Some(Status::NotApplicable))
    };
    let min_total = applicable(Tier::Minimum).count();
    let full_total = applicable(Tier::FullCredit).count();
    let min_met = applicable(Tier::Minimum).filter(|r| met.contains(r.id.as_str())).count();
    let full_met = applicable(Tier::FullCredit).filter(|r| met.contains(r.id.as_str())).count();
    let pending = record.pending();

    let value = if min_total + full_total == 0 {
        GradeValue::NotApplicable
    } else {
        let m = min_met == min_total;
        let share = if full_total == 0 { 1.0 } else { full_met as f64 / full_total as f64 };
        if m && (share + SHARE_EPSILON >= config.full_credit_threshold || suffices) {
            GradeValue::Satisfied
        } else if m {
            GradeValue::Partial
        } else {
            GradeValue::NotSatisfied
        }
    };

    let mut rationale = if value == GradeValue::NotApplicable {
        "every item was ruled not applicable".to_string()
    } else {
        format!("minimum {min_met}/{min_total}, full credit {full_met}/{full_total}")
    };
    let unmet: Vec<&str> = criterion
        .requirements()
        .filter(|r| status_of(&r.id) != Some(Status::NotApplicable) && !met.contains(r.id.as_str()))
        .map(|r| r.id.as_str())
        .collect();
    if !unmet.is_empty() && value != GradeValue::NotApplicable {
        rationale.push_str(&format!("; missing {}", unmet.join(", ")));
    }
    if !applied.is_empty() {
        rationale.push_str(&format!("; rules applied: {}", applied.join(", ")));
    }
    let overridden: Vec<&str> =
        record.statuses.iter().filter(|s| s.overridden).map(|s| s.requirement.as_str()).collect();
    if !overridden.is_empty() {
        rationale.push_str(&format!("; overridden by grader: {}", overridden.join(", ")));
    }

    let grade = Grade { value, rationale };
    Ok(if pending > 0 {
        let mut provisional = grade;
        provisional.rationale.push_str(&format!("; {pending} pending"));
        Outcome::Pending { count: pending, provisional }
    } else {
        Outcome::Graded(grade)
    })
}
