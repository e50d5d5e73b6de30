use serde::Serialize;

use super::{AtomicRequirement, Branch, Condition, Criterion, Rubric, Scope};
use crate::metadata::{EvaluationMetadata, GradingMethod};
use crate::report::FactSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApplicableCriterion {
    pub id: String,
    pub scope: Scope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Applicable,
    NotApplicable,
    /// Left to the grader: a `where_applicable` item or an `only_if` over unknown facts.
    Unknown,
}

pub fn branch_applies(branch: Branch, meta: &EvaluationMetadata) -> bool {
    use crate::metadata::BaselineKind;
    match branch {
        Branch::Always => true,
        Branch::HumanGraded => {
            matches!(meta.grading_method, GradingMethod::HumanGraded | GradingMethod::Both)
        }
        Branch::AutoGraded => {
            matches!(meta.grading_method, GradingMethod::AutoGraded | GradingMethod::Both)
        }
        Branch::HumanBaseline => meta.baseline_kind == BaselineKind::HumanBaseline,
        Branch::NoHumanBaseline => meta.baseline_kind == BaselineKind::NoHumanBaseline,
    }
}

/// Criteria whose branch holds for an evaluation with `meta`, in document order.
///
/// Report-level criteria are always returned, flagged [`Scope::OncePerReport`].
pub fn applicable_criteria(rubric: &Rubric, meta: &EvaluationMetadata) -> Vec<ApplicableCriterion> {
    rubric
        .criteria()
        .filter(|(_, c)| branch_applies(c.branch, meta))
        .map(|(cat, c)| ApplicableCriterion { id: c.id.clone(), scope: cat.scope })
        .collect()
}

pub fn applicable_requirements<'r>(
    criterion: &'r Criterion,
    facts: &FactSet,
) -> Vec<(&'r AtomicRequirement, Applicability)> {
    criterion.requirements().map(|r| (r, requirement_applicability(r, facts))).collect()
}

pub(crate) fn requirement_applicability(req: &AtomicRequirement, facts: &FactSet) -> Applicability {
    match &req.condition {
        Condition::Always => Applicability::Applicable,
        Condition::WhereApplicable => Applicability::Unknown,
        Condition::OnlyIf(pred) => match pred.eval(&|k| facts.value(k)) {
            Some(true) => Applicability::Applicable,
            Some(false) => Applicability::NotApplicable,
            None => Applicability::Unknown,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metadata::{AnswerFormat, BaselineKind};
    use crate::rubric::FactKey;

    fn meta(g: GradingMethod, b: BaselineKind) -> EvaluationMetadata {
        EvaluationMetadata::new(AnswerFormat::OpenEnded, g, b)
    }

    fn ids(v: &[ApplicableCriterion]) -> Vec<&str> {
        v.iter().map(|c| c.id.as_str()).collect()
    }

    #[test]
    fn auto_graded_without_baseline() {
        let got = applicable_criteria(Rubric::builtin(), &meta(GradingMethod::AutoGraded, BaselineKind::NoHumanBaseline));
        assert_eq!(got.len(), 22);
        assert_eq!(
            ids(&got),
            [
                "1(i)", "1(ii)", "1(iii)", "2(i)", "2(ii)", "2(iii)", "2(v-a)", "2(v-b)", "2(v-c)",
                "3(i)", "3(ii)", "3(iii)", "4(i)", "4(ii)", "4(iii)", "5(ii-a)", "5(ii-b)",
                "6(i)", "6(ii)", "6(iii)", "6(iv)", "6(v)"
            ]
        );
        assert!(got[17..].iter().all(|c| c.scope == Scope::OncePerReport));
        assert!(got[..17].iter().all(|c| c.scope == Scope::PerEvaluation));
    }

    #[test]
    fn answer_key_with_human_baseline() {
        let m = EvaluationMetadata::new(AnswerFormat::MultipleChoice, GradingMethod::AnswerKeyOnly, BaselineKind::HumanBaseline);
        let got = applicable_criteria(Rubric::builtin(), &m);
        assert_eq!(got.len(), 20);
        let got = ids(&got);
        assert!(got.contains(&"5(i-c)") && !got.contains(&"5(ii-a)"));
        assert!(!got.iter().any(|id| id.starts_with("2(iv") || id.starts_with("2(v")));
    }

    #[test]
    fn both_with_human_baseline_drops_only_the_other_baseline_branch() {
        let got = applicable_criteria(Rubric::builtin(), &meta(GradingMethod::Both, BaselineKind::HumanBaseline));
        // 5(ii-a) and 5(ii-b) are excluded by the baseline branch.
        assert_eq!(got.len(), 26);
        assert!(ids(&got).contains(&"2(iv-a)") && ids(&got).contains(&"2(v-c)"));
        assert!(!ids(&got).contains(&"5(ii-a)"));
    }

    #[test]
    fn subset_conditions() {
        let c = Rubric::builtin().criterion("2(i)").unwrap();
        let mut facts = FactSet::default();
        facts.set_value(FactKey::SubsetUsed, Some(false));
        let got = applicable_requirements(c, &facts);
        assert_eq!(got[0].1, Applicability::Applicable);
        assert_eq!(got[1].1, Applicability::NotApplicable);
        assert_eq!(got[2].1, Applicability::NotApplicable);
    }

    #[test]
    fn where_applicable_is_unknown() {
        let c = Rubric::builtin().criterion("1(i)").unwrap();
        let mut facts = FactSet::default();
        for k in FactKey::ALL {
            facts.set_value(k, Some(true));
        }
        let h = applicable_requirements(c, &facts).into_iter().find(|(r, _)| r.id == "1(i)H").unwrap();
        assert_eq!(h.1, Applicability::Unknown);
    }

    #[test]
    fn designer_is_publisher() {
        let c = Rubric::builtin().criterion("2(iii)").unwrap();
        let mut facts = FactSet::default();
        facts.set_value(FactKey::DesignerIsPublisher, Some(true));
        let b = applicable_requirements(c, &facts).into_iter().find(|(r, _)| r.id == "2(iii)B").unwrap();
        assert_eq!(b.1, Applicability::Applicable);
        let b = applicable_requirements(c, &FactSet::default()).into_iter().find(|(r, _)| r.id == "2(iii)B").unwrap();
        assert_eq!(b.1, Applicability::Unknown);
    }
}
