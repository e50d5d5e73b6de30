use std::collections::BTreeMap;

use serde::Serialize;

use super::schema::{probe_path, relevant_versions, Resolution};
use super::{Baseline, EvaluationSummary, Field, ReportDocument, Stat, StatKind, Uncertainty, UncertaintyKind, Validation};
use crate::error::ReportError;
use crate::metadata::{AnswerFormat, BaselineKind};
use crate::rubric::FactKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fact {
    /// `None` when the report does not settle the question.
    pub value: Option<bool>,
    pub resolution: Resolution,
}

/// Predicate inputs for one evaluation (or for the report as a whole).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FactSet {
    facts: BTreeMap<FactKey, Fact>,
}

impl FactSet {
    pub fn value(&self, key: FactKey) -> Option<bool> {
        self.facts.get(&key).and_then(|f| f.value)
    }

    pub fn get(&self, key: FactKey) -> Option<&Fact> {
        self.facts.get(&key)
    }

    pub fn set(&mut self, key: FactKey, fact: Fact) {
        self.facts.insert(key, fact);
    }

    /// Sets a value as if stated by the evaluation itself.
    pub fn set_value(&mut self, key: FactKey, value: Option<bool>) {
        let resolution = if value.is_some() { Resolution::Local } else { Resolution::Absent };
        self.set(key, Fact { value, resolution });
    }

    pub fn iter(&self) -> impl Iterator<Item = (FactKey, &Fact)> {
        self.facts.iter().map(|(k, f)| (*k, f))
    }
}

fn local(value: Option<bool>) -> Fact {
    Fact { value, resolution: if value.is_some() { Resolution::Local } else { Resolution::Absent } }
}

fn shared(value: Option<bool>) -> Fact {
    Fact { value, resolution: if value.is_some() { Resolution::Shared } else { Resolution::Absent } }
}

fn flag(f: &Field<bool>) -> Option<bool> {
    f.get()
}

fn negated(f: &Field<bool>) -> Option<bool> {
    f.get().map(|b| !b)
}

fn has_ci(u: &Field<Vec<Uncertainty>>) -> Option<bool> {
    match u {
        Field::Value(list) => Some(list.iter().any(|u| u.kind == UncertaintyKind::ConfidenceInterval)),
        _ => Some(false),
    }
}

fn report_level(r: &ReportDocument, set: &mut FactSet) {
    set.set(FactKey::OpenWeight, shared(flag(&r.meta.open_weight)));
    let arose = r.shared.results_interpretation.as_ref().and_then(|ri| ri.disagreements.arose.get());
    set.set(FactKey::DisagreementsNotDenied, shared(Some(arose != Some(false))));
}

/// Facts for once-per-report criteria.
pub fn extract_report_facts(report: &ReportDocument) -> FactSet {
    let mut set = FactSet::default();
    report_level(report, &mut set);
    set
}

/// Facts for one evaluation, each tagged with where the report settles it.
pub fn extract_facts(report: &ReportDocument, evaluation: &str) -> Result<FactSet, ReportError> {
    let e = report
        .evaluation(evaluation)
        .ok_or_else(|| ReportError::UnknownEvaluation(evaluation.to_string()))?;
    let mut set = FactSet::default();
    report_level(report, &mut set);
    evaluation_facts(report, e, &mut set);
    Ok(set)
}

fn evaluation_facts(r: &ReportDocument, e: &EvaluationSummary, set: &mut FactSet) {
    use FactKey::*;
    let m = &e.metadata;
    let c = &e.construction;
    let tr = &e.threat_relevance;
    let p = &e.performance;

    let subset = if c.subset_method.value().is_some_and(|t| super::schema::text_stated(r, t)) {
        Some(true)
    } else {
        match (c.num_items_run.get(), c.num_items_total.get()) {
            (Some(run), Some(total)) => Some(total > run),
            (Some(_), None) => Some(false),
            _ => None,
        }
    };
    set.set(SubsetUsed, local(subset));
    set.set(MixedFormats, local(Some(matches!(m.answer_format, AnswerFormat::Mixed(_)))));
    set.set(ThirdPartyModified, local(flag(&c.third_party_modified)));
    set.set(DesignerIsPublisher, local(flag(&c.designer_is_publisher)));
    set.set(QcTaken, local(flag(&c.qc_taken)));
    set.set(NotRepresentative, local(negated(&tr.representative)));
    set.set(NotCoreToAssessment, local(negated(&tr.core_to_assessment)));
    set.set(HumanGraded, local(Some(m.grading_method.has_human())));
    set.set(AutoGraded, local(Some(m.grading_method.has_auto())));

    let auto = c.auto_grading.as_ref();
    set.set(MultipleAutograderSamples, local(auto.and_then(|a| a.samples_per_item.get()).map(|n| n > 1)));
    let validation = auto.and_then(|a| a.validation.get());
    set.set(ValidatedAgainstHumans, local(validation.map(|v| v == Validation::Humans)));
    set.set(AutograderCompared, local(validation.map(|v| v != Validation::None)));

    let identical: Vec<Option<bool>> =
        relevant_versions(r, Some(e)).iter().map(|v| v.identical_to_deployed.get()).collect();
    let non_final = if identical.contains(&Some(false)) {
        Some(true)
    } else if !identical.is_empty() && identical.iter().all(|i| *i == Some(true)) {
        Some(false)
    } else {
        None
    };
    let no_final = if identical.contains(&Some(true)) {
        Some(false)
    } else if !identical.is_empty() && identical.iter().all(|i| *i == Some(false)) {
        Some(true)
    } else {
        None
    };
    set.set(NonFinalInstancesTested, shared(non_final));
    set.set(NoFinalVersionTested, shared(no_final));

    let mitigations = probe_path(r, Some(e), "elicitation.mitigations");
    set.set(MitigationsStated, Fact { value: Some(mitigations.is_present()), resolution: mitigations });

    let local_ft = e.elicitation.overrides.as_ref().and_then(|o| o.fine_tuning_used.get());
    let shared_ft = r.shared.standard_elicitation.as_ref().and_then(|s| s.fine_tuning_used.get());
    set.set(FineTuningUsed, match (local_ft, shared_ft) {
        (Some(v), _) => local(Some(v)),
        (None, v) => shared(v),
    });

    let stats: Option<&Vec<Stat>> = p.summary_stats.value();
    set.set(NonMeanStatistic, local(stats.map(|s| s.iter().any(|s| s.kind != StatKind::Mean))));
    set.set(CiGiven, local(has_ci(&p.uncertainty)));
    set.set(AblationsPerformed, local(flag(&p.ablations_performed)));
    set.set(ContaminationTested, local(flag(&p.contamination_tested)));

    set.set(HumanBaselineUsed, local(Some(m.baseline_kind == BaselineKind::HumanBaseline)));
    match &e.baseline {
        Some(Baseline::Human(h)) => {
            set.set(ExpertBaseline, local(flag(&h.expert)));
            set.set(BaselineCiGiven, local(has_ci(&h.uncertainty)));
            let differs = h.stats.value().map(|hs| {
                hs.iter().any(|s| {
                    s.kind != StatKind::Mean && !stats.is_some_and(|ms| ms.iter().any(|m| m.kind == s.kind))
                })
            });
            set.set(BaselineStatDiffers, local(differs));
            set.set(NonEmpiricalAlternative, local(None));
        }
        Some(Baseline::None(n)) => {
            set.set(ExpertBaseline, local(None));
            set.set(BaselineCiGiven, local(None));
            set.set(BaselineStatDiffers, local(None));
            let empirical = n.alternative_reference.as_ref().and_then(|a| a.empirical.get());
            set.set(NonEmpiricalAlternative, local(empirical.map(|b| !b)));
        }
        None => {
            for k in [ExpertBaseline, BaselineCiGiven, BaselineStatDiffers, NonEmpiricalAlternative] {
                set.set(k, local(None));
            }
        }
    }
}
