//! Presence paths: the vocabulary rubric requirements use to point into a report.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{
    Ablation, Baseline, EvaluationSummary, EvidenceContribution, Field, ModelVersion,
    NamedStatistic, ReportDocument, RuleThreshold, Stat, Text, ThreatModel, Uncertainty,
    UncertaintyKind, FILL,
};
use crate::error::ReportError;
use crate::metadata::AnswerFormat;

/// Where a fact was found for an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// The evaluation's own summary states it.
    Local,
    /// Only the shared section, or a suite statement covering the evaluation, states it.
    Shared,
    Absent,
}

impl Resolution {
    pub fn is_present(self) -> bool {
        self != Resolution::Absent
    }
}

/// Every path a presence check may name, with the document location it reads.
pub const PRESENCE_PATHS: &[(&str, &str)] = &[
    ("threat_model.actor_type", "shared.threat_models[].actor_type"),
    ("threat_model.misuse_vector", "shared.threat_models[].misuse_vector"),
    ("threat_model.capabilities", "shared.threat_models[].capabilities"),
    ("evaluation.threat_model_refs", "evaluations[].threat_relevance.threat_model_refs"),
    ("evaluation.capability_refs", "evaluations[].threat_relevance.capability_refs"),
    ("evaluation.evidence_role", "evaluations[].threat_relevance.evidence_role"),
    ("evaluation.rule_thresholds", "evaluations[].threat_relevance.rule_thresholds"),
    ("evaluation.threshold_justification", "evaluations[].threat_relevance.threshold_justification"),
    (
        "evaluation.thresholds_registered_when",
        "evaluations[].threat_relevance.thresholds_registered_when | rule_thresholds[].registered_when",
    ),
    ("evaluation.example_item", "evaluations[].threat_relevance.example_item"),
    ("evaluation.example_answer", "evaluations[].threat_relevance.example_answer"),
    ("evaluation.representativeness", "evaluations[].threat_relevance.representative"),
    ("evaluation.num_items_run", "evaluations[].construction.num_items_run"),
    ("evaluation.num_items_total", "evaluations[].construction.num_items_total"),
    ("evaluation.subset_method", "evaluations[].construction.subset_method"),
    ("evaluation.answer_formats", "evaluations[].construction.answer_formats"),
    ("evaluation.format_proportions", "evaluations[].metadata.answer_format.mixed"),
    ("evaluation.methodology_deviations", "evaluations[].construction.methodology_deviations"),
    ("evaluation.designer_affiliation", "evaluations[].construction.designer_affiliation"),
    ("evaluation.key_provenance", "evaluations[].construction.key_provenance"),
    ("evaluation.qc_stated", "evaluations[].construction.qc_taken"),
    ("evaluation.qc_measures", "evaluations[].construction.qc_measures"),
    ("human_grading.grader_qualifications", "evaluations[].construction.human_grading.grader_qualifications"),
    ("human_grading.grader_affiliation", "evaluations[].construction.human_grading.grader_affiliation"),
    ("human_grading.num_graders", "evaluations[].construction.human_grading.num_graders"),
    ("human_grading.recruitment", "evaluations[].construction.human_grading.recruitment"),
    ("human_grading.instructions", "evaluations[].construction.human_grading.instructions"),
    ("human_grading.blinded", "evaluations[].construction.human_grading.blinded"),
    ("human_grading.graders_per_item", "evaluations[].construction.human_grading.graders_per_item"),
    ("human_grading.adjudication", "evaluations[].construction.human_grading.adjudication"),
    ("human_grading.agreement_statement", "evaluations[].construction.human_grading.agreement_statement"),
    ("human_grading.agreement_statistic", "evaluations[].construction.human_grading.agreement_statistic"),
    ("auto_grading.base_model", "evaluations[].construction.auto_grading.base_model"),
    ("auto_grading.modified", "evaluations[].construction.auto_grading.modified"),
    ("auto_grading.instructions", "evaluations[].construction.auto_grading.instructions"),
    ("auto_grading.judging_method", "evaluations[].construction.auto_grading.judging_method"),
    ("auto_grading.example_prompt", "evaluations[].construction.auto_grading.example_prompt"),
    ("auto_grading.samples_per_item", "evaluations[].construction.auto_grading.samples_per_item"),
    ("auto_grading.aggregation", "evaluations[].construction.auto_grading.aggregation"),
    ("auto_grading.validation", "evaluations[].construction.auto_grading.validation"),
    ("auto_grading.validation_graders", "evaluations[].construction.auto_grading.validation_graders"),
    ("auto_grading.agreement_statistic", "evaluations[].construction.auto_grading.agreement_statistic"),
    ("auto_grading.comparison_coverage", "evaluations[].construction.auto_grading.comparison_coverage"),
    ("model_version.deployment_identity", "shared.model_versions[].identical_to_deployed"),
    ("model_version.mitigation_set", "shared.model_versions[].mitigation_set"),
    ("model_version.capability_delta", "shared.model_versions[].capability_delta_note"),
    ("elicitation.mitigations", "evaluations[].elicitation.overrides | shared.standard_elicitation | shared.model_versions[].mitigations"),
    ("elicitation.instance_mitigations", "evaluations[].elicitation.overrides | shared.standard_elicitation | shared.model_versions[].mitigations"),
    ("elicitation.bypass_strategies", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.prompting", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.prompt_design", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.sampling_strategies", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.sampling_parameters", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.tools", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.scaffolding", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.resource_ceilings", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.fine_tuning", "evaluations[].elicitation.overrides | shared.standard_elicitation"),
    ("elicitation.deviations", "evaluations[].elicitation.deviations"),
    ("elicitation.refusals", "evaluations[].elicitation.refusals"),
    ("performance.summary_stats", "evaluations[].performance.summary_stats"),
    ("performance.statistic_justification", "evaluations[].performance.statistic_justification"),
    ("performance.uncertainty", "evaluations[].performance.uncertainty"),
    ("performance.ci_level", "evaluations[].performance.uncertainty[].level"),
    ("performance.num_runs", "evaluations[].performance.num_runs"),
    ("performance.ablations_stated", "evaluations[].performance.ablations_performed"),
    ("performance.ablations", "evaluations[].performance.ablations"),
    ("performance.highest_score_confirmation", "evaluations[].performance.highest_score_reported"),
    ("performance.contamination_stated", "evaluations[].performance.contamination_tested"),
    ("performance.contamination_note", "evaluations[].performance.contamination_note"),
    ("baseline.n_participants", "evaluations[].baseline.human.n_participants"),
    ("baseline.qualifications", "evaluations[].baseline.human.qualifications"),
    ("baseline.recruitment", "evaluations[].baseline.human.recruitment"),
    ("baseline.stats", "evaluations[].baseline.human.stats"),
    ("baseline.uncertainty", "evaluations[].baseline.human.uncertainty"),
    ("baseline.ci_level", "evaluations[].baseline.human.uncertainty[].level"),
    ("baseline.stat_justification", "evaluations[].baseline.human.stat_justification"),
    ("baseline.time_allowed", "evaluations[].baseline.human.time_allowed"),
    ("baseline.resources", "evaluations[].baseline.human.resources"),
    ("baseline.incentives", "evaluations[].baseline.human.incentives"),
    ("baseline.time_per_item", "evaluations[].baseline.human.time_per_item"),
    ("baseline.justification", "evaluations[].baseline.none.justification_text"),
    ("baseline.supporting_details", "evaluations[].baseline.none.supporting_details"),
    ("baseline.alternative_reference", "evaluations[].baseline.none.alternative_reference.description"),
    ("baseline.alternative_methodology", "evaluations[].baseline.none.alternative_reference.methodology"),
    ("baseline.validity_argument", "evaluations[].baseline.none.alternative_reference.validity_argument"),
    ("baseline.alternative_uncertainties", "evaluations[].baseline.none.alternative_reference.uncertainties"),
    ("results.conclusion", "shared.results_interpretation.conclusion"),
    ("results.decision_impact", "shared.results_interpretation.decision_impact"),
    ("results.evidence_contributions", "shared.results_interpretation.evidence_contributions"),
    ("results.other_influences", "shared.results_interpretation.other_influences"),
    ("results.falsification_conditions", "shared.results_interpretation.falsification_conditions"),
    ("results.preregistration", "shared.results_interpretation.preregistration.registered"),
    ("results.near_term", "shared.results_interpretation.future_performance.near_term"),
    ("results.medium_term", "shared.results_interpretation.future_performance.medium_term"),
    ("results.implications", "shared.results_interpretation.future_performance.implications"),
    ("results.prediction_explanation", "shared.results_interpretation.future_performance.explanation"),
    ("results.decision_point_estimate", "shared.results_interpretation.future_performance.decision_point_estimate"),
    ("results.review_time", "shared.results_interpretation.review_time.statement"),
    ("results.review_time_estimate", "shared.results_interpretation.review_time.quantified_estimate"),
    ("results.disagreements_stated", "shared.results_interpretation.disagreements.arose"),
    ("results.disagreement_summary", "shared.results_interpretation.disagreements.summary"),
    ("results.disagreement_handling", "shared.results_interpretation.disagreements.handling"),
];

pub fn is_declared_path(path: &str) -> bool {
    PRESENCE_PATHS.iter().any(|(p, _)| *p == path)
}

/// Machine-readable description of the report format: every document key and
/// every presence path with the location it reads.
pub fn schema_descriptor() -> serde_json::Value {
    let mut keys = BTreeSet::new();
    let scaffold = crate::scaffold::descriptor_scaffold();
    collect_keys(&scaffold, String::new(), &mut keys);
    serde_json::json!({
        "schema": super::REPORT_SCHEMA,
        "placeholder": FILL,
        "document_keys": keys.into_iter().collect::<Vec<_>>(),
        "presence_paths": PRESENCE_PATHS
            .iter()
            .map(|(p, loc)| serde_json::json!({ "path": p, "location": loc }))
            .collect::<Vec<_>>(),
        "facts": crate::rubric::FactKey::ALL.iter().map(|k| k.name()).collect::<Vec<_>>(),
    })
}

fn collect_keys(v: &serde_json::Value, prefix: String, out: &mut BTreeSet<String>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, child) in map {
                if k == "//" {
                    continue;
                }
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                out.insert(path.clone());
                collect_keys(child, path, out);
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                collect_keys(item, format!("{prefix}[]"), out);
            }
        }
        _ => {}
    }
}

/// Whether an evaluation's report states the fact at `path`.
///
/// "Somewhere in the report" requirements accept `Local` or `Shared`.
pub fn resolve_scope(report: &ReportDocument, evaluation: &str, path: &str) -> Result<Resolution, ReportError> {
    let eval = report
        .evaluation(evaluation)
        .ok_or_else(|| ReportError::UnknownEvaluation(evaluation.to_string()))?;
    probe(report, Some(eval), path).ok_or_else(|| ReportError::UnknownPath(path.to_string()))
}

/// Resolves a path for once-per-report criteria, with no evaluation in view.
pub fn resolve_report_scope(report: &ReportDocument, path: &str) -> Result<Resolution, ReportError> {
    probe(report, None, path).ok_or_else(|| ReportError::UnknownPath(path.to_string()))
}

pub(crate) fn probe_path(r: &ReportDocument, e: Option<&EvaluationSummary>, path: &str) -> Resolution {
    probe(r, e, path).unwrap_or(Resolution::Absent)
}

pub(crate) fn text_stated(r: &ReportDocument, t: &Text) -> bool {
    t.stated(r)
}

pub(crate) trait Stated {
    fn stated(&self, r: &ReportDocument) -> bool;
}

impl Stated for Text {
    fn stated(&self, r: &ReportDocument) -> bool {
        self.is_stated(&|id| r.attestation_exists(id))
    }
}

impl Stated for String {
    fn stated(&self, _: &ReportDocument) -> bool {
        let t = self.trim();
        !t.is_empty() && t != FILL
    }
}

macro_rules! always_stated {
    ($($t:ty),*) => {
        $(impl Stated for $t {
            fn stated(&self, _: &ReportDocument) -> bool {
                true
            }
        })*
    };
}

always_stated!(bool, u64, f64, Stat, Uncertainty, super::MitigationSet, super::Validation);

impl<T: Stated> Stated for Vec<T> {
    fn stated(&self, r: &ReportDocument) -> bool {
        !self.is_empty() && self.iter().all(|x| x.stated(r))
    }
}

impl<T: Stated> Stated for Field<T> {
    fn stated(&self, r: &ReportDocument) -> bool {
        self.value().is_some_and(|v| v.stated(r))
    }
}

impl Stated for NamedStatistic {
    fn stated(&self, r: &ReportDocument) -> bool {
        self.name.stated(r) && (self.value.is_value() || self.note.stated(r))
    }
}

impl Stated for RuleThreshold {
    fn stated(&self, r: &ReportDocument) -> bool {
        self.range.stated(r)
    }
}

impl Stated for Ablation {
    fn stated(&self, r: &ReportDocument) -> bool {
        self.condition.stated(r) && self.result.stated(r)
    }
}

impl Stated for EvidenceContribution {
    fn stated(&self, r: &ReportDocument) -> bool {
        self.source.stated(r)
    }
}

fn local(b: bool) -> Resolution {
    if b {
        Resolution::Local
    } else {
        Resolution::Absent
    }
}

fn shared(b: bool) -> Resolution {
    if b {
        Resolution::Shared
    } else {
        Resolution::Absent
    }
}

/// Threat models an evaluation points at, or all of them when it names none.
pub(crate) fn relevant_threat_models<'a>(r: &'a ReportDocument, e: Option<&EvaluationSummary>) -> Vec<&'a ThreatModel> {
    let refs = e.and_then(|e| e.threat_relevance.threat_model_refs.value()).filter(|v| !v.is_empty());
    match refs {
        Some(refs) => r.shared.threat_models.iter().filter(|t| refs.contains(&t.name)).collect(),
        None => r.shared.threat_models.iter().collect(),
    }
}

/// Model versions an evaluation was run on, or all of them when it names none.
pub(crate) fn relevant_versions<'a>(r: &'a ReportDocument, e: Option<&EvaluationSummary>) -> Vec<&'a ModelVersion> {
    let refs = e.and_then(|e| e.elicitation.model_version_refs.value()).filter(|v| !v.is_empty());
    match refs {
        Some(refs) => r.shared.model_versions.iter().filter(|m| refs.contains(&m.name)).collect(),
        None => r.shared.model_versions.iter().collect(),
    }
}

fn all_nonempty<T>(items: &[T], f: impl Fn(&T) -> bool) -> bool {
    !items.is_empty() && items.iter().all(f)
}

fn ci_levels(u: &Field<Vec<Uncertainty>>) -> bool {
    let cis: Vec<_> = u
        .value()
        .map(|v| v.iter().filter(|u| u.kind == UncertaintyKind::ConfidenceInterval).collect())
        .unwrap_or_default();
    all_nonempty(&cis, |u| u.level.is_value())
}

fn probe(r: &ReportDocument, e: Option<&EvaluationSummary>, path: &str) -> Option<Resolution> {
    if !is_declared_path(path) {
        return None;
    }
    let (head, leaf) = path.split_once('.')?;
    let found = match head {
        "threat_model" => {
            let tms = relevant_threat_models(r, e);
            shared(match leaf {
                "actor_type" => all_nonempty(&tms, |t| t.actor_type.stated(r)),
                "misuse_vector" => all_nonempty(&tms, |t| t.misuse_vector.stated(r)),
                _ => all_nonempty(&tms, |t| t.capabilities.stated(r)),
            })
        }
        "model_version" => {
            let mvs = relevant_versions(r, e);
            shared(match leaf {
                "deployment_identity" => all_nonempty(&mvs, |m| m.identical_to_deployed.is_value()),
                "mitigation_set" => all_nonempty(&mvs, |m| m.mitigation_set.is_value()),
                _ => mvs.iter().any(|m| m.capability_delta_note.stated(r)),
            })
        }
        "results" => {
            let Some(ri) = &r.shared.results_interpretation else {
                return Some(Resolution::Absent);
            };
            let f = &ri.future_performance;
            shared(match leaf {
                "conclusion" => ri.conclusion.stated(r),
                "decision_impact" => ri.decision_impact.stated(r),
                "evidence_contributions" => ri.evidence_contributions.stated(r),
                "other_influences" => ri.other_influences.stated(r),
                "falsification_conditions" => ri.falsification_conditions.stated(r),
                "preregistration" => ri.preregistration.registered.is_value(),
                "near_term" => f.near_term.stated(r),
                "medium_term" => f.medium_term.stated(r),
                "implications" => f.implications.stated(r),
                "prediction_explanation" => f.explanation.stated(r),
                "decision_point_estimate" => f.decision_point_estimate.stated(r),
                "review_time" => ri.review_time.statement.stated(r),
                "review_time_estimate" => ri.review_time.quantified_estimate.stated(r),
                "disagreements_stated" => ri.disagreements.arose.is_value(),
                "disagreement_summary" => ri.disagreements.summary.stated(r),
                _ => ri.disagreements.handling.stated(r),
            })
        }
        _ => {
            let Some(e) = e else {
                return Some(Resolution::Absent);
            };
            probe_evaluation(r, e, head, leaf)
        }
    };
    if found.is_present() {
        return Some(found);
    }
    let suite = e.is_some_and(|e| {
        r.shared
            .suite_statements
            .iter()
            .any(|s| s.path == path && s.evaluations.contains(&e.name) && s.text.stated(r))
    });
    Some(shared(suite))
}

fn probe_evaluation(r: &ReportDocument, e: &EvaluationSummary, head: &str, leaf: &str) -> Resolution {
    let tr = &e.threat_relevance;
    let c = &e.construction;
    let p = &e.performance;
    match head {
        "evaluation" => local(match leaf {
            "threat_model_refs" => tr.threat_model_refs.value().is_some_and(|v| all_nonempty(v, |s| s.stated(r))),
            "capability_refs" => tr.capability_refs.stated(r),
            "evidence_role" => tr.evidence_role.stated(r),
            "rule_thresholds" => tr.rule_thresholds.stated(r),
            "threshold_justification" => tr.threshold_justification.stated(r),
            "thresholds_registered_when" => {
                tr.thresholds_registered_when.stated(r)
                    || tr.rule_thresholds.value().is_some_and(|v| all_nonempty(v, |t| t.registered_when.stated(r)))
            }
            "example_item" => tr.example_item.stated(r),
            "example_answer" => tr.example_answer.stated(r),
            "representativeness" => tr.representative.is_value(),
            "num_items_run" => c.num_items_run.is_value(),
            "num_items_total" => c.num_items_total.is_value(),
            "subset_method" => c.subset_method.stated(r),
            "answer_formats" => c.answer_formats.stated(r),
            "format_proportions" => matches!(&e.metadata.answer_format, AnswerFormat::Mixed(s) if !s.is_empty()),
            "methodology_deviations" => c.methodology_deviations.stated(r),
            "designer_affiliation" => c.designer_affiliation.stated(r),
            "key_provenance" => c.key_provenance.stated(r),
            "qc_stated" => c.qc_taken.is_value(),
            _ => c.qc_measures.stated(r),
        }),
        "human_grading" => {
            let Some(h) = &c.human_grading else {
                return Resolution::Absent;
            };
            local(match leaf {
                "grader_qualifications" => h.grader_qualifications.stated(r),
                "grader_affiliation" => h.grader_affiliation.stated(r),
                "num_graders" => h.num_graders.is_value(),
                "recruitment" => h.recruitment.stated(r),
                "instructions" => h.instructions.stated(r),
                "blinded" => h.blinded.is_value(),
                "graders_per_item" => h.graders_per_item.is_value(),
                "adjudication" => h.adjudication.stated(r),
                "agreement_statement" => h.agreement_statement.stated(r),
                _ => h.agreement_statistic.stated(r),
            })
        }
        "auto_grading" => {
            let Some(a) = &c.auto_grading else {
                return Resolution::Absent;
            };
            local(match leaf {
                "base_model" => a.base_model.stated(r),
                "modified" => a.modified.is_value(),
                "instructions" => a.instructions.stated(r),
                "judging_method" => a.judging_method.stated(r),
                "example_prompt" => a.example_prompt.stated(r),
                "samples_per_item" => a.samples_per_item.is_value(),
                "aggregation" => a.aggregation.stated(r),
                "validation" => a.validation.is_value(),
                "validation_graders" => a.validation_graders.stated(r),
                "agreement_statistic" => a.agreement_statistic.stated(r),
                _ => a.comparison_coverage.stated(r),
            })
        }
        "elicitation" => probe_elicitation(r, e, leaf),
        "performance" => local(match leaf {
            "summary_stats" => p.summary_stats.stated(r),
            "statistic_justification" => p.statistic_justification.stated(r),
            "uncertainty" => p.uncertainty.stated(r),
            "ci_level" => ci_levels(&p.uncertainty),
            "num_runs" => p.num_runs.is_value(),
            "ablations_stated" => p.ablations_performed.is_value(),
            "ablations" => p.ablations.stated(r),
            "highest_score_confirmation" => p.highest_score_reported.is_value(),
            "contamination_stated" => p.contamination_tested.is_value(),
            _ => p.contamination_note.stated(r),
        }),
        _ => local(match &e.baseline {
            Some(Baseline::Human(h)) => match leaf {
                "n_participants" => h.n_participants.is_value(),
                "qualifications" => h.qualifications.stated(r),
                "recruitment" => h.recruitment.stated(r),
                "stats" => h.stats.stated(r),
                "uncertainty" => h.uncertainty.stated(r),
                "ci_level" => ci_levels(&h.uncertainty),
                "stat_justification" => h.stat_justification.stated(r),
                "time_allowed" => h.time_allowed.stated(r),
                "resources" => h.resources.stated(r),
                "incentives" => h.incentives.stated(r),
                "time_per_item" => h.time_per_item.stated(r),
                _ => false,
            },
            Some(Baseline::None(n)) => {
                let alt = n.alternative_reference.as_ref();
                match leaf {
                    "justification" => n.justification_text.stated(r),
                    "supporting_details" => n.supporting_details.stated(r),
                    "alternative_reference" => alt.is_some_and(|a| a.description.stated(r)),
                    "alternative_methodology" => alt.is_some_and(|a| a.methodology.stated(r)),
                    "validity_argument" => alt.is_some_and(|a| a.validity_argument.stated(r)),
                    "alternative_uncertainties" => alt.is_some_and(|a| a.uncertainties.stated(r)),
                    _ => false,
                }
            }
            None => false,
        }),
    }
}

fn probe_elicitation(r: &ReportDocument, e: &EvaluationSummary, leaf: &str) -> Resolution {
    let el = &e.elicitation;
    match leaf {
        "deviations" => return local(el.deviations.stated(r)),
        "refusals" => return local(el.refusals.stated(r)),
        _ => {}
    }
    let pick = |p: &super::ElicitationProfile| -> bool {
        match leaf {
            "mitigations" => p.mitigations.stated(r),
            "instance_mitigations" => p.instance_mitigations.stated(r),
            "bypass_strategies" => p.bypass_strategies.stated(r),
            "prompting" => p.prompting.stated(r),
            "prompt_design" => p.prompt_design.stated(r),
            "sampling_strategies" => p.sampling_strategies.stated(r),
            "sampling_parameters" => p.sampling_parameters.stated(r),
            "tools" => p.tools.stated(r),
            "scaffolding" => p.scaffolding.stated(r),
            "resource_ceilings" => p.resource_ceilings.stated(r),
            _ => p.fine_tuning.stated(r),
        }
    };
    if el.overrides.as_ref().is_some_and(pick) {
        return Resolution::Local;
    }
    if r.shared.standard_elicitation.as_ref().is_some_and(pick) {
        return Resolution::Shared;
    }
    let versions = relevant_versions(r, Some(e));
    shared(match leaf {
        "mitigations" => versions.iter().any(|m| m.mitigations.stated(r)),
        "instance_mitigations" => all_nonempty(&versions, |m| m.mitigations.is_value()),
        _ => false,
    })
}
