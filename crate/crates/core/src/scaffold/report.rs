use serde_json::{json, Value};

use crate::error::ScaffoldError;
use crate::metadata::{BaselineKind, EvaluationMetadata};
use crate::report::{
    AlternativeReference, AutoGrading, Baseline, Construction, Disagreements, ElicitationProfile,
    EvaluationElicitation, EvaluationSummary, Field, FuturePerformance, HumanBaseline, HumanGrading,
    ModelVersion, NoBaseline, Performance, Preregistration, ReportDocument, ReportMeta,
    ResultsInterpretation, ReviewTime, SharedSection, ThreatModel, ThreatRelevance, REPORT_SCHEMA,
};
use crate::rubric::{branch_applies, Rubric};

const F: Field<crate::report::Text> = Field::Fill;

/// Shapes of list elements, which the scaffold leaves as a single placeholder.
const ELEMENT_SHAPES: &[(&str, &str)] = &[
    ("threat_relevance", "rule_thresholds: [{range, direction: rule_in|rule_out, registered_when}]"),
    ("performance", "summary_stats: [{kind: mean|max|median|{other: name}, value, unit, label, model_version_ref}]"),
    ("performance", "uncertainty: [{kind: confidence_interval|std_error|{other: name}, level, low, high, stat}]"),
    ("performance", "ablations: [{condition, result}]"),
    ("results_interpretation", "evidence_contributions: [{source, weight_label, note}]"),
];

fn threat_model() -> ThreatModel {
    ThreatModel { name: "threat-model-1".into(), actor_type: F, misuse_vector: F, capabilities: Field::Fill, justification: F }
}

fn model_version() -> ModelVersion {
    ModelVersion {
        name: "model-version-1".into(),
        identical_to_deployed: Field::Fill,
        deployment_date: Field::Fill,
        mitigation_set: Field::Fill,
        mitigations: Field::Fill,
        mitigation_note: Field::Absent,
        capability_delta_note: F,
    }
}

fn elicitation() -> ElicitationProfile {
    ElicitationProfile {
        mitigations: F,
        instance_mitigations: F,
        bypass_strategies: F,
        prompting: F,
        prompt_design: F,
        sampling_strategies: F,
        sampling_parameters: F,
        tools: F,
        scaffolding: F,
        resource_ceilings: F,
        fine_tuning_used: Field::Fill,
        fine_tuning: F,
    }
}

fn results() -> ResultsInterpretation {
    ResultsInterpretation {
        conclusion: F,
        decision_impact: F,
        evidence_contributions: Field::Fill,
        other_influences: F,
        falsification_conditions: F,
        preregistration: Preregistration { registered: Field::Fill, how: F },
        future_performance: FuturePerformance {
            near_term: F,
            medium_term: F,
            implications: F,
            explanation: F,
            decision_point_estimate: F,
        },
        review_time: ReviewTime { statement: F, quantified_estimate: F },
        disagreements: Disagreements { arose: Field::Fill, summary: F, handling: F },
    }
}

fn evaluation(index: usize, meta: &EvaluationMetadata) -> EvaluationSummary {
    let g = meta.grading_method;
    let human_grading = g.has_human().then_some(HumanGrading {
        grader_qualifications: F,
        grader_affiliation: F,
        num_graders: Field::Fill,
        recruitment: F,
        training: F,
        instructions: F,
        blinded: Field::Fill,
        graders_per_item: Field::Fill,
        adjudication: F,
        agreement_statement: F,
        agreement_statistic: Field::Fill,
    });
    let auto_grading = g.has_auto().then_some(AutoGrading {
        base_model: F,
        modified: Field::Fill,
        modifications: F,
        instructions: F,
        judging_method: F,
        example_prompt: F,
        samples_per_item: Field::Fill,
        aggregation: F,
        validation: Field::Fill,
        validation_graders: F,
        agreement_statistic: Field::Fill,
        comparison_coverage: F,
    });
    let baseline = match meta.baseline_kind {
        BaselineKind::HumanBaseline => Baseline::Human(HumanBaseline {
            n_participants: Field::Fill,
            expert: Field::Fill,
            qualifications: F,
            recruitment: F,
            sampling_bias_note: F,
            stats: Field::Fill,
            uncertainty: Field::Fill,
            stat_justification: F,
            test_differences: F,
            time_allowed: F,
            resources: F,
            incentives: F,
            time_per_item: F,
            condition_notes: F,
        }),
        BaselineKind::NoHumanBaseline => Baseline::None(NoBaseline {
            justification_kind: Field::Fill,
            justification_text: F,
            supporting_details: F,
            alternative_reference: Some(AlternativeReference {
                description: F,
                empirical: Field::Fill,
                methodology: F,
                validity_argument: F,
                uncertainties: F,
            }),
        }),
    };
    EvaluationSummary {
        name: format!("evaluation-{}", index + 1),
        metadata: meta.clone(),
        threat_relevance: ThreatRelevance {
            threat_model_refs: Field::Fill,
            capability_refs: Field::Fill,
            justification: F,
            limitations: F,
            evidence_role: F,
            core_to_assessment: Field::Fill,
            rule_thresholds: Field::Fill,
            threshold_justification: F,
            thresholds_registered_when: F,
            example_item: F,
            example_answer: F,
            representative: Field::Fill,
            representativeness_note: F,
        },
        construction: Construction {
            num_items_run: Field::Fill,
            num_items_total: Field::Fill,
            subset_method: F,
            answer_formats: F,
            scoring_details: F,
            designer_affiliation: F,
            designer_is_publisher: Field::Fill,
            third_party_modified: Field::Fill,
            methodology_deviations: F,
            key_provenance: F,
            qc_taken: Field::Fill,
            qc_measures: F,
            human_grading,
            auto_grading,
        },
        elicitation: EvaluationElicitation {
            model_version_refs: Field::Fill,
            deviations: F,
            refusals: F,
            overrides: None,
        },
        performance: Performance {
            summary_stats: Field::Fill,
            statistic_justification: F,
            uncertainty: Field::Fill,
            num_runs: Field::Fill,
            ablations_performed: Field::Fill,
            ablations: Field::Fill,
            highest_score_reported: Field::Fill,
            contamination_tested: Field::Fill,
            contamination_note: F,
        },
        baseline: Some(baseline),
    }
}

/// The skeleton as a document value, before guidance is added.
pub fn scaffold_document(plans: &[EvaluationMetadata]) -> Result<ReportDocument, ScaffoldError> {
    if plans.is_empty() {
        return Err(ScaffoldError::NoEvaluations);
    }
    for (index, plan) in plans.iter().enumerate() {
        if let Some(message) = plan.problems().into_iter().next() {
            return Err(ScaffoldError::InvalidPlan { index, message });
        }
    }
    Ok(ReportDocument {
        schema: REPORT_SCHEMA.into(),
        meta: ReportMeta { title: F, model_family: F, publication_date: Field::Fill, open_weight: Field::Fill },
        shared: SharedSection {
            threat_models: vec![threat_model()],
            model_versions: vec![model_version()],
            standard_elicitation: Some(elicitation()),
            results_interpretation: Some(results()),
            suite_statements: Vec::new(),
        },
        evaluations: plans.iter().enumerate().map(|(i, m)| evaluation(i, m)).collect(),
        attestations: Vec::new(),
    })
}

/// A fillable `stream-report/v1` skeleton with one evaluation section per plan.
///
/// With `guidance`, each block carries a `"//"` key listing the criteria it
/// feeds; the parser ignores those keys.
pub fn scaffold_report(rubric: &Rubric, plans: &[EvaluationMetadata], guidance: bool) -> Result<String, ScaffoldError> {
    let doc = scaffold_document(plans)?;
    if !guidance {
        return Ok(crate::report::serialize_report(&doc));
    }
    let mut v = serde_json::to_value(&doc).expect("report serializes");
    annotate(&mut v["shared"], "Reported once and shared by every evaluation. Replace each \"__FILL__\"; delete fields you will not report.");
    let report_level: Vec<String> = rubric
        .categories
        .iter()
        .filter(|c| c.scope == crate::rubric::Scope::OncePerReport)
        .flat_map(|c| c.criteria.iter().map(|cr| format!("{}: {}", cr.id, cr.summary)))
        .collect();
    annotate_lines(&mut v["shared"]["results_interpretation"], "results_interpretation", report_level);
    for (i, plan) in plans.iter().enumerate() {
        let e = &mut v["evaluations"][i];
        for (block, cat) in [("threat_relevance", 1u8), ("construction", 2), ("elicitation", 3), ("performance", 4), ("baseline", 5)] {
            let lines: Vec<String> = rubric
                .categories
                .iter()
                .filter(|c| c.id == cat)
                .flat_map(|c| c.criteria.iter())
                .filter(|cr| branch_applies(cr.branch, plan))
                .map(|cr| format!("{}: {}", cr.id, cr.summary))
                .collect();
            annotate_lines(&mut e[block], block, lines);
        }
    }
    let mut out = serde_json::to_string_pretty(&v).expect("value serializes");
    out.push('\n');
    Ok(out)
}

fn annotate(v: &mut Value, text: &str) {
    prepend_comment(v, json!(text));
}

fn annotate_lines(v: &mut Value, block: &str, mut lines: Vec<String>) {
    lines.extend(ELEMENT_SHAPES.iter().filter(|(b, _)| *b == block).map(|(_, s)| format!("shape of {s}")));
    if !lines.is_empty() {
        prepend_comment(v, json!(lines));
    }
}

fn prepend_comment(v: &mut Value, comment: Value) {
    if let Value::Object(map) = v {
        let rest = std::mem::take(map);
        map.insert("//".into(), comment);
        map.extend(rest);
    }
}

/// Scaffold covering both baseline variants and both grading blocks, for the schema descriptor.
pub(crate) fn descriptor_scaffold() -> Value {
    use crate::metadata::{AnswerFormat, GradingMethod};
    let plans = [
        EvaluationMetadata::new(AnswerFormat::OpenEnded, GradingMethod::Both, BaselineKind::HumanBaseline),
        EvaluationMetadata::new(AnswerFormat::OpenEnded, GradingMethod::Both, BaselineKind::NoHumanBaseline),
    ];
    serde_json::to_value(scaffold_document(&plans).expect("fixed plans are valid")).expect("report serializes")
}
