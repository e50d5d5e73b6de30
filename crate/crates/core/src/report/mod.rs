//! The `stream-report/v1` document: one shared section plus a summary per evaluation.
//!
//! Nearly every leaf is a [`Field`], so a report that leaves things out still
//! parses. What is missing becomes input to grading.

mod facts;
mod field;
mod parse;
pub mod schema;
mod validate;

use serde::{Deserialize, Serialize};

pub use facts::{extract_facts, extract_report_facts, Fact, FactSet};
pub use field::{Field, Text, FILL};
pub use parse::{parse_report, report_digest, serialize_report, ParsedReport, REPORT_SCHEMA};
pub use schema::{resolve_report_scope, resolve_scope, schema_descriptor, Resolution};
pub use validate::{validate_report_against, validate_report_structure, ReportFinding, ReportFindingKind};

use crate::metadata::EvaluationMetadata;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    #[serde(default)]
    pub meta: ReportMeta,
    #[serde(default)]
    pub shared: SharedSection,
    #[serde(default)]
    pub evaluations: Vec<EvaluationSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attestations: Vec<Attestation>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportMeta {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub title: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub model_family: Field<Text>,
    /// ISO-8601 calendar date.
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub publication_date: Field<String>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub open_weight: Field<bool>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SharedSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub threat_models: Vec<ThreatModel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub model_versions: Vec<ModelVersion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_elicitation: Option<ElicitationProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub results_interpretation: Option<ResultsInterpretation>,
    /// Statements covering a named group of evaluations, e.g. every chemistry eval.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suite_statements: Vec<SuiteStatement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreatModel {
    pub name: String,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub actor_type: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub misuse_vector: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub capabilities: Field<Vec<Text>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub justification: Field<Text>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MitigationSet {
    Full,
    Reduced,
    Minimal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelVersion {
    pub name: String,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub identical_to_deployed: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub deployment_date: Field<String>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub mitigation_set: Field<MitigationSet>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub mitigations: Field<Vec<Text>>,
    /// Explains a deployed-identical version tested without the full safeguards.
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub mitigation_note: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub capability_delta_note: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ElicitationProfile {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub mitigations: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub instance_mitigations: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub bypass_strategies: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub prompting: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub prompt_design: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub sampling_strategies: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub sampling_parameters: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub tools: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub scaffolding: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub resource_ceilings: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub fine_tuning_used: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub fine_tuning: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteStatement {
    pub evaluations: Vec<String>,
    /// A declared presence path, e.g. `elicitation.resource_ceilings`.
    pub path: String,
    pub text: Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub name: String,
    pub metadata: EvaluationMetadata,
    #[serde(default)]
    pub threat_relevance: ThreatRelevance,
    #[serde(default)]
    pub construction: Construction,
    #[serde(default)]
    pub elicitation: EvaluationElicitation,
    #[serde(default)]
    pub performance: Performance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<Baseline>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    RuleIn,
    RuleOut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleThreshold {
    pub range: Text,
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub registered_when: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ThreatRelevance {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub threat_model_refs: Field<Vec<String>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub capability_refs: Field<Vec<Text>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub justification: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub limitations: Field<Text>,
    /// Whether results could rule a capability in or out.
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub evidence_role: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub core_to_assessment: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub rule_thresholds: Field<Vec<RuleThreshold>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub threshold_justification: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub thresholds_registered_when: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub example_item: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub example_answer: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub representative: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub representativeness_note: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Construction {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub num_items_run: Field<u64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub num_items_total: Field<u64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub subset_method: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub answer_formats: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub scoring_details: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub designer_affiliation: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub designer_is_publisher: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub third_party_modified: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub methodology_deviations: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub key_provenance: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub qc_taken: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub qc_measures: Field<Text>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub human_grading: Option<HumanGrading>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auto_grading: Option<AutoGrading>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedStatistic {
    /// e.g. "Krippendorff's alpha", or "none suitable".
    pub name: String,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub value: Field<f64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub note: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HumanGrading {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub grader_qualifications: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub grader_affiliation: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub num_graders: Field<u64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub recruitment: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub training: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub instructions: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub blinded: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub graders_per_item: Field<f64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub adjudication: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub agreement_statement: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub agreement_statistic: Field<NamedStatistic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validation {
    Humans,
    AutoGrader,
    None,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AutoGrading {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub base_model: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub modified: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub modifications: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub instructions: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub judging_method: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub example_prompt: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub samples_per_item: Field<u64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub aggregation: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub validation: Field<Validation>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub validation_graders: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub agreement_statistic: Field<NamedStatistic>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub comparison_coverage: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvaluationElicitation {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub model_version_refs: Field<Vec<String>>,
    /// How this evaluation departed from the shared elicitation profile.
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub deviations: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub refusals: Field<Text>,
    /// Evaluation-specific values that take precedence over the shared profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<ElicitationProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatKind {
    Mean,
    Max,
    Median,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub kind: StatKind,
    /// A fraction in [0, 1] unless `unit` names something else.
    pub value: f64,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub unit: Field<String>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub label: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub model_version_ref: Field<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UncertaintyKind {
    ConfidenceInterval,
    StdError,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Uncertainty {
    pub kind: UncertaintyKind,
    /// Confidence level as a fraction, e.g. 0.95. Only meaningful for intervals.
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub level: Field<f64>,
    pub low: f64,
    pub high: f64,
    /// Index into the sibling `stats`/`summary_stats` list.
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub stat: Field<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ablation {
    pub condition: Text,
    pub result: Text,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Performance {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub summary_stats: Field<Vec<Stat>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub statistic_justification: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub uncertainty: Field<Vec<Uncertainty>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub num_runs: Field<u64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub ablations_performed: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub ablations: Field<Vec<Ablation>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub highest_score_reported: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub contamination_tested: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub contamination_note: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Baseline {
    Human(HumanBaseline),
    None(NoBaseline),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HumanBaseline {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub n_participants: Field<u64>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub expert: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub qualifications: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub recruitment: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub sampling_bias_note: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub stats: Field<Vec<Stat>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub uncertainty: Field<Vec<Uncertainty>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub stat_justification: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub test_differences: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub time_allowed: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub resources: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub incentives: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub time_per_item: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub condition_notes: Field<Text>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JustificationKind {
    Infeasibility,
    NonInformativeness,
    Other,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AlternativeReference {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub description: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub empirical: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub methodology: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub validity_argument: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub uncertainties: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NoBaseline {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub justification_kind: Field<JustificationKind>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub justification_text: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub supporting_details: Field<Text>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternative_reference: Option<AlternativeReference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceContribution {
    pub source: String,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub weight_label: Field<String>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub note: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Preregistration {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub registered: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub how: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FuturePerformance {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub near_term: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub medium_term: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub implications: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub explanation: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub decision_point_estimate: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReviewTime {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub statement: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub quantified_estimate: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Disagreements {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub arose: Field<bool>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub summary: Field<Text>,
    /// How they were handled, or how they would have been.
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub handling: Field<Text>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultsInterpretation {
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub conclusion: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub decision_impact: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub evidence_contributions: Field<Vec<EvidenceContribution>>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub other_influences: Field<Text>,
    #[serde(default, skip_serializing_if = "Field::is_absent")]
    pub falsification_conditions: Field<Text>,
    #[serde(default)]
    pub preregistration: Preregistration,
    #[serde(default)]
    pub future_performance: FuturePerformance,
    #[serde(default)]
    pub review_time: ReviewTime,
    #[serde(default)]
    pub disagreements: Disagreements,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attestation {
    pub id: String,
    pub attester: String,
    /// Atomic requirement ids the statement covers.
    pub scope: Vec<String>,
    pub statement: Text,
}

impl ReportDocument {
    pub fn evaluation(&self, name: &str) -> Option<&EvaluationSummary> {
        self.evaluations.iter().find(|e| e.name == name)
    }

    pub fn attestation_exists(&self, id: &str) -> bool {
        self.attestations.iter().any(|a| a.id == id)
    }
}
