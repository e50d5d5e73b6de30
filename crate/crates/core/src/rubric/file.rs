use serde::{Deserialize, Serialize};

use super::{
    validate_rubric, AtomicRequirement, Branch, Category, CheckKind, Condition, Criterion,
    RubricFindingKind, Scope, SpecialRule, Tier,
};
use crate::error::RubricError;
use crate::Rubric;

pub const RUBRIC_SCHEMA: &str = "stream-rubric/v1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RubricDoc {
    schema: String,
    version: String,
    categories: Vec<CategoryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    id: u8,
    title: String,
    scope: Scope,
    criteria: Vec<CriterionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CriterionDoc {
    id: String,
    title: String,
    #[serde(default)]
    summary: String,
    branch: Branch,
    requirements: Vec<RequirementDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<SpecialRule>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequirementDoc {
    id: String,
    tier: Tier,
    condition: Condition,
    check: CheckKind,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
}

/// Parses a rubric document and checks every rubric invariant.
///
/// Accepts the `stream-rubric/v1` JSON format, or an expanded markdown
/// checklist as produced by [`crate::scaffold::export_checklist`].
pub fn load_rubric(source: &str) -> Result<Rubric, RubricError> {
    let trimmed = source.trim_start_matches('\u{feff}').trim_start();
    let rubric = if trimmed.starts_with('{') {
        from_json(trimmed)?
    } else if trimmed.starts_with('#') {
        crate::scaffold::parse_expanded_checklist(trimmed)?
    } else {
        return Err(RubricError::Malformed("expected a rubric JSON object or expanded checklist".into()));
    };
    check(rubric)
}

fn from_json(source: &str) -> Result<Rubric, RubricError> {
    let value: serde_json::Value =
        serde_json::from_str(source).map_err(|e| RubricError::Malformed(e.to_string()))?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(RUBRIC_SCHEMA) => {}
        Some(other) => return Err(RubricError::UnknownSchema(other.to_string())),
        None => return Err(RubricError::Malformed("missing `schema` field".into())),
    }
    let doc: RubricDoc =
        serde_json::from_value(value).map_err(|e| RubricError::Malformed(e.to_string()))?;
    Ok(Rubric {
        version: doc.version,
        categories: doc
            .categories
            .into_iter()
            .map(|c| Category {
                id: c.id,
                title: c.title,
                scope: c.scope,
                criteria: c.criteria.into_iter().map(criterion_from_doc).collect(),
            })
            .collect(),
    })
}

fn criterion_from_doc(doc: CriterionDoc) -> Criterion {
    let (minimum, full_credit) = doc
        .requirements
        .into_iter()
        .map(|r| AtomicRequirement {
            id: r.id,
            text: r.text,
            tier: r.tier,
            condition: r.condition,
            check: r.check,
            provenance: r.provenance,
        })
        .partition(|r| r.tier == Tier::Minimum);
    Criterion {
        id: doc.id,
        title: doc.title,
        summary: doc.summary,
        branch: doc.branch,
        minimum,
        full_credit,
        overrides: doc.overrides,
    }
}

fn check(rubric: Rubric) -> Result<Rubric, RubricError> {
    let findings = validate_rubric(&rubric);
    let Some(first) = findings.first() else {
        return Ok(rubric);
    };
    Err(match first.kind {
        RubricFindingKind::DuplicateId => RubricError::DuplicateId(first.subject.clone()),
        RubricFindingKind::LeafCountMismatch => RubricError::LeafCountMismatch(first.message.clone()),
        RubricFindingKind::BranchGroupsNotExclusive => RubricError::BranchGroups(first.message.clone()),
        _ => RubricError::Invalid(findings),
    })
}

/// Serializes a rubric in the `stream-rubric/v1` format with 2-space indentation.
pub fn rubric_to_json(rubric: &Rubric) -> String {
    let doc = RubricDoc {
        schema: RUBRIC_SCHEMA.to_string(),
        version: rubric.version.clone(),
        categories: rubric
            .categories
            .iter()
            .map(|c| CategoryDoc {
                id: c.id,
                title: c.title.clone(),
                scope: c.scope,
                criteria: c
                    .criteria
                    .iter()
                    .map(|cr| CriterionDoc {
                        id: cr.id.clone(),
                        title: cr.title.clone(),
                        summary: cr.summary.clone(),
                        branch: cr.branch,
                        requirements: cr
                            .requirements()
                            .map(|r| RequirementDoc {
                                id: r.id.clone(),
                                tier: r.tier,
                                condition: r.condition.clone(),
                                check: r.check.clone(),
                                text: r.text.clone(),
                                provenance: r.provenance.clone(),
                            })
                            .collect(),
                        overrides: cr.overrides.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("rubric serializes");
    out.push('\n');
    out
}
