use serde::{Deserialize, Serialize};

use super::session::{GraderSession, Verdict, REPORT_SCOPE};
use super::{CriterionRecord, RequirementStatus, Status};
use crate::error::{AssessError, JudgmentError, ReportError};
use crate::metadata::EvaluationMetadata;
use crate::report::{
    extract_facts, extract_report_facts, report_digest, resolve_report_scope, resolve_scope, FactSet,
    ReportDocument, Resolution,
};
use crate::rubric::{
    branch_applies, requirement_applicability, Applicability, CheckKind, Criterion, RuleTrigger, Rubric, Scope,
};

pub const ASSESSMENT_SCHEMA: &str = "stream-assessment/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub schema: String,
    pub report_digest: String,
    pub rubric_version: String,
    pub evaluations: Vec<EvaluationAssessment>,
    /// Records for once-per-report criteria.
    pub report_level: Vec<CriterionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationAssessment {
    pub name: String,
    pub metadata: EvaluationMetadata,
    /// One record per applicable criterion, in rubric order.
    pub criteria: Vec<CriterionRecord>,
}

impl Assessment {
    pub fn records(&self, scope: &str) -> Option<&[CriterionRecord]> {
        if scope == REPORT_SCOPE {
            return Some(&self.report_level);
        }
        self.evaluations.iter().find(|e| e.name == scope).map(|e| e.criteria.as_slice())
    }

    fn records_mut(&mut self, scope: &str) -> Option<&mut Vec<CriterionRecord>> {
        if scope == REPORT_SCOPE {
            return Some(&mut self.report_level);
        }
        self.evaluations.iter_mut().find(|e| e.name == scope).map(|e| &mut e.criteria)
    }

    /// Pending items across every scope.
    pub fn pending(&self) -> usize {
        self.evaluations
            .iter()
            .flat_map(|e| e.criteria.iter())
            .chain(self.report_level.iter())
            .map(CriterionRecord::pending)
            .sum()
    }

    pub fn status(&self, scope: &str, requirement: &str) -> Option<&RequirementStatus> {
        self.records(scope)?
            .iter()
            .flat_map(|r| r.statuses.iter())
            .find(|s| s.requirement == requirement)
    }
}

/// Settles every presence check the report can answer and marks the rest pending.
pub fn auto_assess(report: &ReportDocument, rubric: &Rubric) -> Result<Assessment, AssessError> {
    let mut evaluations = Vec::with_capacity(report.evaluations.len());
    for eval in &report.evaluations {
        let facts = extract_facts(report, &eval.name).expect("evaluation exists");
        let mut criteria = Vec::new();
        for (cat, c) in rubric.criteria() {
            if cat.scope != Scope::PerEvaluation || !branch_applies(c.branch, &eval.metadata) {
                continue;
            }
            criteria.push(assess_criterion(c, &facts, |p| resolve_scope(report, &eval.name, p))?);
        }
        evaluations.push(EvaluationAssessment { name: eval.name.clone(), metadata: eval.metadata.clone(), criteria });
    }

    let facts = extract_report_facts(report);
    let mut report_level = Vec::new();
    for (cat, c) in rubric.criteria() {
        if cat.scope == Scope::OncePerReport {
            report_level.push(assess_criterion(c, &facts, |p| resolve_report_scope(report, p))?);
        }
    }

    Ok(Assessment {
        schema: ASSESSMENT_SCHEMA.to_string(),
        report_digest: report_digest(report),
        rubric_version: rubric.version.clone(),
        evaluations,
        report_level,
    })
}

fn assess_criterion(
    c: &Criterion,
    facts: &FactSet,
    resolve: impl Fn(&str) -> Result<Resolution, ReportError>,
) -> Result<CriterionRecord, AssessError> {
    let mut statuses = Vec::new();
    for req in c.requirements() {
        let applicability = requirement_applicability(req, facts);
        let presence = match &req.check {
            CheckKind::Presence(path) => Some(resolve(path).map_err(|_| AssessError::SchemaSkew {
                requirement: req.id.clone(),
                path: path.clone(),
            })?),
            CheckKind::Judgment => None,
        };
        let status = match (applicability, presence) {
            (Applicability::NotApplicable, _) => {
                RequirementStatus::auto(&req.id, Status::NotApplicable, Some("condition does not hold".into()))
            }
            (_, Some(res)) if res.is_present() => {
                let note = match res {
                    Resolution::Shared => "found in a shared section",
                    _ => "found in the evaluation",
                };
                RequirementStatus::auto(&req.id, Status::MetAuto, Some(note.into()))
            }
            // Absent, but a grader may still rule the item out.
            (Applicability::Unknown, _) => RequirementStatus::auto(&req.id, Status::PendingJudgment, None),
            (Applicability::Applicable, Some(_)) => {
                RequirementStatus::auto(&req.id, Status::Unmet, Some("not stated in the report".into()))
            }
            (Applicability::Applicable, None) => RequirementStatus::auto(&req.id, Status::PendingJudgment, None),
        };
        statuses.push(status);
    }
    let fact_rules = c
        .overrides
        .iter()
        .filter(|r| matches!(&r.trigger, RuleTrigger::Fact(p) if p.eval(&|k| facts.value(k)) == Some(true)))
        .map(|r| r.id.clone())
        .collect();
    Ok(CriterionRecord { criterion: c.id.clone(), statuses, fact_rules })
}

/// Applies a grader's effective judgments on top of an assessment.
///
/// Only the latest judgment per (requirement, scope) counts. Applying the same
/// session twice yields the same assessment.
pub fn apply_judgments(
    assessment: &Assessment,
    session: &GraderSession,
    rubric: &Rubric,
) -> Result<Assessment, JudgmentError> {
    if session.report_digest != assessment.report_digest {
        return Err(JudgmentError::ReportMismatch {
            expected: assessment.report_digest.clone(),
            found: session.report_digest.clone(),
        });
    }
    if session.rubric_version != assessment.rubric_version {
        return Err(JudgmentError::VersionMismatch {
            expected: assessment.rubric_version.clone(),
            found: session.rubric_version.clone(),
        });
    }
    let mut out = assessment.clone();
    for j in session.effective() {
        if rubric.requirement(&j.requirement).is_none() {
            return Err(JudgmentError::UnknownRequirement(j.requirement.clone()));
        }
        let records = out.records_mut(&j.scope).ok_or_else(|| JudgmentError::UnknownScope(j.scope.clone()))?;
        let not_applicable = || JudgmentError::NotApplicable {
            requirement: j.requirement.clone(),
            scope: j.scope.clone(),
        };
        let status = records
            .iter_mut()
            .flat_map(|r| r.statuses.iter_mut())
            .find(|s| s.requirement == j.requirement)
            .ok_or_else(not_applicable)?;
        let comment = j.comment.as_deref().map(str::trim).filter(|c| !c.is_empty());
        let need_comment = |what| JudgmentError::CommentRequired {
            requirement: j.requirement.clone(),
            scope: j.scope.clone(),
            what,
        };

        let target = match j.verdict {
            Verdict::Met => Status::MetJudged,
            Verdict::Unmet => Status::Unmet,
            Verdict::NotApplicable => Status::NotApplicable,
        };
        if status.is_auto_resolved() {
            let agrees = matches!(
                (status.status, j.verdict),
                (Status::MetAuto, Verdict::Met) | (Status::Unmet, Verdict::Unmet)
            );
            if agrees && !j.r#override {
                continue;
            }
            if status.status == Status::NotApplicable && !j.r#override {
                return Err(not_applicable());
            }
            if !j.r#override {
                return Err(JudgmentError::OverrideRequired {
                    requirement: j.requirement.clone(),
                    scope: j.scope.clone(),
                });
            }
            if comment.is_none() {
                return Err(need_comment("an override"));
            }
            status.overridden = true;
        } else if j.r#override && comment.is_none() {
            return Err(need_comment("an override"));
        }
        if j.verdict == Verdict::NotApplicable && comment.is_none() {
            return Err(need_comment("a not-applicable verdict"));
        }
        status.status = target;
        status.judge = Some(session.grader.clone());
        status.note = comment.map(str::to_string);
    }
    Ok(out)
}
