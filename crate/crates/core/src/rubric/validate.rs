use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::{
    Branch, CheckKind, Rubric, RuleEffect, RuleTrigger, Scope, Tier, CATEGORY_LEAF_COUNTS,
    CRITERION_COUNT,
};
use crate::report::schema::is_declared_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RubricFindingKind {
    DuplicateId,
    LeafCountMismatch,
    BranchGroupsNotExclusive,
    UnresolvedPath,
    EmptyMinimum,
    TierOrder,
    BadLabel,
    ScopeMismatch,
    BadRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RubricFinding {
    pub kind: RubricFindingKind,
    /// Criterion or requirement id the finding is about.
    pub subject: String,
    pub message: String,
}

impl std::fmt::Display for RubricFinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

fn finding(kind: RubricFindingKind, subject: &str, message: String) -> RubricFinding {
    RubricFinding { kind, subject: subject.to_string(), message }
}

/// Lists every invariant violation in document order. Empty for a valid rubric.
pub fn validate_rubric(rubric: &Rubric) -> Vec<RubricFinding> {
    use RubricFindingKind::*;
    let mut out = Vec::new();

    let total = rubric.criterion_count();
    if total != CRITERION_COUNT {
        out.push(finding(
            LeafCountMismatch,
            &rubric.version,
            format!("leaf count mismatch: expected {CRITERION_COUNT} criteria, found {total}"),
        ));
    }
    let counts: Vec<usize> = rubric.categories.iter().map(|c| c.criteria.len()).collect();
    if counts != CATEGORY_LEAF_COUNTS {
        out.push(finding(
            LeafCountMismatch,
            &rubric.version,
            format!("leaf count mismatch: category sizes {counts:?}, expected {CATEGORY_LEAF_COUNTS:?}"),
        ));
    }

    let mut seen = HashSet::new();
    for (idx, cat) in rubric.categories.iter().enumerate() {
        let cat_label = format!("category {}", cat.id);
        if usize::from(cat.id) != idx + 1 {
            out.push(finding(BadLabel, &cat_label, format!("category ids must run 1..n, found {} at position {}", cat.id, idx + 1)));
        }
        let expected = if cat.id == 6 { Scope::OncePerReport } else { Scope::PerEvaluation };
        if cat.scope != expected {
            out.push(finding(ScopeMismatch, &cat_label, format!("scope must be {expected:?}")));
        }
        for crit in &cat.criteria {
            if !seen.insert(crit.id.clone()) {
                out.push(finding(DuplicateId, &crit.id, format!("duplicate id `{}`", crit.id)));
            }
            if !crit.id.starts_with(&format!("{}(", cat.id)) || !crit.id.ends_with(')') {
                out.push(finding(BadLabel, &crit.id, format!("criterion label does not belong to category {}", cat.id)));
            }
            if crit.minimum.is_empty() {
                out.push(finding(EmptyMinimum, &crit.id, "minimum tier is empty".into()));
            }
            for (list, tier) in [(&crit.minimum, Tier::Minimum), (&crit.full_credit, Tier::FullCredit)] {
                for req in list.iter() {
                    if req.tier != tier {
                        out.push(finding(TierOrder, &req.id, format!("listed under {} but tagged {}", tier.label(), req.tier.label())));
                    }
                }
            }
            let mut last_letter: Option<(&str, Tier)> = None;
            for req in crit.requirements() {
                if !seen.insert(req.id.clone()) {
                    out.push(finding(DuplicateId, &req.id, format!("duplicate id `{}`", req.id)));
                }
                let Some(letter) = req.id.strip_prefix(crit.id.as_str()).filter(|l| {
                    !l.is_empty() && l.chars().all(|c| c.is_ascii_uppercase())
                }) else {
                    out.push(finding(BadLabel, &req.id, format!("requirement label must be `{}` followed by capital letters", crit.id)));
                    continue;
                };
                if let Some((prev, prev_tier)) = last_letter {
                    let ordered = (prev.len(), prev) < (letter.len(), letter);
                    if !ordered {
                        out.push(finding(TierOrder, &req.id, format!("label does not follow `{prev}`")));
                    } else if prev_tier == Tier::FullCredit && req.tier == Tier::Minimum {
                        out.push(finding(TierOrder, &req.id, "minimum item follows a full-credit item".into()));
                    }
                }
                last_letter = Some((letter, req.tier));
                if let CheckKind::Presence(path) = &req.check {
                    if !is_declared_path(path) {
                        out.push(finding(UnresolvedPath, &req.id, format!("unresolved schema path `{path}`")));
                    }
                }
            }
            for rule in &crit.overrides {
                if rule.provenance.trim().is_empty() {
                    out.push(finding(BadRule, &rule.id, "special rule lacks provenance".into()));
                }
                if let RuleTrigger::Met(id) = &rule.trigger {
                    if crit.requirement(id).is_none() {
                        out.push(finding(BadRule, &rule.id, format!("trigger names unknown requirement `{id}`")));
                    }
                }
                if let RuleEffect::CountsAsMet(id) = &rule.effect {
                    match crit.requirement(id) {
                        Some(r) if r.tier == Tier::Minimum => {}
                        _ => out.push(finding(BadRule, &rule.id, format!("effect must name a minimum item of {}, got `{id}`", crit.id))),
                    }
                }
            }
        }
    }

    out.extend(branch_findings(rubric));
    out
}

fn branch_findings(rubric: &Rubric) -> Vec<RubricFinding> {
    use RubricFindingKind::BranchGroupsNotExclusive as K;
    let mut out = Vec::new();
    let mut groups: BTreeMap<String, Vec<(&str, Branch)>> = BTreeMap::new();
    for (_, crit) in rubric.criteria() {
        match crit.branch_group() {
            Some(group) => groups.entry(group).or_default().push((&crit.id, crit.branch)),
            None if crit.branch != Branch::Always => out.push(finding(
                K,
                &crit.id,
                format!("branch groups not exclusive: `{}` is branched but not part of a branch group", crit.id),
            )),
            None => {}
        }
    }
    for (group, members) in &groups {
        let first = members[0].1;
        if first == Branch::Always {
            out.push(finding(K, group, format!("branch groups not exclusive: group {group} has no branch condition")));
        }
        if members.iter().any(|(_, b)| *b != first) {
            out.push(finding(K, group, format!("branch groups not exclusive: members of {group} disagree on their branch")));
        }
    }
    let has = |b: Branch| rubric.criteria().any(|(_, c)| c.branch == b);
    if has(Branch::HumanBaseline) != has(Branch::NoHumanBaseline) {
        out.push(finding(
            K,
            &rubric.version,
            "branch groups not exclusive: baseline branches must cover both human and no-human baselines".into(),
        ));
    }
    out
}
