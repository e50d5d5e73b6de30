use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::RubricError;
use crate::rubric::{
    AtomicRequirement, Branch, Category, CheckKind, Condition, Criterion, Rubric, RuleEffect,
    RuleTrigger, Scope, SpecialRule, Tier,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detail {
    Summary,
    Expanded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChecklistFormat {
    Text,
    Markdown,
}

const SEP: &str = " · ";

fn branch_note(b: Branch) -> &'static str {
    match b {
        Branch::Always => "",
        Branch::HumanGraded => " (human-graded evaluations)",
        Branch::AutoGraded => " (auto-graded evaluations)",
        Branch::HumanBaseline => " (evaluations with a human baseline)",
        Branch::NoHumanBaseline => " (evaluations without a human baseline)",
    }
}

fn scope_note(s: Scope) -> &'static str {
    match s {
        Scope::PerEvaluation => "per evaluation",
        Scope::OncePerReport => "once per report",
    }
}

fn scope_name(s: Scope) -> &'static str {
    match s {
        Scope::PerEvaluation => "per_evaluation",
        Scope::OncePerReport => "once_per_report",
    }
}

fn condition_str(c: &Condition) -> String {
    match c {
        Condition::Always => "always".into(),
        Condition::WhereApplicable => "where applicable".into(),
        Condition::OnlyIf(p) => format!("only if `{p}`"),
    }
}

fn check_str(c: &CheckKind) -> String {
    match c {
        CheckKind::Judgment => "judgment".into(),
        CheckKind::Presence(p) => format!("presence `{p}`"),
    }
}

fn trigger_str(t: &RuleTrigger) -> String {
    match t {
        RuleTrigger::Fact(p) => format!("when `{p}`"),
        RuleTrigger::Met(id) => format!("when met {id}"),
    }
}

fn effect_str(e: &RuleEffect) -> String {
    match e {
        RuleEffect::MinimumSufficesForFull => "minimum suffices for full credit".into(),
        RuleEffect::CountsAsMet(id) => format!("counts {id} as met"),
    }
}

/// Human-readable checklist generated from rubric data.
///
/// The expanded markdown form is also a rubric source: [`crate::rubric::load_rubric`]
/// reads it back into an equal rubric.
pub fn export_checklist(rubric: &Rubric, detail: Detail, format: ChecklistFormat) -> String {
    match (detail, format) {
        (Detail::Summary, ChecklistFormat::Markdown) => summary_markdown(rubric),
        (Detail::Summary, ChecklistFormat::Text) => summary_text(rubric),
        (Detail::Expanded, ChecklistFormat::Markdown) => expanded_markdown(rubric),
        (Detail::Expanded, ChecklistFormat::Text) => expanded_text(rubric),
    }
}

fn summary_markdown(r: &Rubric) -> String {
    let mut s = format!("# Summary checklist: {}\n", r.version);
    for cat in &r.categories {
        let _ = write!(s, "\n## {}. {} ({})\n\n", cat.id, cat.title, scope_note(cat.scope));
        for c in &cat.criteria {
            let _ = writeln!(s, "- [ ] **{}** {}{}", c.id, c.summary, branch_note(c.branch));
        }
    }
    s
}

fn summary_text(r: &Rubric) -> String {
    let mut s = format!("Summary checklist: {}\n", r.version);
    for cat in &r.categories {
        let _ = write!(s, "\n{}. {} ({})\n", cat.id, cat.title, scope_note(cat.scope));
        for c in &cat.criteria {
            let _ = writeln!(s, "  [ ] {:<8} {}{}", c.id, c.summary, branch_note(c.branch));
        }
    }
    s
}

fn expanded_text(r: &Rubric) -> String {
    let mut s = format!("Expanded checklist: {}\n", r.version);
    for cat in &r.categories {
        let _ = write!(s, "\n{}. {} ({})\n", cat.id, cat.title, scope_note(cat.scope));
        for c in &cat.criteria {
            let _ = write!(s, "\n  {} {}{}\n", c.id, c.title, branch_note(c.branch));
            for (label, items) in [("Minimum", &c.minimum), ("Full credit", &c.full_credit)] {
                if items.is_empty() {
                    continue;
                }
                let _ = writeln!(s, "    {label}");
                for req in items.iter() {
                    let cond = match &req.condition {
                        Condition::Always => String::new(),
                        Condition::WhereApplicable => "[where applicable] ".into(),
                        Condition::OnlyIf(p) => format!("[only if {p}] "),
                    };
                    let _ = writeln!(s, "      [ ] {:<10} {cond}{}", req.id, req.text);
                }
            }
            for rule in &c.overrides {
                let _ = writeln!(s, "    Note: {}; {}.", trigger_str(&rule.trigger), effect_str(&rule.effect));
            }
        }
    }
    s
}

fn expanded_markdown(r: &Rubric) -> String {
    let mut s = format!("# Expanded checklist: {}\n", r.version);
    for cat in &r.categories {
        let _ = write!(s, "\n## {}. {}\nscope: {}\n", cat.id, cat.title, scope_name(cat.scope));
        for c in &cat.criteria {
            let _ = write!(s, "\n### {} {}\nbranch: {}\nsummary: {}\n\n", c.id, c.title, c.branch.as_str(), c.summary);
            for req in c.requirements() {
                let tier = match req.tier {
                    Tier::Minimum => "minimum",
                    Tier::FullCredit => "full credit",
                };
                let _ = writeln!(
                    s,
                    "- **{}**{SEP}{tier}{SEP}{}{SEP}{}\n  {}",
                    req.id,
                    condition_str(&req.condition),
                    check_str(&req.check),
                    req.text
                );
                if let Some(p) = &req.provenance {
                    let _ = writeln!(s, "  *provenance:* {p}");
                }
            }
            for rule in &c.overrides {
                let _ = writeln!(
                    s,
                    "- rule **{}**{SEP}{}{SEP}{}\n  *provenance:* {}",
                    rule.id,
                    trigger_str(&rule.trigger),
                    effect_str(&rule.effect),
                    rule.provenance
                );
            }
        }
    }
    s
}

fn err(line: usize, msg: impl std::fmt::Display) -> RubricError {
    RubricError::Malformed(format!("checklist line {line}: {msg}"))
}

fn bold_id(s: &str) -> Option<&str> {
    s.strip_prefix("**")?.strip_suffix("**")
}

fn backticked(s: &str) -> Option<&str> {
    s.strip_prefix('`')?.strip_suffix('`')
}

enum Pending {
    None,
    Requirement(Tier),
    Rule,
}

/// Reads the expanded markdown checklist back into a rubric. No invariant checks here;
/// `load_rubric` runs those.
pub fn parse_expanded_checklist(source: &str) -> Result<Rubric, RubricError> {
    let mut lines = source.lines().enumerate().map(|(i, l)| (i + 1, l));
    let version = loop {
        let Some((n, line)) = lines.next() else {
            return Err(RubricError::Malformed("empty checklist".into()));
        };
        if line.trim().is_empty() {
            continue;
        }
        break line
            .strip_prefix("# Expanded checklist: ")
            .map(|v| v.trim().to_string())
            .ok_or_else(|| err(n, "expected `# Expanded checklist: <version>`"))?;
    };

    let mut categories: Vec<Category> = Vec::new();
    let mut pending = Pending::None;
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("### ") {
            let cat = categories.last_mut().ok_or_else(|| err(n, "criterion before any category"))?;
            let (id, title) = rest.split_once(' ').ok_or_else(|| err(n, "expected `### <id> <title>`"))?;
            cat.criteria.push(Criterion {
                id: id.to_string(),
                title: title.to_string(),
                summary: String::new(),
                branch: Branch::Always,
                minimum: Vec::new(),
                full_credit: Vec::new(),
                overrides: Vec::new(),
            });
            pending = Pending::None;
        } else if let Some(rest) = line.strip_prefix("## ") {
            let (id, title) = rest.split_once(". ").ok_or_else(|| err(n, "expected `## <n>. <title>`"))?;
            let id: u8 = id.parse().map_err(|_| err(n, format!("bad category id `{id}`")))?;
            categories.push(Category { id, title: title.to_string(), scope: Scope::PerEvaluation, criteria: Vec::new() });
            pending = Pending::None;
        } else if let Some(rest) = line.strip_prefix("scope: ") {
            let cat = categories.last_mut().ok_or_else(|| err(n, "scope before any category"))?;
            cat.scope = match rest.trim() {
                "per_evaluation" => Scope::PerEvaluation,
                "once_per_report" => Scope::OncePerReport,
                other => return Err(err(n, format!("unknown scope `{other}`"))),
            };
        } else if let Some(rest) = line.strip_prefix("branch: ") {
            let c = current(&mut categories).ok_or_else(|| err(n, "branch outside a criterion"))?;
            c.branch = Branch::parse(rest.trim()).ok_or_else(|| err(n, format!("unknown branch `{rest}`")))?;
        } else if let Some(rest) = line.strip_prefix("summary: ") {
            let c = current(&mut categories).ok_or_else(|| err(n, "summary outside a criterion"))?;
            c.summary = rest.to_string();
        } else if let Some(rest) = line.strip_prefix("- rule ") {
            let c = current(&mut categories).ok_or_else(|| err(n, "rule outside a criterion"))?;
            let parts: Vec<&str> = rest.split(SEP).collect();
            let [id, trigger, effect] = parts[..] else {
                return Err(err(n, "expected `- rule **<id>** · <trigger> · <effect>`"));
            };
            let id = bold_id(id).ok_or_else(|| err(n, "rule id must be bold"))?;
            let trigger = if let Some(req) = trigger.strip_prefix("when met ") {
                RuleTrigger::Met(req.to_string())
            } else {
                let p = trigger.strip_prefix("when ").and_then(backticked).ok_or_else(|| err(n, "bad rule trigger"))?;
                RuleTrigger::Fact(p.parse()?)
            };
            let effect = if effect == "minimum suffices for full credit" {
                RuleEffect::MinimumSufficesForFull
            } else {
                let id = effect
                    .strip_prefix("counts ")
                    .and_then(|e| e.strip_suffix(" as met"))
                    .ok_or_else(|| err(n, format!("unknown rule effect `{effect}`")))?;
                RuleEffect::CountsAsMet(id.to_string())
            };
            c.overrides.push(SpecialRule { id: id.to_string(), trigger, effect, provenance: String::new() });
            pending = Pending::Rule;
        } else if let Some(rest) = line.strip_prefix("- ") {
            let c = current(&mut categories).ok_or_else(|| err(n, "requirement outside a criterion"))?;
            let parts: Vec<&str> = rest.split(SEP).collect();
            let [id, tier, condition, check] = parts[..] else {
                return Err(err(n, "expected `- **<id>** · <tier> · <condition> · <check>`"));
            };
            let id = bold_id(id).ok_or_else(|| err(n, "requirement id must be bold"))?;
            let tier = match tier {
                "minimum" => Tier::Minimum,
                "full credit" => Tier::FullCredit,
                other => return Err(err(n, format!("unknown tier `{other}`"))),
            };
            let condition = match condition {
                "always" => Condition::Always,
                "where applicable" => Condition::WhereApplicable,
                other => {
                    let p = other.strip_prefix("only if ").and_then(backticked).ok_or_else(|| err(n, format!("unknown condition `{other}`")))?;
                    Condition::OnlyIf(p.parse()?)
                }
            };
            let check = match check {
                "judgment" => CheckKind::Judgment,
                other => {
                    let p = other.strip_prefix("presence ").and_then(backticked).ok_or_else(|| err(n, format!("unknown check `{other}`")))?;
                    CheckKind::Presence(p.to_string())
                }
            };
            let req = AtomicRequirement { id: id.to_string(), text: String::new(), tier, condition, check, provenance: None };
            match tier {
                Tier::Minimum => c.minimum.push(req),
                Tier::FullCredit => c.full_credit.push(req),
            }
            pending = Pending::Requirement(tier);
        } else if let Some(rest) = line.strip_prefix("  *provenance:* ") {
            let c = current(&mut categories).ok_or_else(|| err(n, "provenance outside a criterion"))?;
            match pending {
                Pending::Rule => c.overrides.last_mut().expect("rule pushed").provenance = rest.to_string(),
                Pending::Requirement(tier) => last_requirement(c, tier).provenance = Some(rest.to_string()),
                Pending::None => return Err(err(n, "provenance without an item")),
            }
            pending = Pending::None;
        } else if let Some(rest) = line.strip_prefix("  ") {
            let c = current(&mut categories).ok_or_else(|| err(n, "text outside a criterion"))?;
            let Pending::Requirement(tier) = pending else {
                return Err(err(n, "indented text without a requirement"));
            };
            let req = last_requirement(c, tier);
            if !req.text.is_empty() {
                return Err(err(n, "requirement text must be one line"));
            }
            req.text = rest.to_string();
        } else {
            return Err(err(n, format!("unrecognized line `{line}`")));
        }
    }
    Ok(Rubric { version, categories })
}

fn current(categories: &mut [Category]) -> Option<&mut Criterion> {
    categories.last_mut()?.criteria.last_mut()
}

fn last_requirement(c: &mut Criterion, tier: Tier) -> &mut AtomicRequirement {
    let list = match tier {
        Tier::Minimum => &mut c.minimum,
        Tier::FullCredit => &mut c.full_credit,
    };
    list.last_mut().expect("requirement pushed before its text")
}
