use std::collections::HashSet;

use chrono::NaiveDate;
use serde::Serialize;
use serde_json::Value;

use super::schema::is_declared_path;
use super::{Baseline, Field, MitigationSet, ReportDocument, Stat, Uncertainty};
use crate::metadata::BaselineKind;
use crate::rubric::Rubric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFindingKind {
    DanglingReference,
    BaselineVariantMismatch,
    GradingBlockMismatch,
    InvertedInterval,
    IntervalExcludesStatistic,
    ValueOutOfRange,
    MixedProportions,
    InvalidDate,
    EmptyText,
    DuplicateName,
    MitigationMismatch,
    UnknownRequirement,
    UnresolvedPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportFinding {
    pub kind: ReportFindingKind,
    /// Dotted location in the document, e.g. `evaluations[WMDP].baseline`.
    pub location: String,
    pub message: String,
}

impl std::fmt::Display for ReportFinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Cross-reference and consistency checks against the built-in rubric.
pub fn validate_report_structure(report: &ReportDocument) -> Vec<ReportFinding> {
    validate_report_against(report, Rubric::builtin())
}

/// Same checks, resolving attestation scopes against `rubric`.
pub fn validate_report_against(report: &ReportDocument, rubric: &Rubric) -> Vec<ReportFinding> {
    let mut v = Validator { out: Vec::new() };
    v.run(report, rubric);
    v.out
}

struct Validator {
    out: Vec<ReportFinding>,
}

impl Validator {
    fn push(&mut self, kind: ReportFindingKind, location: impl Into<String>, message: impl Into<String>) {
        self.out.push(ReportFinding { kind, location: location.into(), message: message.into() });
    }

    fn run(&mut self, r: &ReportDocument, rubric: &Rubric) {
        use ReportFindingKind::*;
        let tm_names = self.unique_names("shared.threat_models", r.shared.threat_models.iter().map(|t| t.name.as_str()));
        let mv_names = self.unique_names("shared.model_versions", r.shared.model_versions.iter().map(|m| m.name.as_str()));
        let eval_names: HashSet<&str> = r.evaluations.iter().map(|e| e.name.as_str()).collect();

        self.date("meta.publication_date", &r.meta.publication_date);
        for m in &r.shared.model_versions {
            let loc = format!("shared.model_versions[{}]", m.name);
            self.date(&format!("{loc}.deployment_date"), &m.deployment_date);
            let reduced = matches!(m.mitigation_set, Field::Value(MitigationSet::Reduced | MitigationSet::Minimal));
            if m.identical_to_deployed.get() == Some(true) && reduced && !m.mitigation_note.is_value() {
                self.push(MitigationMismatch, loc, "identical to the deployed model but tested without the full mitigation set, and no note explains why");
            }
        }

        for (i, s) in r.shared.suite_statements.iter().enumerate() {
            let loc = format!("shared.suite_statements[{i}]");
            for name in &s.evaluations {
                if !eval_names.contains(name.as_str()) {
                    self.push(DanglingReference, &loc, format!("dangling suite statement reference to evaluation `{name}`"));
                }
            }
            if !is_declared_path(&s.path) {
                self.push(UnresolvedPath, &loc, format!("unresolved schema path `{}`", s.path));
            }
        }

        for e in &r.evaluations {
            let loc = format!("evaluations[{}]", e.name);
            if e.name.trim().is_empty() {
                self.push(EmptyText, "evaluations[]", "evaluation name is empty");
            }
            for p in e.metadata.problems() {
                self.push(MixedProportions, format!("{loc}.metadata.answer_format"), p);
            }
            if let Some(refs) = e.threat_relevance.threat_model_refs.value() {
                for name in refs.iter().filter(|n| !tm_names.contains(n.as_str())) {
                    self.push(DanglingReference, format!("{loc}.threat_relevance.threat_model_refs"), format!("dangling threat model reference `{name}`"));
                }
            }
            if let Some(refs) = e.elicitation.model_version_refs.value() {
                for name in refs.iter().filter(|n| !mv_names.contains(n.as_str())) {
                    self.push(DanglingReference, format!("{loc}.elicitation.model_version_refs"), format!("dangling model version reference `{name}`"));
                }
            }

            let g = e.metadata.grading_method;
            if e.construction.human_grading.is_some() && !g.has_human() {
                self.push(GradingBlockMismatch, format!("{loc}.construction.human_grading"), "grading block mismatch: human_grading present but the grading method has no human graders");
            }
            if e.construction.auto_grading.is_some() && !g.has_auto() {
                self.push(GradingBlockMismatch, format!("{loc}.construction.auto_grading"), "grading block mismatch: auto_grading present but the grading method has no auto-grader");
            }
            if let Some(stat) = e.construction.human_grading.as_ref().and_then(|h| h.agreement_statistic.value()) {
                self.unit_range(&format!("{loc}.construction.human_grading.agreement_statistic"), &stat.value, -1.0);
            }
            if let Some(stat) = e.construction.auto_grading.as_ref().and_then(|a| a.agreement_statistic.value()) {
                self.unit_range(&format!("{loc}.construction.auto_grading.agreement_statistic"), &stat.value, -1.0);
            }

            let stats = e.performance.summary_stats.value().map(Vec::as_slice).unwrap_or(&[]);
            self.stats(&format!("{loc}.performance.summary_stats"), stats, &mv_names);
            if let Some(u) = e.performance.uncertainty.value() {
                self.uncertainty(&format!("{loc}.performance.uncertainty"), u, stats);
            }

            match (&e.baseline, e.metadata.baseline_kind) {
                (Some(Baseline::Human(_)), BaselineKind::NoHumanBaseline) | (Some(Baseline::None(_)), BaselineKind::HumanBaseline) => {
                    self.push(BaselineVariantMismatch, format!("{loc}.baseline"), "baseline variant mismatch: block does not match metadata.baseline_kind");
                }
                _ => {}
            }
            if let Some(Baseline::Human(h)) = &e.baseline {
                if h.n_participants.get() == Some(0) {
                    self.push(ValueOutOfRange, format!("{loc}.baseline.human.n_participants"), "n_participants must be at least 1");
                }
                let hs = h.stats.value().map(Vec::as_slice).unwrap_or(&[]);
                self.stats(&format!("{loc}.baseline.human.stats"), hs, &mv_names);
                if let Some(u) = h.uncertainty.value() {
                    self.uncertainty(&format!("{loc}.baseline.human.uncertainty"), u, hs);
                }
            }
        }

        let known: HashSet<&str> = rubric.requirement_ids().into_iter().collect();
        let mut att_ids = HashSet::new();
        for (i, a) in r.attestations.iter().enumerate() {
            let loc = format!("attestations[{i}]");
            if !att_ids.insert(a.id.as_str()) {
                self.push(DuplicateName, &loc, format!("duplicate attestation id `{}`", a.id));
            }
            for id in a.scope.iter().filter(|id| !known.contains(id.as_str())) {
                self.push(UnknownRequirement, &loc, format!("attestation scope names unknown requirement `{id}`"));
            }
        }

        let tree = serde_json::to_value(r).expect("report serializes");
        self.walk(&tree, String::new(), &att_ids);
    }

    fn unique_names<'a>(&mut self, loc: &str, names: impl Iterator<Item = &'a str>) -> HashSet<&'a str> {
        let mut seen = HashSet::new();
        for n in names {
            if n.trim().is_empty() {
                self.push(ReportFindingKind::EmptyText, loc, "entry name is empty");
            } else if !seen.insert(n) {
                self.push(ReportFindingKind::DuplicateName, loc, format!("duplicate name `{n}`"));
            }
        }
        seen
    }

    fn date(&mut self, loc: &str, f: &Field<String>) {
        if let Field::Value(d) = f {
            if NaiveDate::parse_from_str(d, "%Y-%m-%d").is_err() {
                self.push(ReportFindingKind::InvalidDate, loc, format!("invalid date `{d}`, expected YYYY-MM-DD"));
            }
        }
    }

    fn unit_range(&mut self, loc: &str, v: &Field<f64>, low: f64) {
        if let Some(x) = v.get() {
            if !(low..=1.0).contains(&x) {
                self.push(ReportFindingKind::ValueOutOfRange, loc, format!("value {x} outside [{low}, 1]"));
            }
        }
    }

    fn stats(&mut self, loc: &str, stats: &[Stat], versions: &HashSet<&str>) {
        for (i, s) in stats.iter().enumerate() {
            if !s.unit.is_value() && !(0.0..=1.0).contains(&s.value) {
                self.push(ReportFindingKind::ValueOutOfRange, format!("{loc}[{i}]"), format!("fraction {} outside [0, 1]; name a unit for other scales", s.value));
            }
            if let Some(m) = s.model_version_ref.value() {
                if !versions.contains(m.as_str()) {
                    self.push(ReportFindingKind::DanglingReference, format!("{loc}[{i}]"), format!("dangling model version reference `{m}`"));
                }
            }
        }
    }

    fn uncertainty(&mut self, loc: &str, items: &[Uncertainty], stats: &[Stat]) {
        for (i, u) in items.iter().enumerate() {
            let here = format!("{loc}[{i}]");
            if u.low > u.high {
                self.push(ReportFindingKind::InvertedInterval, &here, format!("inverted interval: low {} > high {}", u.low, u.high));
            }
            if let Some(level) = u.level.get() {
                if !(level > 0.0 && level < 1.0) {
                    self.push(ReportFindingKind::ValueOutOfRange, &here, format!("confidence level {level} outside (0, 1)"));
                }
            }
            if let Some(idx) = u.stat.get() {
                match stats.get(idx) {
                    None => self.push(ReportFindingKind::DanglingReference, &here, format!("dangling statistic reference {idx}")),
                    Some(s) if u.low <= u.high && !(u.low <= s.value && s.value <= u.high) => self.push(
                        ReportFindingKind::IntervalExcludesStatistic,
                        &here,
                        format!("interval [{}, {}] does not contain its statistic {}", u.low, u.high, s.value),
                    ),
                    Some(_) => {}
                }
            }
        }
    }

    /// Empty strings anywhere, and redactions pointing at missing attestations.
    fn walk(&mut self, v: &Value, loc: String, attestations: &HashSet<&str>) {
        match v {
            Value::String(s) if s.trim().is_empty() => {
                self.push(ReportFindingKind::EmptyText, loc, "empty text; omit the field or use the placeholder instead");
            }
            Value::Object(map) => {
                if map.get("redacted") == Some(&Value::Bool(true)) {
                    match map.get("attestation").and_then(Value::as_str) {
                        Some(id) if !attestations.contains(id) => {
                            self.push(ReportFindingKind::DanglingReference, &loc, format!("dangling attestation reference `{id}`"));
                        }
                        _ => {}
                    }
                }
                for (k, child) in map {
                    let next = if loc.is_empty() { k.clone() } else { format!("{loc}.{k}") };
                    self.walk(child, next, attestations);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    self.walk(child, format!("{loc}[{i}]"), attestations);
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::parse_report;

    fn with_eval(body: &str, shared: &str) -> ReportDocument {
        let src = format!(
            r#"{{"schema":"stream-report/v1","shared":{shared},"evaluations":[{{"name":"E1","metadata":{{"answer_format":"open_ended","grading_method":"human_graded","baseline_kind":"no_human_baseline"}}{body}}}]}}"#
        );
        parse_report(&src).unwrap().report
    }

    fn kinds(r: &ReportDocument) -> Vec<ReportFindingKind> {
        validate_report_structure(r).into_iter().map(|f| f.kind).collect()
    }

    #[test]
    fn clean_minimal() {
        assert!(validate_report_structure(&with_eval("", "{}")).is_empty());
    }

    #[test]
    fn dangling_threat_model() {
        let r = with_eval(r#","threat_relevance":{"threat_model_refs":["TM-9"]}"#, r#"{"threat_models":[{"name":"TM-1"}]}"#);
        let f = validate_report_structure(&r);
        assert_eq!(f.len(), 1);
        assert!(f[0].message.contains("dangling threat model reference"));
    }

    #[test]
    fn baseline_mismatch() {
        let r = with_eval(r#","baseline":{"human":{"n_participants":12}}"#, "{}");
        let f = validate_report_structure(&r);
        assert_eq!(kinds(&r), [ReportFindingKind::BaselineVariantMismatch]);
        assert!(f[0].message.contains("baseline variant mismatch"));
    }

    #[test]
    fn inverted_interval() {
        let r = with_eval(
            r#","performance":{"uncertainty":[{"kind":"confidence_interval","level":0.95,"low":52.5,"high":42.1}]}"#,
            "{}",
        );
        let f = validate_report_structure(&r);
        assert!(f.iter().any(|f| f.message.contains("inverted interval")));
    }

    #[test]
    fn grading_block_and_empty_text() {
        let r = with_eval(r#","construction":{"auto_grading":{"base_model":""}}"#, "{}");
        assert_eq!(kinds(&r), [ReportFindingKind::GradingBlockMismatch, ReportFindingKind::EmptyText]);
    }

    #[test]
    fn dates_and_attestations() {
        let r = with_eval(
            r#","threat_relevance":{"example_item":{"redacted":true,"attestation":"ATT-2"}}"#,
            "{}",
        );
        assert_eq!(kinds(&r), [ReportFindingKind::DanglingReference]);
        let mut r = with_eval("", "{}");
        r.meta.publication_date = Field::Value("03/2025".into());
        assert_eq!(kinds(&r), [ReportFindingKind::InvalidDate]);
    }

    #[test]
    fn pure_and_ordered() {
        let r = with_eval(r#","threat_relevance":{"threat_model_refs":["A","B"]}"#, "{}");
        assert_eq!(validate_report_structure(&r), validate_report_structure(&r));
        assert_eq!(validate_report_structure(&r).len(), 2);
    }
}
