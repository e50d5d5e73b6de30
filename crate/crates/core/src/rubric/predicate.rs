//! Applicability predicates over report facts.
//!
//! Predicates use a small textual grammar shared by the JSON rubric format and
//! the expanded checklist:
//!
//! ```text
//! pred := fact | "not" pred | "any(" pred ("," pred)* ")" | "all(" pred ("," pred)* ")"
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A named fact extracted from a report, used by `only_if` conditions and rule triggers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKey {
    SubsetUsed,
    MixedFormats,
    ThirdPartyModified,
    DesignerIsPublisher,
    QcTaken,
    NotRepresentative,
    NotCoreToAssessment,
    HumanGraded,
    AutoGraded,
    MultipleAutograderSamples,
    ValidatedAgainstHumans,
    AutograderCompared,
    NonFinalInstancesTested,
    NoFinalVersionTested,
    MitigationsStated,
    FineTuningUsed,
    NonMeanStatistic,
    CiGiven,
    AblationsPerformed,
    ContaminationTested,
    HumanBaselineUsed,
    ExpertBaseline,
    BaselineCiGiven,
    BaselineStatDiffers,
    NonEmpiricalAlternative,
    OpenWeight,
    DisagreementsNotDenied,
}

impl FactKey {
    pub const ALL: [FactKey; 27] = [
        FactKey::SubsetUsed,
        FactKey::MixedFormats,
        FactKey::ThirdPartyModified,
        FactKey::DesignerIsPublisher,
        FactKey::QcTaken,
        FactKey::NotRepresentative,
        FactKey::NotCoreToAssessment,
        FactKey::HumanGraded,
        FactKey::AutoGraded,
        FactKey::MultipleAutograderSamples,
        FactKey::ValidatedAgainstHumans,
        FactKey::AutograderCompared,
        FactKey::NonFinalInstancesTested,
        FactKey::NoFinalVersionTested,
        FactKey::MitigationsStated,
        FactKey::FineTuningUsed,
        FactKey::NonMeanStatistic,
        FactKey::CiGiven,
        FactKey::AblationsPerformed,
        FactKey::ContaminationTested,
        FactKey::HumanBaselineUsed,
        FactKey::ExpertBaseline,
        FactKey::BaselineCiGiven,
        FactKey::BaselineStatDiffers,
        FactKey::NonEmpiricalAlternative,
        FactKey::OpenWeight,
        FactKey::DisagreementsNotDenied,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FactKey::SubsetUsed => "subset_used",
            FactKey::MixedFormats => "mixed_formats",
            FactKey::ThirdPartyModified => "third_party_modified",
            FactKey::DesignerIsPublisher => "designer_is_publisher",
            FactKey::QcTaken => "qc_taken",
            FactKey::NotRepresentative => "not_representative",
            FactKey::NotCoreToAssessment => "not_core_to_assessment",
            FactKey::HumanGraded => "human_graded",
            FactKey::AutoGraded => "auto_graded",
            FactKey::MultipleAutograderSamples => "multiple_autograder_samples",
            FactKey::ValidatedAgainstHumans => "validated_against_humans",
            FactKey::AutograderCompared => "autograder_compared",
            FactKey::NonFinalInstancesTested => "non_final_instances_tested",
            FactKey::NoFinalVersionTested => "no_final_version_tested",
            FactKey::MitigationsStated => "mitigations_stated",
            FactKey::FineTuningUsed => "fine_tuning_used",
            FactKey::NonMeanStatistic => "non_mean_statistic",
            FactKey::CiGiven => "ci_given",
            FactKey::AblationsPerformed => "ablations_performed",
            FactKey::ContaminationTested => "contamination_tested",
            FactKey::HumanBaselineUsed => "human_baseline_used",
            FactKey::ExpertBaseline => "expert_baseline",
            FactKey::BaselineCiGiven => "baseline_ci_given",
            FactKey::BaselineStatDiffers => "baseline_stat_differs",
            FactKey::NonEmpiricalAlternative => "non_empirical_alternative",
            FactKey::OpenWeight => "open_weight",
            FactKey::DisagreementsNotDenied => "disagreements_not_denied",
        }
    }

    pub fn from_name(name: &str) -> Option<FactKey> {
        FactKey::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for FactKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Fact(FactKey),
    Not(Box<Predicate>),
    Any(Vec<Predicate>),
    All(Vec<Predicate>),
}

impl Predicate {
    /// Three-valued evaluation: `None` when the outcome depends on an unknown fact.
    pub fn eval(&self, lookup: &dyn Fn(FactKey) -> Option<bool>) -> Option<bool> {
        match self {
            Predicate::Fact(key) => lookup(*key),
            Predicate::Not(inner) => inner.eval(lookup).map(|v| !v),
            Predicate::Any(items) => {
                let mut unknown = false;
                for item in items {
                    match item.eval(lookup) {
                        Some(true) => return Some(true),
                        Some(false) => {}
                        None => unknown = true,
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
            Predicate::All(items) => {
                let mut unknown = false;
                for item in items {
                    match item.eval(lookup) {
                        Some(false) => return Some(false),
                        Some(true) => {}
                        None => unknown = true,
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
        }
    }

    pub fn facts(&self) -> Vec<FactKey> {
        let mut out = Vec::new();
        self.collect_facts(&mut out);
        out
    }

    fn collect_facts(&self, out: &mut Vec<FactKey>) {
        match self {
            Predicate::Fact(key) => out.push(*key),
            Predicate::Not(inner) => inner.collect_facts(out),
            Predicate::Any(items) | Predicate::All(items) => {
                items.iter().for_each(|p| p.collect_facts(out))
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Fact(key) => write!(f, "{key}"),
            Predicate::Not(inner) => write!(f, "not {inner}"),
            Predicate::Any(items) | Predicate::All(items) => {
                let head = if matches!(self, Predicate::Any(_)) { "any" } else { "all" };
                write!(f, "{head}(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid predicate at byte {offset}: {message}")]
pub struct PredicateParseError {
    pub offset: usize,
    pub message: String,
}

const MAX_DEPTH: usize = 32;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> PredicateParseError {
        PredicateParseError { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> &'a str {
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn parse(&mut self, depth: usize) -> Result<Predicate, PredicateParseError> {
        if depth > MAX_DEPTH {
            return Err(self.err("predicate nested too deeply"));
        }
        self.skip_ws();
        let start = self.pos;
        let word = self.ident();
        match word {
            "" => Err(self.err("expected a fact name")),
            "not" => {
                let before = self.pos;
                self.skip_ws();
                if self.pos == before && !self.src[self.pos..].starts_with('(') {
                    return Err(self.err("expected whitespace after `not`"));
                }
                Ok(Predicate::Not(Box::new(self.parse(depth + 1)?)))
            }
            "any" | "all" if self.eat('(') => {
                let mut items = vec![self.parse(depth + 1)?];
                while self.eat(',') {
                    items.push(self.parse(depth + 1)?);
                }
                if !self.eat(')') {
                    return Err(self.err("expected `,` or `)`"));
                }
                Ok(if word == "any" { Predicate::Any(items) } else { Predicate::All(items) })
            }
            name => FactKey::from_name(name).map(Predicate::Fact).ok_or_else(|| {
                PredicateParseError { offset: start, message: format!("unknown fact `{name}`") }
            }),
        }
    }
}

impl FromStr for Predicate {
    type Err = PredicateParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { src: s, pos: 0 };
        let pred = parser.parse(0)?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.err("trailing input"));
        }
        Ok(pred)
    }
}

impl Serialize for Predicate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Predicate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
