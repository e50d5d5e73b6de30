use serde::{Deserialize, Serialize};

use super::grade::{grade_criterion, GradeValue, Outcome};
use super::session::REPORT_SCOPE;
use super::{Assessment, CriterionRecord, ScoringConfig};
use crate::error::ScoreError;
use crate::rubric::{Rubric, Scope};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub criterion: String,
    pub category: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Evaluation,
    Report,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub grade: GradeValue,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rationale: String,
    /// Judgments outstanding; the grade counts them as unmet.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub pending: bool,
}

impl Cell {
    fn not_applicable() -> Self {
        Cell { grade: GradeValue::NotApplicable, rationale: String::new(), pending: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub kind: RowKind,
    /// One cell per column.
    pub cells: Vec<Cell>,
    pub points: f64,
    pub applicable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryTotal {
    pub category: u8,
    pub title: String,
    pub points: f64,
    pub applicable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scorecard {
    pub rubric_version: String,
    pub report_digest: String,
    pub full_credit_threshold: f64,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub categories: Vec<CategoryTotal>,
    pub points: f64,
    pub applicable: usize,
    /// `points / applicable`; absent when nothing was applicable.
    pub normalized: Option<f64>,
    pub pending: usize,
    pub provisional: bool,
}

impl Scorecard {
    pub fn evaluation_count(&self) -> usize {
        self.rows.iter().filter(|r| r.kind == RowKind::Evaluation).count()
    }
}

/// Percentage with one decimal, rounding halves up.
pub fn display_percent(share: f64) -> String {
    // The nudge keeps shares like 0.0125 from landing just under the half.
    let tenths = (share * 1000.0 + 0.5 + 1e-9).floor();
    format!("{:.1}%", tenths / 10.0)
}

/// Grades every applicable criterion and aggregates.
///
/// Evaluation rows leave once-per-report columns not applicable; a single
/// report row carries them.
pub fn score_report(assessment: &Assessment, rubric: &Rubric, config: &ScoringConfig) -> Result<Scorecard, ScoreError> {
    if assessment.rubric_version != rubric.version {
        return Err(ScoreError::VersionMismatch {
            expected: rubric.version.clone(),
            found: assessment.rubric_version.clone(),
        });
    }
    let pending = assessment.pending();
    if pending > 0 && !config.allow_pending {
        return Err(ScoreError::Pending(pending));
    }

    let columns: Vec<Column> =
        rubric.criteria().map(|(cat, c)| Column { criterion: c.id.clone(), category: cat.id }).collect();

    let build_row = |label: &str, kind: RowKind, records: &[CriterionRecord]| -> Result<Row, ScoreError> {
        let mut cells = Vec::with_capacity(columns.len());
        for (_, c) in rubric.criteria() {
            let cell = match records.iter().find(|r| r.criterion == c.id) {
                None => Cell::not_applicable(),
                Some(rec) => match grade_criterion(rec, c, config)? {
                    Outcome::Graded(g) => Cell { grade: g.value, rationale: g.rationale, pending: false },
                    Outcome::Pending { provisional, .. } => {
                        Cell { grade: provisional.value, rationale: provisional.rationale, pending: true }
                    }
                },
            };
            cells.push(cell);
        }
        let points = cells.iter().filter_map(|c| c.grade.points()).sum();
        let applicable = cells.iter().filter(|c| c.grade != GradeValue::NotApplicable).count();
        Ok(Row { label: label.to_string(), kind, cells, points, applicable })
    };

    let mut rows = Vec::new();
    for e in &assessment.evaluations {
        rows.push(build_row(&e.name, RowKind::Evaluation, &e.criteria)?);
    }
    let report_records: Vec<CriterionRecord> = assessment
        .report_level
        .iter()
        .filter(|r| rubric.category_of(&r.criterion).is_some_and(|c| c.scope == Scope::OncePerReport))
        .cloned()
        .collect();
    rows.push(build_row(REPORT_SCOPE, RowKind::Report, &report_records)?);

    let categories: Vec<CategoryTotal> = rubric
        .categories
        .iter()
        .map(|cat| {
            let (mut points, mut applicable) = (0.0, 0);
            for row in &rows {
                for (col, cell) in columns.iter().zip(&row.cells) {
                    if col.category == cat.id {
                        if let Some(p) = cell.grade.points() {
                            points += p;
                            applicable += 1;
                        }
                    }
                }
            }
            CategoryTotal { category: cat.id, title: cat.title.clone(), points, applicable }
        })
        .collect();
    let points = rows.iter().map(|r| r.points).sum();
    let applicable = rows.iter().map(|r| r.applicable).sum();
    let normalized = (applicable > 0).then(|| points / applicable as f64);
    let pending_cells = rows.iter().flat_map(|r| r.cells.iter()).any(|c| c.pending);

    Ok(Scorecard {
        rubric_version: rubric.version.clone(),
        report_digest: assessment.report_digest.clone(),
        full_credit_threshold: config.full_credit_threshold,
        columns,
        rows,
        categories,
        points,
        applicable,
        normalized,
        pending,
        provisional: pending_cells,
    })
}
