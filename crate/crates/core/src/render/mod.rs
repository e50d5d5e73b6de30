//! Scorecard output: SVG heatmap, terminal table and the JSON interchange form.

mod svg;
mod text;

use serde::{Deserialize, Serialize};

pub use svg::{render_svg, Theme};
pub use text::{render_text, Glyphs};

use crate::error::ScorecardError;
use crate::grading::{Row, Scorecard};

pub const SCORECARD_SCHEMA: &str = "stream-scorecard/v1";

#[derive(Serialize)]
struct ScorecardOut<'a> {
    schema: &'a str,
    #[serde(flatten)]
    card: &'a Scorecard,
}

#[derive(Deserialize)]
struct ScorecardIn {
    schema: String,
    #[serde(flatten)]
    card: Scorecard,
}

pub fn export_scorecard(card: &Scorecard) -> String {
    let mut s = serde_json::to_string_pretty(&ScorecardOut { schema: SCORECARD_SCHEMA, card })
        .expect("scorecard serializes");
    s.push('\n');
    s
}

pub fn import_scorecard(source: &str) -> Result<Scorecard, ScorecardError> {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let doc: ScorecardIn = serde_json::from_str(source).map_err(|e| ScorecardError::Malformed(e.to_string()))?;
    if doc.schema != SCORECARD_SCHEMA {
        return Err(ScorecardError::UnknownSchema(doc.schema));
    }
    let card = doc.card;
    let width = card.columns.len();
    if let Some(row) = card.rows.iter().find(|r| r.cells.len() != width) {
        return Err(ScorecardError::Malformed(format!(
            "row `{}` has {} cells for {width} columns",
            row.label,
            row.cells.len()
        )));
    }
    let applicable: usize = card.rows.iter().map(|r| r.applicable).sum();
    if applicable != card.applicable {
        return Err(ScorecardError::Malformed("row totals do not add up".into()));
    }
    Ok(card)
}

/// `points/applicable` with trailing `.0` dropped.
pub(crate) fn points_label(points: f64, applicable: usize) -> String {
    format!("{}/{applicable}", fmt_points(points))
}

pub(crate) fn fmt_points(points: f64) -> String {
    if points.fract() == 0.0 {
        format!("{points:.0}")
    } else {
        format!("{points:.1}")
    }
}

pub(crate) fn row_points(row: &Row) -> String {
    points_label(row.points, row.applicable)
}

pub(crate) fn normalized_label(card: &Scorecard) -> String {
    card.normalized.map_or_else(|| "n/a".to_string(), crate::grading::display_percent)
}

/// Widths of the category bands, in column order.
pub(crate) fn bands(card: &Scorecard) -> Vec<(u8, usize)> {
    let mut out: Vec<(u8, usize)> = Vec::new();
    for col in &card.columns {
        match out.last_mut() {
            Some((cat, n)) if *cat == col.category => *n += 1,
            _ => out.push((col.category, 1)),
        }
    }
    out
}
