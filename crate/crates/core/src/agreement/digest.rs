use serde::{Deserialize, Serialize};

use super::{krippendorff_alpha, AlphaMetric, RaterMatrix};
use crate::error::AgreementError;

/// Heading used when no statistic is defined for the data.
pub const UNSUITABLE_HEADER: &str = "statistics unsuitable; qualitative summary";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigestEntry {
    pub item: String,
    /// Grades in rater order.
    pub values: Vec<Option<f64>>,
    /// Largest minus smallest grade.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Digest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header: Option<String>,
    /// Plain-language summary lines.
    pub summary: Vec<String>,
    /// Items where raters differ, widest spread first.
    pub entries: Vec<DigestEntry>,
}

/// Lists the items raters disagree on.
///
/// When the data leave alpha undefined the digest opens with
/// [`UNSUITABLE_HEADER`] and describes the grades in words instead.
pub fn disagreement_digest(matrix: &RaterMatrix) -> Result<Digest, AgreementError> {
    matrix.check()?;
    let mut entries: Vec<DigestEntry> = matrix
        .items
        .iter()
        .zip(&matrix.values)
        .filter_map(|(item, row)| {
            let rated: Vec<f64> = row.iter().flatten().copied().collect();
            let lo = rated.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = rated.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (rated.len() >= 2 && hi > lo).then(|| DigestEntry { item: item.clone(), values: row.clone(), spread: hi - lo })
        })
        .collect();
    entries.sort_by(|a, b| b.spread.total_cmp(&a.spread));

    let undefined = match krippendorff_alpha(matrix, AlphaMetric::Interval) {
        Ok(r) => r.is_undefined(),
        Err(_) => true,
    };
    let rated_items = matrix.values.iter().filter(|r| r.iter().flatten().count() >= 2).count();
    let mut summary = vec![format!(
        "{} raters, {} items graded by at least two, {} with disagreement",
        matrix.raters.len(),
        rated_items,
        entries.len()
    )];
    let header = if undefined {
        let all: Vec<f64> = matrix.values.iter().flatten().flatten().copied().collect();
        let distinct = {
            let mut d = all.clone();
            d.sort_by(f64::total_cmp);
            d.dedup();
            d
        };
        match distinct.as_slice() {
            [] => summary.push("no grades recorded".into()),
            [v] => summary.push(format!("every rater gave every item the same grade ({v})")),
            _ => summary.push("too few jointly graded items to estimate agreement".into()),
        }
        Some(UNSUITABLE_HEADER.to_string())
    } else {
        None
    };
    Ok(Digest { header, summary, entries })
}
