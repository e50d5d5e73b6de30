//! Inter-rater agreement on the three-point grade scale.
//!
//! Every statistic returns `value: None` with a note instead of dividing by
//! zero when the data carry no variation.

mod digest;
mod stats;

use serde::{Deserialize, Serialize};

pub use digest::{disagreement_digest, Digest, DigestEntry, UNSUITABLE_HEADER};
pub use stats::{agreement_summary, cohen_kappa, krippendorff_alpha, percent_agreement, spearman_rho};

use crate::error::AgreementError;

pub const AGREEMENT_SCHEMA: &str = "stream-agreement/v1";

/// The grade scale: not satisfied, partial, satisfied.
pub const SCALE: [f64; 3] = [0.0, 0.5, 1.0];

/// Index of `v` on [`SCALE`].
pub fn scale_index(v: f64) -> Result<usize, AgreementError> {
    SCALE.iter().position(|s| *s == v).ok_or(AgreementError::OffScale(v))
}

/// Items by raters; `None` marks a missing rating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaterMatrix {
    pub items: Vec<String>,
    pub raters: Vec<String>,
    /// `values[item][rater]`.
    pub values: Vec<Vec<Option<f64>>>,
}

impl RaterMatrix {
    /// Builds a matrix with generated labels.
    pub fn from_values(values: Vec<Vec<Option<f64>>>) -> Result<Self, AgreementError> {
        let raters = values.first().map_or(0, Vec::len);
        let m = RaterMatrix {
            items: (1..=values.len()).map(|i| format!("item-{i}")).collect(),
            raters: (1..=raters).map(|j| format!("rater-{j}")).collect(),
            values,
        };
        m.check()?;
        Ok(m)
    }

    /// Shape, scale and rater count.
    pub fn check(&self) -> Result<(), AgreementError> {
        if self.items.len() != self.values.len() {
            return Err(AgreementError::Shape(format!("{} labels for {} rows", self.items.len(), self.values.len())));
        }
        for (i, row) in self.values.iter().enumerate() {
            if row.len() != self.raters.len() {
                return Err(AgreementError::Shape(format!(
                    "row {} has {} ratings for {} raters",
                    i + 1,
                    row.len(),
                    self.raters.len()
                )));
            }
            for v in row.iter().flatten() {
                scale_index(*v)?;
            }
        }
        if self.raters.len() < 2 {
            return Err(AgreementError::TooFewRaters);
        }
        Ok(())
    }

    pub fn column(&self, rater: usize) -> Vec<Option<f64>> {
        self.values.iter().map(|row| row[rater]).collect()
    }

    pub fn rater_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.raters.len();
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaWeighting {
    None,
    Linear,
    Quadratic,
}

impl KappaWeighting {
    /// Agreement weight between two scale indices.
    pub fn weight(self, i: usize, j: usize) -> f64 {
        let d = i.abs_diff(j) as f64 / (SCALE.len() - 1) as f64;
        match self {
            KappaWeighting::None => f64::from(u8::from(i == j)),
            KappaWeighting::Linear => 1.0 - d,
            KappaWeighting::Quadratic => 1.0 - d * d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMetric {
    Nominal,
    Ordinal,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementResult {
    pub statistic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    /// `None` when the statistic is undefined for these data.
    pub value: Option<f64>,
    pub n_items: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AgreementResult {
    pub(crate) fn new(statistic: &str, variant: Option<&str>, value: Option<f64>, n_items: usize) -> Self {
        AgreementResult {
            statistic: statistic.to_string(),
            variant: variant.map(str::to_string),
            value,
            n_items,
            notes: Vec::new(),
        }
    }

    pub fn is_undefined(&self) -> bool {
        self.value.is_none()
    }
}

/// The `stream-agreement/v1` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub schema: String,
    pub raters: Vec<String>,
    pub n_items: usize,
    pub statistics: Vec<AgreementResult>,
    pub digest: Digest,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<crate::grading::ExcludedCell>,
}
