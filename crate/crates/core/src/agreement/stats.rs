use super::{
    disagreement_digest, scale_index, AgreementReport, AgreementResult, AlphaMetric, KappaWeighting, RaterMatrix,
    AGREEMENT_SCHEMA, SCALE,
};
use crate::error::AgreementError;

const NO_VARIATION: &str = "undefined: the grades show no variation";

/// Share of matching grades over every pair of raters who both graded an item.
pub fn percent_agreement(matrix: &RaterMatrix) -> Result<AgreementResult, AgreementError> {
    matrix.check()?;
    let (mut pairs, mut matches, mut items) = (0usize, 0usize, 0usize);
    for row in &matrix.values {
        let rated: Vec<f64> = row.iter().flatten().copied().collect();
        if rated.len() >= 2 {
            items += 1;
        }
        for a in 0..rated.len() {
            for b in a + 1..rated.len() {
                pairs += 1;
                matches += usize::from(rated[a] == rated[b]);
            }
        }
    }
    if pairs == 0 {
        return Err(AgreementError::NoCompletePairs);
    }
    Ok(AgreementResult::new("percent_agreement", None, Some(matches as f64 / pairs as f64), items))
}

fn complete_pairs(a: &[Option<f64>], b: &[Option<f64>]) -> Result<Vec<(usize, usize)>, AgreementError> {
    if a.len() != b.len() {
        return Err(AgreementError::Shape(format!("{} ratings against {}", a.len(), b.len())));
    }
    let mut out = Vec::new();
    for (x, y) in a.iter().zip(b) {
        for v in [x, y].into_iter().flatten() {
            scale_index(*v)?;
        }
        if let (Some(x), Some(y)) = (x, y) {
            out.push((scale_index(*x)?, scale_index(*y)?));
        }
    }
    Ok(out)
}

/// Cohen's kappa for two raters over the fixed three-point scale.
pub fn cohen_kappa(
    a: &[Option<f64>],
    b: &[Option<f64>],
    weighting: KappaWeighting,
) -> Result<AgreementResult, AgreementError> {
    let pairs = complete_pairs(a, b)?;
    if pairs.is_empty() {
        return Err(AgreementError::NoCompletePairs);
    }
    if pairs.len() < 2 {
        return Err(AgreementError::TooFewItems);
    }
    let k = SCALE.len();
    let n = pairs.len() as f64;
    let mut observed = vec![vec![0.0; k]; k];
    let (mut rows, mut cols) = (vec![0.0; k], vec![0.0; k]);
    for &(i, j) in &pairs {
        observed[i][j] += 1.0;
        rows[i] += 1.0;
        cols[j] += 1.0;
    }
    let (mut po, mut pe) = (0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            let w = weighting.weight(i, j);
            po += w * observed[i][j];
            pe += w * rows[i] * cols[j];
        }
    }
    po /= n;
    pe /= n * n;
    let variant = match weighting {
        KappaWeighting::None => "unweighted",
        KappaWeighting::Linear => "linear",
        KappaWeighting::Quadratic => "quadratic",
    };
    let mut result = AgreementResult::new("cohen_kappa", Some(variant), None, pairs.len());
    if (1.0 - pe).abs() < 1e-12 {
        result.notes.push(NO_VARIATION.to_string());
    } else {
        result.value = Some((po - pe) / (1.0 - pe));
    }
    Ok(result)
}

/// Krippendorff's alpha from the coincidence matrix; tolerates missing ratings.
pub fn krippendorff_alpha(matrix: &RaterMatrix, metric: AlphaMetric) -> Result<AgreementResult, AgreementError> {
    matrix.check()?;
    let k = SCALE.len();
    let mut coincidence = vec![vec![0.0; k]; k];
    let mut units = 0;
    for row in &matrix.values {
        let rated: Vec<usize> = row.iter().flatten().map(|v| scale_index(*v)).collect::<Result<_, _>>()?;
        let m = rated.len();
        if m < 2 {
            continue;
        }
        units += 1;
        let w = 1.0 / (m - 1) as f64;
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    coincidence[rated[a]][rated[b]] += w;
                }
            }
        }
    }
    if units < 2 {
        return Err(AgreementError::TooFewItems);
    }
    let marginals: Vec<f64> = coincidence.iter().map(|r| r.iter().sum()).collect();
    let n: f64 = marginals.iter().sum();

    let delta = |c: usize, d: usize| -> f64 {
        match metric {
            AlphaMetric::Nominal => f64::from(u8::from(c != d)),
            AlphaMetric::Interval => (SCALE[c] - SCALE[d]).powi(2),
            AlphaMetric::Ordinal => {
                let (lo, hi) = (c.min(d), c.max(d));
                let s: f64 = marginals[lo..=hi].iter().sum::<f64>() - (marginals[c] + marginals[d]) / 2.0;
                s * s
            }
        }
    };
    let (mut d_o, mut d_e) = (0.0, 0.0);
    for c in 0..k {
        for d in 0..k {
            let dd = delta(c, d);
            d_o += coincidence[c][d] * dd;
            d_e += marginals[c] * marginals[d] * dd;
        }
    }
    d_o /= n;
    d_e /= n * (n - 1.0);
    let variant = match metric {
        AlphaMetric::Nominal => "nominal",
        AlphaMetric::Ordinal => "ordinal",
        AlphaMetric::Interval => "interval",
    };
    let mut result = AgreementResult::new("krippendorff_alpha", Some(variant), None, units);
    if d_e.abs() < 1e-12 {
        result.notes.push(NO_VARIATION.to_string());
    } else {
        result.value = Some(1.0 - d_o / d_e);
    }
    Ok(result)
}

fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            ranks[t] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn spearman_rho(x: &[Option<f64>], y: &[Option<f64>]) -> Result<AgreementResult, AgreementError> {
    let pairs = complete_pairs(x, y)?;
    if pairs.is_empty() {
        return Err(AgreementError::NoCompletePairs);
    }
    if pairs.len() < 2 {
        return Err(AgreementError::TooFewItems);
    }
    let rx = average_ranks(&pairs.iter().map(|p| SCALE[p.0]).collect::<Vec<_>>());
    let ry = average_ranks(&pairs.iter().map(|p| SCALE[p.1]).collect::<Vec<_>>());
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    let mut result = AgreementResult::new("spearman_rho", None, None, pairs.len());
    if sxx == 0.0 || syy == 0.0 {
        result.notes.push(NO_VARIATION.to_string());
    } else {
        result.value = Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0));
    }
    Ok(result)
}

/// Mean of a two-rater statistic over every rater pair.
fn pairwise_mean(
    matrix: &RaterMatrix,
    f: impl Fn(&[Option<f64>], &[Option<f64>]) -> Result<AgreementResult, AgreementError>,
) -> Result<AgreementResult, AgreementError> {
    let pairs = matrix.rater_pairs();
    if pairs.len() == 1 {
        return f(&matrix.column(0), &matrix.column(1));
    }
    let mut defined = Vec::new();
    let mut template = None;
    let mut items = 0;
    for &(a, b) in &pairs {
        match f(&matrix.column(a), &matrix.column(b)) {
            Ok(r) => {
                items = items.max(r.n_items);
                if let Some(v) = r.value {
                    defined.push(v);
                }
                template.get_or_insert(r);
            }
            Err(AgreementError::NoCompletePairs | AgreementError::TooFewItems) => {}
            Err(e) => return Err(e),
        }
    }
    let mut result = template.ok_or(AgreementError::TooFewItems)?;
    result.n_items = items;
    result.notes.clear();
    if defined.is_empty() {
        result.value = None;
        result.notes.push(NO_VARIATION.to_string());
    } else {
        result.value = Some(defined.iter().sum::<f64>() / defined.len() as f64);
        result.notes.push(format!("mean over {} of {} rater pairs", defined.len(), pairs.len()));
    }
    Ok(result)
}

/// Every statistic for one matrix, plus the disagreement digest.
pub fn agreement_summary(
    matrix: &RaterMatrix,
    weighting: KappaWeighting,
    metric: AlphaMetric,
) -> Result<AgreementReport, AgreementError> {
    let statistics = vec![
        percent_agreement(matrix)?,
        pairwise_mean(matrix, |a, b| cohen_kappa(a, b, weighting))?,
        krippendorff_alpha(matrix, metric)?,
        pairwise_mean(matrix, spearman_rho)?,
    ];
    Ok(AgreementReport {
        schema: AGREEMENT_SCHEMA.to_string(),
        raters: matrix.raters.clone(),
        n_items: matrix.items.len(),
        statistics,
        digest: disagreement_digest(matrix)?,
        excluded: Vec::new(),
    })
}
