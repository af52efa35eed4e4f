use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::AnalyticsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Ordinary least squares. One point, or all x equal, gives slope 0 through the mean y.
pub fn fit_ols(points: &[(f64, f64)]) -> Result<Line, AnalyticsError> {
    if points.is_empty() {
        return Err(AnalyticsError::EmptyInput);
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Ok(Line { slope: 0.0, intercept: my });
    }
    let slope = sxy / sxx;
    Ok(Line { slope, intercept: my - slope * mx })
}

/// Predicted count for the session after the last one, clamped at 0.
pub fn predict_severity(counts: &[(u32, f64)]) -> Result<f64, AnalyticsError> {
    let points: Vec<(f64, f64)> = counts.iter().map(|&(i, c)| (i as f64, c)).collect();
    let line = fit_ols(&points)?;
    let last = counts.iter().map(|c| c.0).max().expect("non-empty");
    Ok(line.at(last as f64 + 1.0).max(0.0))
}

/// What ranking looks at for one issue row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankKey {
    pub key: String,
    pub severity: f64,
    pub total: u32,
    /// Latest session index with a non-zero count, 0 if none.
    pub latest: u32,
}

/// Grammar and vocabulary rows: severity, total, recency, key.
pub fn severity_order(a: &RankKey, b: &RankKey) -> Ordering {
    b.severity.total_cmp(&a.severity).then(b.total.cmp(&a.total)).then(b.latest.cmp(&a.latest)).then(a.key.cmp(&b.key))
}

/// Filler rows: total, recency, key.
pub fn frequency_order(a: &RankKey, b: &RankKey) -> Ordering {
    b.total.cmp(&a.total).then(b.latest.cmp(&a.latest)).then(a.key.cmp(&b.key))
}

/// Sorts rows best first; `by_frequency` selects the filler ordering.
pub fn rank_issues<T>(rows: &mut [T], key: impl Fn(&T) -> &RankKey, by_frequency: bool) {
    let order = if by_frequency { frequency_order } else { severity_order };
    rows.sort_by(|a, b| order(key(a), key(b)));
}
