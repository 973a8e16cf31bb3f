//! The lower-envelope statistic `X_n / g(1/log n)` and its running minimum:
//! for a chain whose marginals converge to a class with constant `Lambda`,
//! the path dips down to — but not below — the level `Lambda^{1/rho}`
//! infinitely often, and the statistic makes that observable on a finite
//! window.

use serde::{Deserialize, Serialize};

use crate::class::IedClass;
use crate::error::{IedError, Result};

/// Envelope diagnostics over a window `[n_lo, n_hi]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeReport {
    /// The indices `n` covered (all of `n_lo..=n_hi`).
    pub n_grid: Vec<u64>,
    /// `X_n / g(1/log n)` at each grid index.
    pub statistic: Vec<f64>,
    /// Prefix minimum of the statistic within the window.
    pub running_min: Vec<f64>,
    /// For each requested level, how many window indices dip to or below it.
    pub levels: Vec<f64>,
    pub dip_counts: Vec<u64>,
    /// `Lambda^{1/rho}` for the supplied limit class.
    pub theoretical_level: f64,
}

impl EnvelopeReport {
    /// Minimum of the statistic over the whole window.
    pub fn min_on_window(&self) -> f64 {
        *self.running_min.last().unwrap()
    }
}

/// Build the report for a trajectory `xs`, where `xs[i]` is `X_{i+1}`.
///
/// `class` is the limiting class of the chain (its `lambda` is the limit
/// constant `Lambda`); the scale `g` is its inverse rate function, so for
/// unit `L` the statistic is `(log n)^{1/rho} X_n`.
pub fn envelope_report(
    xs: &[f64],
    class: &IedClass,
    window: (u64, u64),
    levels: &[f64],
) -> Result<EnvelopeReport> {
    let (n_lo, n_hi) = window;
    if n_lo < 3 || n_hi < n_lo {
        return Err(IedError::Argument(format!(
            "window [{n_lo}, {n_hi}] must satisfy 3 <= n_lo <= n_hi"
        )));
    }
    if n_hi as usize > xs.len() {
        return Err(IedError::Argument(format!(
            "window end {n_hi} exceeds trajectory length {}",
            xs.len()
        )));
    }
    if levels.iter().any(|&l| !(l > 0.0)) {
        return Err(IedError::Argument("levels must be positive".into()));
    }
    let len = (n_hi - n_lo + 1) as usize;
    let mut n_grid = Vec::with_capacity(len);
    let mut statistic = Vec::with_capacity(len);
    let mut running_min = Vec::with_capacity(len);
    let mut dip_counts = vec![0u64; levels.len()];
    let mut min = f64::INFINITY;
    for n in n_lo..=n_hi {
        let scale = class.envelope_scale(1.0 / (n as f64).ln())?;
        let s = xs[(n - 1) as usize] / scale;
        min = min.min(s);
        for (j, &level) in levels.iter().enumerate() {
            if s <= level {
                dip_counts[j] += 1;
            }
        }
        n_grid.push(n);
        statistic.push(s);
        running_min.push(min);
    }
    Ok(EnvelopeReport {
        n_grid,
        statistic,
        running_min,
        levels: levels.to_vec(),
        dip_counts,
        theoretical_level: class.lambda().powf(1.0 / class.rho()),
    })
}

/// All window indices whose statistic is at or below `level`.
pub fn dip_indices(report: &EnvelopeReport, level: f64) -> Result<Vec<u64>> {
    if !(level > 0.0) {
        return Err(IedError::Argument(format!("level {level} must be positive")));
    }
    Ok(report
        .n_grid
        .iter()
        .zip(&report.statistic)
        .filter(|(_, &s)| s <= level)
        .map(|(&n, _)| n)
        .collect())
}
