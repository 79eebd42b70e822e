//! Terminal-exponent estimation: ordinary least squares of
//! `ln(final_edges)` on `ln(n)`, with per-n averaging so every size
//! carries equal weight regardless of how many seeds it ran.

use crate::process::RunSummary;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("fit requires at least 3 distinct n with positive final edge counts, got {0}")]
    TooFewSizes(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerSize {
    pub n: usize,
    pub runs: usize,
    pub mean_ln_edges: f64,
    pub sd_ln_edges: f64,
}

/// Log-log regression output.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Estimated exponent c in `final_edges ≈ C·n^c`.
    pub slope: f64,
    /// `ln C`.
    pub intercept: f64,
    pub r_squared: f64,
    pub per_size: Vec<PerSize>,
    /// Runs dropped because they ended with zero edges (possible only at
    /// tiny n).
    pub excluded_zero_edges: usize,
}

/// Fits the scaling exponent from run summaries.
pub fn fit_exponent(summaries: &[RunSummary]) -> Result<FitResult, FitError> {
    let mut sorted: Vec<&RunSummary> = summaries.iter().collect();
    sorted.sort_by_key(|r| (r.n, r.seed));

    let excluded_zero_edges = sorted.iter().filter(|r| r.final_edges == 0).count();
    sorted.retain(|r| r.final_edges > 0);

    let mut grouped: Vec<(usize, Vec<f64>)> = Vec::new();
    for run in sorted {
        let ln_edges = (run.final_edges as f64).ln();
        match grouped.last_mut() {
            Some((n, vals)) if *n == run.n => vals.push(ln_edges),
            _ => grouped.push((run.n, vec![ln_edges])),
        }
    }
    let per_size: Vec<PerSize> = grouped
        .into_iter()
        .map(|(n, vals)| {
            let k = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / k;
            let sd = if vals.len() > 1 {
                (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            PerSize { n, runs: vals.len(), mean_ln_edges: mean, sd_ln_edges: sd }
        })
        .collect();

    if per_size.len() < 3 {
        return Err(FitError::TooFewSizes(per_size.len()));
    }

    let xs: Vec<f64> = per_size.iter().map(|s| (s.n as f64).ln()).collect();
    let ys: Vec<f64> = per_size.iter().map(|s| s.mean_ln_edges).collect();
    let k = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / k;
    let mean_y = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y) * (y - mean_y)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };

    Ok(FitResult { slope, intercept, r_squared, per_size, excluded_zero_edges })
}
