//! Error metrics, Monte-Carlo benchmark grids and the real-calibration
//! protocol.

mod benchmark;
mod estimator;
mod real;

pub use benchmark::{benchmark_grid, write_csv, write_json, BenchmarkConfig, CellResult, Grid, GridCell};
pub use estimator::{EstimateOutput, Estimator, EstimatorOptions, Family};
pub use real::{read_calibration, read_truth, real_eval, CalibrationSample, RealEvalConfig, RealEvalRow};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An estimate is a hit when its error is strictly below this (main-cluster
/// σ units).
pub const HIT_THRESHOLD: f64 = 3.0;

/// Euclidean distance between an estimate and the truth.
pub fn error(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: estimate.len(),
        });
    }
    Ok(crate::points::euclidean(estimate, truth))
}

pub fn is_hit(error: f64, threshold: f64) -> bool {
    error < threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub mean_error: f64,
    /// Sample standard deviation of the errors (0 for a single run).
    pub sd: f64,
    pub sse: f64,
    pub hit_rate: f64,
    pub miss_rate: f64,
    pub n_reps: usize,
    /// NaN when there are no hits.
    pub hits_only_mean_error: f64,
    pub hits_only_sse: f64,
    /// Runs whose estimator failed; they enter as infinite errors.
    pub failures: usize,
}

/// Summary of a set of errors. Infinite errors mark failed runs.
pub fn aggregate(errors: &[f64], threshold: f64) -> Result<RunMetrics> {
    if errors.is_empty() {
        return Err(Error::EmptyInput);
    }
    if errors.iter().any(|e| e.is_nan() || *e < 0.0) {
        return Err(Error::BadParameter("errors must be nonnegative".into()));
    }
    let n = errors.len() as f64;
    // Fixed summation order keeps results independent of the input order
    // up to rounding; sorting makes them exactly so.
    let mut sorted = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n;
    let sse: f64 = sorted.iter().map(|e| e * e).sum();
    let sd = if sorted.len() > 1 {
        if mean.is_finite() {
            (sorted.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            f64::INFINITY
        }
    } else {
        0.0
    };
    let hits: Vec<f64> = sorted.iter().copied().filter(|&e| is_hit(e, threshold)).collect();
    let hit_rate = hits.len() as f64 / n;
    let hits_only_mean_error = if hits.is_empty() {
        f64::NAN
    } else {
        hits.iter().sum::<f64>() / hits.len() as f64
    };
    Ok(RunMetrics {
        mean_error: mean,
        sd,
        sse,
        hit_rate,
        miss_rate: 1.0 - hit_rate,
        n_reps: errors.len(),
        hits_only_mean_error,
        hits_only_sse: hits.iter().map(|e| e * e).sum(),
        failures: errors.iter().filter(|e| e.is_infinite()).count(),
    })
}
