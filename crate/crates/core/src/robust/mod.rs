//! Robust location and scatter from the h-subset minimizing covariance
//! determinant (MCD) or covering-ellipsoid volume (MVE), and the robust
//! distances they induce.

mod mcd;
mod mve;

pub use mcd::mcd;
pub use mve::mve;

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::points::{subset_mean_cov, IndexSubset, LocationScatter, PointSet};
use crate::rng::RngStream;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinimizerKind {
    Mcd,
    Mve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizerConfig {
    pub kind: MinimizerKind,
    /// Subset size; `None` means `⌈(n + d + 1) / 2⌉`.
    pub h: Option<usize>,
    pub n_starts: usize,
    /// Cap on concentration steps for the refined starts.
    pub max_c_steps: usize,
}

impl MinimizerConfig {
    pub fn new(kind: MinimizerKind) -> Self {
        MinimizerConfig {
            kind,
            h: None,
            n_starts: 500,
            max_c_steps: 50,
        }
    }

    pub fn with_h(mut self, h: usize) -> Self {
        self.h = Some(h);
        self
    }

    pub fn with_starts(mut self, n_starts: usize) -> Self {
        self.n_starts = n_starts;
        self
    }

    /// Resolves and checks the subset size for `n` samples in `d` dimensions.
    pub fn subset_size(&self, n: usize, d: usize) -> Result<usize> {
        if n < d + 2 {
            return Err(Error::InsufficientSamples {
                needed: d + 2,
                got: n,
            });
        }
        if self.n_starts == 0 {
            return Err(Error::BadParameter("n_starts must be at least 1".into()));
        }
        let h = self.h.unwrap_or_else(|| default_h(n, d));
        if h < d + 1 || h > n {
            return Err(Error::BadParameter(format!(
                "subset size {h} outside [{}, {n}]",
                d + 1
            )));
        }
        Ok(h)
    }
}

/// `⌈(n + d + 1) / 2⌉`.
pub fn default_h(n: usize, d: usize) -> usize {
    (n + d + 2) / 2
}

/// Outcome of an h-subset search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerFit {
    /// Mean and unbiased covariance of the selected subset.
    pub estimate: LocationScatter,
    pub subset: IndexSubset,
    /// Covariance determinant (MCD) or covering-ellipsoid volume up to the
    /// unit-ball constant (MVE).
    pub objective: f64,
}

pub fn minimize(points: &PointSet, config: &MinimizerConfig, rng: &RngStream) -> Result<MinimizerFit> {
    match config.kind {
        MinimizerKind::Mcd => mcd(points, config, rng),
        MinimizerKind::Mve => mve(points, config, rng),
    }
}

/// Distances `sqrt((x − T)ᵀ C⁻¹ (x − T))` of every sample.
pub fn robust_distances(points: &PointSet, ls: &LocationScatter) -> Result<Vec<f64>> {
    if ls.location.len() != points.dim() || ls.scatter.dim() != points.dim() {
        return Err(Error::DimensionMismatch {
            expected: points.dim(),
            got: ls.location.len(),
        });
    }
    let chol = Cholesky::new(&ls.scatter)?;
    Ok(squared_distances(points, &ls.location, &chol)
        .into_iter()
        .map(f64::sqrt)
        .collect())
}

pub(crate) fn squared_distances(points: &PointSet, center: &[f64], chol: &Cholesky) -> Vec<f64> {
    let d = points.dim();
    let mut diff = vec![0.0; d];
    points
        .iter()
        .map(|p| {
            for k in 0..d {
                diff[k] = p[k] - center[k];
            }
            chol.quad_form(&diff)
        })
        .collect()
}

/// Keeps about 30 significant bits, so keys equal up to rounding (the
/// elemental points of a start all sit at the same distance) compare equal.
fn coarse(key: f64) -> f64 {
    if key.is_finite() {
        f64::from_bits((key.to_bits() + (1 << 21)) & !((1 << 22) - 1))
    } else {
        key
    }
}

/// The `h` samples with the smallest keys (ties by index), sorted by index.
/// Keys within rounding noise of each other count as ties.
pub(crate) fn smallest_h(keys: &[f64], h: usize) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = keys.iter().map(|&k| coarse(k)).zip(0..).collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if h < order.len() {
        order.select_nth_unstable_by(h - 1, cmp);
    }
    let mut idx: Vec<usize> = order[..h].iter().map(|&(_, i)| i).collect();
    idx.sort_unstable();
    idx
}

/// The `h`-th smallest key.
pub(crate) fn kth_smallest(keys: &[f64], h: usize) -> f64 {
    let mut v = keys.to_vec();
    let (_, kth, _) = v.select_nth_unstable_by(h - 1, f64::total_cmp);
    *kth
}

/// Mean, covariance and factor of a subset, or `None` when its covariance
/// is singular.
pub(crate) fn fit_subset(points: &PointSet, idx: &[usize]) -> Option<(Vec<f64>, Matrix, Cholesky)> {
    let (m, c) = subset_mean_cov(points, idx).ok()?;
    if c.is_singular() {
        return None;
    }
    let f = Cholesky::factor(&c)?;
    Some((m, c, f))
}

/// A random elemental subset of `d + 1` samples for start `start`.
pub(crate) fn elemental(n: usize, d: usize, rng: &RngStream, start: usize) -> Vec<usize> {
    let mut r = rng.derive(start as u64).rng();
    let mut idx = sample(&mut r, n, d + 1).into_vec();
    idx.sort_unstable();
    idx
}

fn full_fit(points: &PointSet) -> Result<(Vec<f64>, Matrix, Cholesky)> {
    let all: Vec<usize> = (0..points.len()).collect();
    fit_subset(points, &all).ok_or(Error::DegenerateData)
}
