use super::{
    elemental, fit_subset, full_fit, kth_smallest, smallest_h, squared_distances, MinimizerConfig,
    MinimizerFit,
};
use crate::error::{Error, Result};
use crate::points::{IndexSubset, LocationScatter, PointSet};
use crate::rng::RngStream;

/// Minimum volume ellipsoid by elemental resampling: each random `d + 1`
/// subset defines an ellipsoid shape, inflated until it covers `h` samples;
/// the smallest such ellipsoid wins. The estimate is the mean and covariance
/// of the covered samples.
pub fn mve(points: &PointSet, config: &MinimizerConfig, rng: &RngStream) -> Result<MinimizerFit> {
    let n = points.len();
    let d = points.dim();
    let h = config.subset_size(n, d)?;
    if h == n {
        let (mean, cov, chol) = full_fit(points)?;
        let d2 = squared_distances(points, &mean, &chol);
        let r2 = d2.iter().copied().fold(0.0, f64::max);
        return Ok(MinimizerFit {
            estimate: LocationScatter {
                location: mean,
                scatter: cov,
            },
            subset: IndexSubset::all(n),
            objective: chol.det().sqrt() * r2.powf(d as f64 / 2.0),
        });
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    for start in 0..config.n_starts {
        let idx = elemental(n, d, rng, start);
        let Some((mean, _, chol)) = fit_subset(points, &idx) else {
            continue;
        };
        let d2 = squared_distances(points, &mean, &chol);
        let r2 = kth_smallest(&d2, h);
        let volume = chol.det().sqrt() * r2.powf(d as f64 / 2.0);
        if !(volume > 0.0) {
            continue;
        }
        if best.as_ref().is_none_or(|(v, _)| volume < *v) {
            best = Some((volume, smallest_h(&d2, h)));
        }
    }
    let (volume, subset) = best.ok_or(Error::DegenerateData)?;
    let (mean, cov, _) = fit_subset(points, &subset).ok_or(Error::DegenerateData)?;
    Ok(MinimizerFit {
        estimate: LocationScatter {
            location: mean,
            scatter: cov,
        },
        subset: IndexSubset::from_unsorted(subset),
        objective: volume,
    })
}
