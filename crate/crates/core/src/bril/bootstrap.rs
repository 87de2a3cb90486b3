use super::{BootstrapKind, BootstrapMethod};
use crate::depth::DepthModel;
use crate::error::{Error, Result};
use crate::points::{subset_mean, PointSet};
use crate::rng::RngStream;
use crate::robust::{minimize, MinimizerConfig, MinimizerKind};

/// Seed location by recursive trimming.
///
/// Depth variant: keep the deepest `⌈f·m⌉` samples (never fewer than the
/// minimum size; equal depths keep sample order) until the subset is no
/// larger than the minimum size. MCD/MVE variant: replace the subset by its
/// MCD/MVE h-subset with `h = ⌈f·m⌉` until `h` would drop below `d + 1`.
/// Either way the result is the mean of the last subset.
pub fn bootstrap(points: &PointSet, method: &BootstrapMethod, rng: &RngStream) -> Result<Vec<f64>> {
    let d = points.dim();
    method.validate(d)?;
    let n = points.len();
    let min_size = method.min_size_for(d);
    if n < min_size {
        return Err(Error::InsufficientSamples {
            needed: min_size,
            got: n,
        });
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut round = 0u64;
    match method.kind {
        BootstrapKind::Depth(dm) => {
            while current.len() > min_size {
                let m = current.len();
                let keep = ((method.trim_fraction * m as f64).ceil() as usize).max(min_size);
                if keep >= m {
                    break;
                }
                let sub = points.select(&current)?;
                // A subset too degenerate for the depth (singular scatter)
                // ends the recursion at the previous level.
                let Ok(model) = DepthModel::new(&sub, dm, &rng.derive(round)) else {
                    break;
                };
                let mut kept = model.depth_all().deepest(keep);
                kept.sort_unstable();
                current = kept.into_iter().map(|k| current[k]).collect();
                round += 1;
            }
        }
        BootstrapKind::Mcd | BootstrapKind::Mve => {
            let kind = if method.kind == BootstrapKind::Mcd {
                MinimizerKind::Mcd
            } else {
                MinimizerKind::Mve
            };
            loop {
                let m = current.len();
                let h = (method.trim_fraction * m as f64).ceil() as usize;
                if h < d + 1 || m < d + 2 || h >= m {
                    break;
                }
                let sub = points.select(&current)?;
                let cfg = MinimizerConfig::new(kind)
                    .with_h(h)
                    .with_starts(method.minimizer_starts);
                let Ok(fit) = minimize(&sub, &cfg, &rng.derive(round)) else {
                    break;
                };
                current = fit.subset.as_slice().iter().map(|&k| current[k]).collect();
                round += 1;
            }
        }
    }
    subset_mean(points, &current)
}
