use super::{bootstrap, BrilConfig};
use crate::error::{Error, Result};
use crate::points::{euclidean, subset_mean, IndexSubset, LocationScatter, PointSet};
use crate::rng::RngStream;
use crate::robust::{default_h, minimize, robust_distances, MinimizerConfig, MinimizerKind};
use crate::stattests::dip_test_sorted;
use serde::{Deserialize, Serialize};

/// Result of the unimodality filter. Indices are local to its input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnimodalOutcome {
    pub members: IndexSubset,
    /// Dip p-value at each step, in order.
    pub p_trace: Vec<f64>,
    /// The full input already passed.
    pub unimodal_at_start: bool,
    /// Filtering hit the 4-sample floor before the test passed.
    pub degenerate: bool,
}

/// Result of the normality filter. Indices are local to the points given to
/// [`refine_normal`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalOutcome {
    pub members: IndexSubset,
    pub center: Vec<f64>,
    /// Robust re-centering of the unimodal subset.
    pub corrected_center: Vec<f64>,
    /// Smallest normality p-value at each step.
    pub p_trace: Vec<f64>,
    /// Filtering stopped on too few samples or a singular scatter.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrlOutcome {
    pub center: Vec<f64>,
    pub seed: Vec<f64>,
    pub unimodal: UnimodalOutcome,
    pub normal: NormalOutcome,
}

/// Indices ordered by ascending key, equal keys in index order.
fn ascending(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    order
}

/// Drop the samples farthest from `seed` until their distances to it pass
/// the dip test.
pub fn refine_unimodal(points: &PointSet, seed: &[f64], config: &BrilConfig) -> Result<UnimodalOutcome> {
    config.validate(points.dim())?;
    if seed.len() != points.dim() {
        return Err(Error::DimensionMismatch {
            expected: points.dim(),
            got: seed.len(),
        });
    }
    let dist: Vec<f64> = points.iter().map(|p| euclidean(p, seed)).collect();
    let order = ascending(&dist);
    let sorted: Vec<f64> = order.iter().map(|&i| dist[i]).collect();

    let mut m = sorted.len();
    let mut p_trace = Vec::new();
    let mut degenerate = false;
    loop {
        if m < 4 {
            degenerate = true;
            break;
        }
        let p = dip_test_sorted(&sorted[..m], &config.calibration, config.dip_boot).p_value;
        p_trace.push(p);
        if p >= config.dip_alpha {
            break;
        }
        m = m.saturating_sub(config.removal_batch);
    }
    Ok(UnimodalOutcome {
        members: IndexSubset::from_unsorted(order[..m].to_vec()),
        unimodal_at_start: p_trace.first().is_some_and(|&p| p >= config.dip_alpha),
        p_trace,
        degenerate,
    })
}

/// Re-center the unimodal subset with the bootstrap, order it by robust
/// distance under an MCD scatter, and drop the farthest until the normality
/// test passes. The center is the mean of what remains.
pub fn refine_normal(
    points: &PointSet,
    unimodal: &IndexSubset,
    config: &BrilConfig,
    rng: &RngStream,
) -> Result<NormalOutcome> {
    let d = points.dim();
    config.validate(d)?;
    if unimodal.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sub = points.select(unimodal.as_slice())?;
    let m = sub.len();
    let fallback = |corrected: Vec<f64>| -> Result<NormalOutcome> {
        Ok(NormalOutcome {
            members: unimodal.clone(),
            center: subset_mean(points, unimodal.as_slice())?,
            corrected_center: corrected,
            p_trace: Vec::new(),
            degenerate: true,
        })
    };
    let sub_mean = subset_mean(&sub, &(0..m).collect::<Vec<_>>())?;
    if m < d + 2 {
        return fallback(sub_mean);
    }
    let corrected = if m >= config.bootstrap.min_size_for(d) {
        bootstrap(&sub, &config.bootstrap, &rng.derive(1))?
    } else {
        sub_mean
    };
    let mcd_cfg = MinimizerConfig::new(MinimizerKind::Mcd).with_h(default_h(m, d));
    let scatter = match minimize(&sub, &mcd_cfg, &rng.derive(2)) {
        Ok(fit) => fit.estimate.scatter,
        Err(Error::DegenerateData | Error::SingularScatter) => return fallback(corrected),
        Err(e) => return Err(e),
    };
    let ls = LocationScatter {
        location: corrected.clone(),
        scatter,
    };
    let dist = match robust_distances(&sub, &ls) {
        Ok(v) => v,
        Err(Error::SingularScatter) => return fallback(corrected),
        Err(e) => return Err(e),
    };
    let order = ascending(&dist);

    let mut k = m;
    let mut p_trace = Vec::new();
    let mut degenerate = false;
    loop {
        if k < d + 2 {
            degenerate = true;
            break;
        }
        let kept = points.select(&order[..k].iter().map(|&i| unimodal.as_slice()[i]).collect::<Vec<_>>())?;
        match config.normality.evaluate(&kept, config.normal_alpha) {
            Ok((reject, p)) => {
                p_trace.push(p);
                if !reject {
                    break;
                }
            }
            Err(Error::SingularScatter) => {
                degenerate = true;
                break;
            }
            Err(e) => return Err(e),
        }
        k = k.saturating_sub(config.removal_batch);
    }
    // A large removal batch can overshoot the floor.
    let k = k.max(1);
    let local = IndexSubset::from_unsorted(order[..k].to_vec());
    let members = unimodal.compose(&local);
    Ok(NormalOutcome {
        center: subset_mean(points, members.as_slice())?,
        members,
        corrected_center: corrected,
        p_trace,
        degenerate,
    })
}

/// Bootstrap then both refinement filters, without iteration.
pub fn brl(points: &PointSet, config: &BrilConfig, rng: &RngStream) -> Result<BrlOutcome> {
    let d = points.dim();
    config.validate(d)?;
    let needed = config.min_input(d);
    if points.len() < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: points.len(),
        });
    }
    let seed = bootstrap(points, &config.bootstrap, &rng.derive(0))?;
    let unimodal = refine_unimodal(points, &seed, config)?;
    let normal = refine_normal(points, &unimodal.members, config, &rng.derive(1))?;
    Ok(BrlOutcome {
        center: normal.center.clone(),
        seed,
        unimodal,
        normal,
    })
}
