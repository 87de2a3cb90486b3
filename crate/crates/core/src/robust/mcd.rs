use super::{
    elemental, fit_subset, full_fit, smallest_h, squared_distances, MinimizerConfig, MinimizerFit,
};
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::points::{IndexSubset, LocationScatter, PointSet};
use crate::rng::RngStream;

/// Starts carried from the short concentration phase to full convergence.
const FINALISTS: usize = 10;
/// Concentration steps applied to every start before ranking.
const INITIAL_STEPS: usize = 2;

struct Candidate {
    subset: Vec<usize>,
    mean: Vec<f64>,
    cov: Matrix,
    chol: Cholesky,
    det: f64,
}

/// One concentration step: keep the `h` samples closest to the current fit.
fn c_step(points: &PointSet, c: &Candidate, h: usize) -> Option<Candidate> {
    let d2 = squared_distances(points, &c.mean, &c.chol);
    let subset = smallest_h(&d2, h);
    let (mean, cov, chol) = fit_subset(points, &subset)?;
    let det = chol.det();
    Some(Candidate {
        subset,
        mean,
        cov,
        chol,
        det,
    })
}

fn converge(points: &PointSet, mut c: Candidate, h: usize, max_steps: usize) -> Candidate {
    for _ in 0..max_steps {
        let Some(next) = c_step(points, &c, h) else {
            break;
        };
        debug_assert!(
            next.det <= c.det * (1.0 + 1e-9),
            "concentration increased the determinant: {} -> {}",
            c.det,
            next.det
        );
        let done = next.subset == c.subset || next.det >= c.det;
        if next.det <= c.det {
            c = next;
        }
        if done {
            break;
        }
    }
    c
}

/// Minimum covariance determinant estimate by random elemental starts and
/// concentration steps.
pub fn mcd(points: &PointSet, config: &MinimizerConfig, rng: &RngStream) -> Result<MinimizerFit> {
    let n = points.len();
    let d = points.dim();
    let h = config.subset_size(n, d)?;
    if h == n {
        let (mean, cov, chol) = full_fit(points)?;
        return Ok(MinimizerFit {
            estimate: LocationScatter {
                location: mean,
                scatter: cov,
            },
            subset: IndexSubset::all(n),
            objective: chol.det(),
        });
    }

    let mut pool: Vec<(usize, Candidate)> = Vec::new();
    for start in 0..config.n_starts {
        let idx = elemental(n, d, rng, start);
        let Some((mean, cov, chol)) = fit_subset(points, &idx) else {
            continue;
        };
        let det = chol.det();
        let mut c = Candidate {
            subset: idx,
            mean,
            cov,
            chol,
            det,
        };
        let mut alive = true;
        for step in 0..INITIAL_STEPS {
            match c_step(points, &c, h) {
                Some(next) => {
                    if step > 0 {
                        debug_assert!(next.det <= c.det * (1.0 + 1e-9));
                    }
                    c = next;
                }
                None => {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            pool.push((start, c));
        }
    }
    if pool.is_empty() {
        return Err(Error::DegenerateData);
    }
    pool.sort_by(|a, b| a.1.det.total_cmp(&b.1.det).then(a.0.cmp(&b.0)));
    pool.dedup_by(|a, b| a.1.subset == b.1.subset);
    pool.truncate(FINALISTS);

    let mut best: Option<Candidate> = None;
    for (_, c) in pool {
        let c = converge(points, c, h, config.max_c_steps);
        if best.as_ref().is_none_or(|b| c.det < b.det) {
            best = Some(c);
        }
    }
    let best = best.expect("nonempty pool");
    Ok(MinimizerFit {
        estimate: LocationScatter {
            location: best.mean,
            scatter: best.cov,
        },
        subset: IndexSubset::from_unsorted(best.subset),
        objective: best.det,
    })
}
