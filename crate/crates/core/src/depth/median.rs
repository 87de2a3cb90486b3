//! Depth-based location estimates: the global depth maximizer (Med), the
//! deepest sample (Max) and the deepest sample within the deepest fraction
//! (Sup).

use super::{DepthMethod, DepthModel, Scratch};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::rng::RngStream;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MedianMode {
    /// Maximize depth over the whole space.
    Med,
    /// The deepest sample.
    Max,
    /// The deepest sample after restricting to the given fraction of deepest
    /// samples and recomputing depth there.
    Sup(f64),
}

/// Nodes per axis of the coarse grid in two dimensions.
const COARSE_2D: usize = 64;
/// Total node budget of the coarse grid in other dimensions.
const COARSE_BUDGET: f64 = 4096.0;
/// Nodes per axis of each refinement window.
const FINE: usize = 16;
const REFINEMENTS: usize = 2;
/// Coarse nodes used as starting points, besides the deepest sample.
const COARSE_STARTS: usize = 3;

pub fn depth_median(
    points: &PointSet,
    method: DepthMethod,
    mode: MedianMode,
    rng: &RngStream,
) -> Result<Vec<f64>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: n });
    }
    match mode {
        MedianMode::Max => {
            let dv = DepthModel::new(points, method, rng)?.depth_all();
            Ok(points.point(dv.argmax()).to_vec())
        }
        MedianMode::Sup(frac) => {
            if !(frac > 0.0 && frac <= 1.0) {
                return Err(Error::BadParameter(format!(
                    "sup fraction must lie in (0, 1], got {frac}"
                )));
            }
            let dv = DepthModel::new(points, method, rng)?.depth_all();
            let k = ((frac * n as f64).ceil() as usize).clamp(1, n);
            let mut top = dv.deepest(k);
            top.sort_unstable();
            let sub = points.select(&top)?;
            let inner = DepthModel::new(&sub, method, &rng.derive(1))?.depth_all();
            Ok(sub.point(inner.argmax()).to_vec())
        }
        MedianMode::Med => grid_maximizer(points, method, rng),
    }
}

struct Window {
    center: Vec<f64>,
    half: Vec<f64>,
}

/// Evaluates a regular grid of `per_axis` nodes per axis spanning
/// `center ± half`; returns node coordinates with their depth.
fn evaluate_grid(
    model: &DepthModel<'_>,
    w: &Window,
    per_axis: usize,
    scratch: &mut Scratch,
) -> Vec<(Vec<f64>, f64)> {
    let d = w.center.len();
    let total = per_axis.pow(d as u32);
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let q: Vec<f64> = (0..d)
            .map(|k| {
                if per_axis == 1 || w.half[k] == 0.0 {
                    w.center[k]
                } else {
                    w.center[k] - w.half[k] + 2.0 * w.half[k] * idx[k] as f64 / (per_axis - 1) as f64
                }
            })
            .collect();
        let v = model.depth_with(&q, scratch);
        out.push((q, v));
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

/// Most window doublings spent chasing a plateau that reaches the window
/// edge.
const PLATEAU_EXPANSIONS: usize = 6;

fn on_edge(k: usize, per_axis: usize, d: usize) -> bool {
    let mut k = k;
    for _ in 0..d {
        let i = k % per_axis;
        if i == 0 || i == per_axis - 1 {
            return true;
        }
        k /= per_axis;
    }
    false
}

fn plateau(nodes: &[(Vec<f64>, f64)]) -> (f64, Vec<usize>) {
    let top = nodes
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let members = (0..nodes.len()).filter(|&k| nodes[k].1 == top).collect();
    (top, members)
}

fn centroid(nodes: &[(Vec<f64>, f64)], members: &[usize]) -> Vec<f64> {
    let d = nodes[members[0]].0.len();
    let mut c = vec![0.0; d];
    for &k in members {
        for j in 0..d {
            c[j] += nodes[k].0[j];
        }
    }
    c.iter_mut().for_each(|v| *v /= members.len() as f64);
    c
}

fn refine(
    model: &DepthModel<'_>,
    start: Vec<f64>,
    cell: Vec<f64>,
    scratch: &mut Scratch,
) -> (f64, Vec<f64>) {
    let d = start.len();
    let mut w = Window {
        center: start,
        half: cell,
    };
    let mut nodes = Vec::new();
    for level in 0..REFINEMENTS {
        nodes = evaluate_grid(model, &w, FINE, scratch);
        if level + 1 < REFINEMENTS {
            w.center = nodes[best_node(&nodes)].0.clone();
            w.half = w.half.iter().map(|h| 2.0 * h / (FINE - 1) as f64).collect();
        }
    }
    // Piecewise-constant depths (halfspace, simplicial) peak on a plateau;
    // report its centroid, growing the window while the plateau reaches the
    // window edge.
    let (mut top, mut members) = plateau(&nodes);
    for _ in 0..PLATEAU_EXPANSIONS {
        if !members.iter().any(|&k| on_edge(k, FINE, d)) {
            break;
        }
        w.center = centroid(&nodes, &members);
        w.half = w.half.iter().map(|h| 2.0 * h).collect();
        nodes = evaluate_grid(model, &w, FINE, scratch);
        let (t, m) = plateau(&nodes);
        top = t;
        members = m;
    }
    (top, centroid(&nodes, &members))
}

fn best_node(nodes: &[(Vec<f64>, f64)]) -> usize {
    let mut best = 0;
    for (i, (_, v)) in nodes.iter().enumerate() {
        if *v > nodes[best].1 {
            best = i;
        }
    }
    best
}

fn grid_maximizer(points: &PointSet, method: DepthMethod, rng: &RngStream) -> Result<Vec<f64>> {
    let d = points.dim();
    let model = DepthModel::new(points, method, rng)?;
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points.iter() {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let per_axis = if d == 2 {
        COARSE_2D
    } else {
        (COARSE_BUDGET.powf(1.0 / d as f64).floor() as usize).max(4)
    };
    let coarse = Window {
        center: lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect(),
        half: lo.iter().zip(&hi).map(|(a, b)| 0.5 * (b - a)).collect(),
    };
    let cell: Vec<f64> = coarse
        .half
        .iter()
        .map(|h| 2.0 * h / (per_axis - 1) as f64)
        .collect();
    let mut scratch = Scratch::default();
    let nodes = evaluate_grid(&model, &coarse, per_axis, &mut scratch);

    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[b].1.total_cmp(&nodes[a].1).then(a.cmp(&b)));
    let mut starts: Vec<Vec<f64>> = order
        .iter()
        .take(COARSE_STARTS)
        .map(|&i| nodes[i].0.clone())
        .collect();
    let deepest = model.depth_all().argmax();
    starts.push(points.point(deepest).to_vec());

    let mut best: Option<(f64, Vec<f64>)> = None;
    for s in starts {
        let (v, c) = refine(&model, s, cell.clone(), &mut scratch);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, c));
        }
    }
    let (v, c) = best.expect("at least one start");
    // A plateau already visible on the coarse grid is wider than the
    // refinement windows; its coarse centroid is the better summary.
    let on_plateau: Vec<usize> = (0..nodes.len()).filter(|&k| nodes[k].1 == v).collect();
    if on_plateau.len() >= 2 {
        return Ok(centroid(&nodes, &on_plateau));
    }
    Ok(c)
}
