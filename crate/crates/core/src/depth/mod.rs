//! Data depth functions and the depth-based medians.
//!
//! Every method is oriented so that a larger value means a more central
//! point. In the plane, halfspace (Tukey), simplicial (Liu) and Oja depth are
//! exact, computed from a single angular sort around the query. Projection
//! depth uses a fixed direction set. In higher dimensions halfspace,
//! simplicial and Oja depth are approximated with random directions or random
//! simplices drawn from the supplied [`RngStream`].

mod general;
mod median;
pub mod planar;

pub use median::{depth_median, MedianMode};

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::points::{covariance, mean, median_in_place, PointSet};
use crate::rng::RngStream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Projection depth adds pairwise data directions when the sample is at most
/// this large.
pub const PAIR_DIRECTION_LIMIT: usize = 40;
pub const DEFAULT_DIRECTIONS: usize = 180;
/// Simplices drawn per query when simplicial or Oja depth is subsampled.
pub const DEFAULT_SUBSAMPLE: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthKind {
    Tukey,
    Oja,
    Liu,
    Spatial,
    L2,
    Mahalanobis,
    Projection,
}

impl DepthKind {
    pub const ALL: [DepthKind; 7] = [
        DepthKind::Tukey,
        DepthKind::Oja,
        DepthKind::Liu,
        DepthKind::Spatial,
        DepthKind::L2,
        DepthKind::Mahalanobis,
        DepthKind::Projection,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DepthKind::Tukey => "tukey",
            DepthKind::Oja => "oja",
            DepthKind::Liu => "liu",
            DepthKind::Spatial => "spatial",
            DepthKind::L2 => "l2",
            DepthKind::Mahalanobis => "mahalanobis",
            DepthKind::Projection => "projection",
        }
    }
}

impl fmt::Display for DepthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DepthKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tukey" | "halfspace" => Ok(DepthKind::Tukey),
            "oja" => Ok(DepthKind::Oja),
            "liu" | "simplicial" => Ok(DepthKind::Liu),
            "spatial" => Ok(DepthKind::Spatial),
            "l2" => Ok(DepthKind::L2),
            "mahalanobis" => Ok(DepthKind::Mahalanobis),
            "projection" => Ok(DepthKind::Projection),
            other => Err(Error::BadParameter(format!(
                "unknown depth method '{other}' (expected one of: tukey, oja, liu, simplicial, spatial, l2, mahalanobis, projection)"
            ))),
        }
    }
}

/// A depth function together with its approximation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthMethod {
    pub kind: DepthKind,
    /// Direction count for projection depth (and halfspace depth above two
    /// dimensions).
    pub directions: usize,
    /// When set, simplicial and Oja depth average over this many random
    /// simplices instead of all of them.
    pub subsample: Option<usize>,
}

impl DepthMethod {
    pub fn new(kind: DepthKind) -> Self {
        DepthMethod {
            kind,
            directions: DEFAULT_DIRECTIONS,
            subsample: None,
        }
    }

    pub fn with_directions(mut self, directions: usize) -> Self {
        self.directions = directions;
        self
    }

    pub fn with_subsample(mut self, count: usize) -> Self {
        self.subsample = Some(count);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.directions < 8 {
            return Err(Error::BadParameter(format!(
                "direction count must be at least 8, got {}",
                self.directions
            )));
        }
        if let Some(s) = self.subsample {
            if s < 100 {
                return Err(Error::BadParameter(format!(
                    "simplex subsample count must be at least 100, got {s}"
                )));
            }
        }
        Ok(())
    }
}

impl From<DepthKind> for DepthMethod {
    fn from(kind: DepthKind) -> Self {
        DepthMethod::new(kind)
    }
}

impl fmt::Display for DepthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// Depth of every sample, aligned with the input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthVector {
    pub values: Vec<f64>,
    pub method: DepthMethod,
}

impl DepthVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the largest value; ties go to the smallest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Indices of the `k` deepest samples, deepest first; equal depths keep
    /// sample order.
    pub fn deepest(&self, k: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]).then(a.cmp(&b)));
        order.truncate(k);
        order
    }
}

enum State {
    /// A single sample: depth 1 on it, 0 elsewhere.
    Single,
    Planar,
    Spatial,
    /// `1 / (1 + q)` (Mahalanobis) or `1 / (1 + sqrt(q))` (L2) with `q` the
    /// squared scaled distance to `center`.
    Scaled {
        center: Vec<f64>,
        chol: Cholesky,
        root: bool,
    },
    Projection {
        dirs: Vec<f64>,
        med: Vec<f64>,
        mad: Vec<f64>,
    },
    Halfspace {
        dirs: Vec<f64>,
    },
    Simplices {
        tuples: Vec<usize>,
    },
}

/// Reusable per-thread buffers.
#[derive(Default)]
pub struct Scratch {
    angles: Vec<[f64; 2]>,
}

/// A depth function bound to a reference sample, with any per-sample
/// preprocessing (covariance factor, projection medians, random directions)
/// done once.
pub struct DepthModel<'a> {
    points: &'a PointSet,
    method: DepthMethod,
    state: State,
}

impl<'a> DepthModel<'a> {
    pub fn new(points: &'a PointSet, method: DepthMethod, rng: &RngStream) -> Result<Self> {
        method.validate()?;
        let n = points.len();
        let d = points.dim();
        let state = if n == 1 {
            State::Single
        } else {
            match method.kind {
                DepthKind::Tukey | DepthKind::Oja | DepthKind::Liu
                    if d == 2 && (method.kind == DepthKind::Tukey || method.subsample.is_none()) =>
                {
                    State::Planar
                }
                DepthKind::Tukey => State::Halfspace {
                    dirs: general::random_directions(d, method.directions, rng),
                },
                DepthKind::Oja => State::Simplices {
                    tuples: general::random_tuples(
                        n,
                        d,
                        method.subsample.unwrap_or(DEFAULT_SUBSAMPLE),
                        rng,
                    ),
                },
                DepthKind::Liu => State::Simplices {
                    tuples: general::random_tuples(
                        n,
                        d + 1,
                        method.subsample.unwrap_or(DEFAULT_SUBSAMPLE),
                        rng,
                    ),
                },
                DepthKind::Spatial => State::Spatial,
                DepthKind::Mahalanobis => State::Scaled {
                    center: mean(points),
                    chol: Cholesky::new(&covariance(points)?)?,
                    root: false,
                },
                DepthKind::L2 => State::Scaled {
                    center: spatial_median(points),
                    chol: Cholesky::new(&covariance(points)?)?,
                    root: true,
                },
                DepthKind::Projection => {
                    let dirs = projection_directions(points, method.directions, rng);
                    let (med, mad) = projection_profile(points, &dirs);
                    State::Projection { dirs, med, mad }
                }
            }
        };
        Ok(DepthModel {
            points,
            method,
            state,
        })
    }

    pub fn method(&self) -> DepthMethod {
        self.method
    }

    pub fn points(&self) -> &PointSet {
        self.points
    }

    pub fn depth(&self, query: &[f64]) -> f64 {
        self.depth_with(query, &mut Scratch::default())
    }

    pub fn depth_with(&self, query: &[f64], scratch: &mut Scratch) -> f64 {
        let pts = self.points;
        let flat = pts.as_flat();
        match &self.state {
            State::Single => {
                if query == pts.point(0) {
                    1.0
                } else {
                    0.0
                }
            }
            State::Planar => match self.method.kind {
                DepthKind::Tukey => planar::tukey(query, flat, &mut scratch.angles),
                DepthKind::Liu => planar::simplicial(query, flat, &mut scratch.angles),
                _ => 1.0 / (1.0 + planar::oja_mean_area(query, flat, &mut scratch.angles)),
            },
            State::Spatial => spatial_depth(query, pts),
            State::Scaled { center, chol, root } => {
                let diff: Vec<f64> = query.iter().zip(center).map(|(a, b)| a - b).collect();
                let q = chol.quad_form(&diff);
                if *root {
                    1.0 / (1.0 + q.sqrt())
                } else {
                    1.0 / (1.0 + q)
                }
            }
            State::Projection { dirs, med, mad } => {
                let d = pts.dim();
                let mut out: f64 = 0.0;
                for (k, u) in dirs.chunks_exact(d).enumerate() {
                    let proj: f64 = u.iter().zip(query).map(|(a, b)| a * b).sum();
                    let dev = (proj - med[k]).abs();
                    if mad[k] == 0.0 {
                        if dev > 0.0 {
                            return 0.0;
                        }
                    } else {
                        out = out.max(dev / mad[k]);
                    }
                }
                1.0 / (1.0 + out)
            }
            State::Halfspace { dirs } => general::halfspace_depth(query, pts, dirs),
            State::Simplices { tuples } => match self.method.kind {
                DepthKind::Oja => 1.0 / (1.0 + general::oja_mean_volume(query, pts, tuples)),
                _ => general::simplicial_depth(query, pts, tuples),
            },
        }
    }

    /// Depth of each sample of the reference set.
    pub fn depth_all(&self) -> DepthVector {
        let n = self.points.len();
        let values: Vec<f64> = (0..n)
            .into_par_iter()
            .with_min_len(32)
            .map_init(Scratch::default, |s, i| {
                self.depth_with(self.points.point(i), s)
            })
            .collect();
        DepthVector {
            values,
            method: self.method,
        }
    }
}

pub fn depth_at(
    query: &[f64],
    points: &PointSet,
    method: DepthMethod,
    rng: &RngStream,
) -> Result<f64> {
    if query.len() != points.dim() {
        return Err(Error::DimensionMismatch {
            expected: points.dim(),
            got: query.len(),
        });
    }
    Ok(DepthModel::new(points, method, rng)?.depth(query))
}

pub fn depth_all(points: &PointSet, method: DepthMethod, rng: &RngStream) -> Result<DepthVector> {
    Ok(DepthModel::new(points, method, rng)?.depth_all())
}

fn spatial_depth(query: &[f64], points: &PointSet) -> f64 {
    let d = points.dim();
    let mut acc = vec![0.0; d];
    for p in points.iter() {
        let mut norm = 0.0;
        for k in 0..d {
            norm += (p[k] - query[k]) * (p[k] - query[k]);
        }
        if norm > 0.0 {
            let inv = 1.0 / norm.sqrt();
            for k in 0..d {
                acc[k] += (p[k] - query[k]) * inv;
            }
        }
    }
    let n = points.len() as f64;
    let len = acc.iter().map(|v| v * v).sum::<f64>().sqrt() / n;
    (1.0 - len).max(0.0)
}

/// Spatial (L1) median by the Weiszfeld iteration with the Vardi–Zhang
/// modification for iterates landing on a sample.
pub fn spatial_median(points: &PointSet) -> Vec<f64> {
    let d = points.dim();
    let mut y = mean(points);
    let scale = points
        .iter()
        .map(|p| crate::points::euclidean(p, &y))
        .fold(0.0, f64::max)
        .max(1e-300);
    for _ in 0..1000 {
        let mut num = vec![0.0; d];
        let mut den = 0.0;
        let mut pull = vec![0.0; d];
        let mut coincide = 0usize;
        for p in points.iter() {
            let dist = crate::points::euclidean(p, &y);
            if dist == 0.0 {
                coincide += 1;
                continue;
            }
            let w = 1.0 / dist;
            den += w;
            for k in 0..d {
                num[k] += w * p[k];
                pull[k] += w * (p[k] - y[k]);
            }
        }
        if den == 0.0 {
            break;
        }
        let t: Vec<f64> = num.iter().map(|v| v / den).collect();
        let next = if coincide == 0 {
            t
        } else {
            let r = pull.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r <= coincide as f64 {
                // The sample under the iterate is the median.
                break;
            }
            let a = coincide as f64 / r;
            t.iter().zip(&y).map(|(ti, yi)| (1.0 - a) * ti + a * yi).collect()
        };
        let step = crate::points::euclidean(&next, &y);
        y = next;
        if step <= 1e-12 * scale {
            break;
        }
    }
    y
}

fn projection_directions(points: &PointSet, count: usize, rng: &RngStream) -> Vec<f64> {
    let d = points.dim();
    let n = points.len();
    let mut dirs = if d == 2 {
        (0..count)
            .flat_map(|k| {
                let t = std::f64::consts::PI * k as f64 / count as f64;
                [t.cos(), t.sin()]
            })
            .collect()
    } else {
        general::random_directions(d, count, rng)
    };
    if n <= PAIR_DIRECTION_LIMIT {
        for i in 0..n {
            for j in (i + 1)..n {
                let diff: Vec<f64> = points
                    .point(j)
                    .iter()
                    .zip(points.point(i))
                    .map(|(a, b)| a - b)
                    .collect();
                let norm = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    continue;
                }
                dirs.extend(diff.iter().map(|v| v / norm));
                if d == 2 {
                    dirs.extend([-diff[1] / norm, diff[0] / norm]);
                }
            }
        }
    }
    dirs
}

/// Median and MAD of the sample projected on each direction.
fn projection_profile(points: &PointSet, dirs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let d = points.dim();
    let mut proj = Vec::with_capacity(points.len());
    let mut med = Vec::new();
    let mut mad = Vec::new();
    for u in dirs.chunks_exact(d) {
        proj.clear();
        proj.extend(points.iter().map(|p| u.iter().zip(p).map(|(a, b)| a * b).sum::<f64>()));
        let m = median_in_place(&mut proj);
        proj.iter_mut().for_each(|v| *v = (*v - m).abs());
        med.push(m);
        mad.push(median_in_place(&mut proj));
    }
    (med, mad)
}
