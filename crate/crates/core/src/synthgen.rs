//! Labeled Gaussian mixtures with uniform background noise.

use crate::error::{Error, Result};
use crate::points::{euclidean, PointSet};
use crate::rng::RngStream;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixtureConfig {
    pub n_samples: usize,
    pub n_clusters: usize,
    /// Fraction ε of the sample drawn uniformly over the arena.
    pub noise_ratio: f64,
    /// Fraction δ of the clustered samples in the main cluster.
    pub inlier_ratio: f64,
    pub main_sigma: f64,
    /// Secondary cluster σ is drawn uniformly from this range.
    pub secondary_sigma: (f64, f64),
    /// Every coordinate of centers and noise lies in `[arena.0, arena.1]`.
    pub arena: (f64, f64),
    /// Centers `a`, `b` keep at least `separation_factor·(σa + σb)` apart.
    pub separation_factor: f64,
    /// Fixes the main center instead of drawing it.
    pub main_center: Option<Vec<f64>>,
    pub dim: usize,
    pub max_attempts: usize,
}

impl Default for MixtureConfig {
    fn default() -> Self {
        MixtureConfig {
            n_samples: 500,
            n_clusters: 3,
            noise_ratio: 0.0,
            inlier_ratio: 0.5,
            main_sigma: 1.0,
            secondary_sigma: (0.5, 1.5),
            arena: (0.0, 50.0),
            separation_factor: 3.0,
            main_center: None,
            dim: 2,
            max_attempts: 10_000,
        }
    }
}

impl MixtureConfig {
    pub fn new(n_samples: usize, n_clusters: usize, noise_ratio: f64, inlier_ratio: f64) -> Self {
        MixtureConfig {
            n_samples,
            n_clusters,
            noise_ratio,
            inlier_ratio,
            ..Default::default()
        }
    }

    /// A single cluster at the middle of the arena, as used when measuring
    /// bias under uniform noise alone.
    pub fn centered_single(n_samples: usize, noise_ratio: f64) -> Self {
        let mut c = MixtureConfig::new(n_samples, 1, noise_ratio, 1.0);
        c.main_center = Some(vec![25.0; 2]);
        c
    }

    /// Main, per-secondary and noise counts. Counts are rounded to nearest
    /// and noise absorbs the residual; if rounding overshoots `N`, the
    /// secondary clusters give up samples first.
    pub fn cardinalities(&self) -> Result<(usize, Vec<usize>, usize)> {
        self.validate()?;
        let n = self.n_samples as f64;
        let k = self.n_clusters;
        let clustered = n * (1.0 - self.noise_ratio);
        let main = (clustered * self.inlier_ratio).round() as usize;
        let mut secondary = if k > 1 {
            let each = (clustered * (1.0 - self.inlier_ratio) / (k - 1) as f64).round() as usize;
            vec![each; k - 1]
        } else {
            Vec::new()
        };
        if main > self.n_samples {
            return Err(Error::BadParameter("main cluster exceeds the sample size".into()));
        }
        let mut total = main + secondary.iter().sum::<usize>();
        let mut i = 0;
        while total > self.n_samples {
            let j = secondary.len() - 1 - (i % secondary.len());
            secondary[j] -= 1;
            total -= 1;
            i += 1;
        }
        if main == 0 || secondary.iter().any(|&c| c == 0) {
            return Err(Error::BadParameter(format!(
                "cluster cardinalities must be at least 1 (main {main}, secondary {secondary:?})"
            )));
        }
        if secondary.iter().any(|&c| c > main) {
            return Err(Error::BadParameter("main cluster must be the largest".into()));
        }
        Ok((main, secondary, self.n_samples - total))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadParameter(m));
        if self.dim < 2 {
            return bad(format!("dimension must be at least 2, got {}", self.dim));
        }
        if !(1..=5).contains(&self.n_clusters) {
            return bad(format!("cluster count must lie in [1, 5], got {}", self.n_clusters));
        }
        if !(0.0..=0.5).contains(&self.noise_ratio) && !(self.n_clusters == 1 && (0.0..1.0).contains(&self.noise_ratio)) {
            return bad(format!("noise ratio must lie in [0, 0.5], got {}", self.noise_ratio));
        }
        let lo = 1.0 / self.n_clusters as f64;
        if !(self.inlier_ratio >= lo - 1e-12 && self.inlier_ratio <= 1.0) {
            return bad(format!(
                "inlier ratio must lie in [1/K, 1] = [{lo}, 1], got {}",
                self.inlier_ratio
            ));
        }
        let (s0, s1) = self.secondary_sigma;
        if !(self.main_sigma > 0.0 && s0 > 0.0 && s1 >= s0) {
            return bad("cluster sigmas must be positive with a nonempty range".into());
        }
        if !(self.arena.1 > self.arena.0) {
            return bad("arena upper bound must exceed the lower bound".into());
        }
        if !(self.separation_factor >= 0.0) || self.max_attempts == 0 {
            return bad("separation factor must be nonnegative and max_attempts positive".into());
        }
        if let Some(c) = &self.main_center {
            if c.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: c.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Main,
    /// Secondary cluster, numbered from 1.
    Cluster(usize),
    Noise,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Main => f.write_str("main"),
            Label::Cluster(i) => write!(f, "cluster-{i}"),
            Label::Noise => f.write_str("noise"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Label::Main),
            "noise" => Ok(Label::Noise),
            _ => s
                .strip_prefix("cluster-")
                .and_then(|i| i.parse().ok())
                .filter(|&i| i >= 1)
                .map(Label::Cluster)
                .ok_or_else(|| Error::Parse(format!("unknown label '{s}'"))),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureInstance {
    #[serde(with = "rows")]
    pub points: PointSet,
    pub labels: Vec<Label>,
    /// Main center first, then secondary clusters in label order.
    pub true_centers: Vec<Vec<f64>>,
    pub sigmas: Vec<f64>,
    pub config: MixtureConfig,
    pub seed: RngStream,
}

mod rows {
    use crate::points::PointSet;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &PointSet, s: S) -> Result<S::Ok, S::Error> {
        p.to_rows().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PointSet, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        PointSet::new(&rows).map_err(serde::de::Error::custom)
    }
}

impl MixtureInstance {
    pub fn main_center(&self) -> &[f64] {
        &self.true_centers[0]
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// CSV with one column per coordinate (`x,y` in the plane) and `label`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let d = self.points.dim();
        let mut header = coordinate_names(d);
        header.push("label".into());
        w.write_record(&header).map_err(csv_err)?;
        for (p, l) in self.points.iter().zip(&self.labels) {
            let mut rec: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            rec.push(l.to_string());
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub(crate) fn coordinate_names(d: usize) -> Vec<String> {
    if d == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=d).map(|i| format!("x{i}")).collect()
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Draw one mixture: σs, then centers by rejection, then cluster samples in
/// label order, then noise.
pub fn generate(config: &MixtureConfig, rng: &RngStream) -> Result<MixtureInstance> {
    let (main, secondary, noise) = config.cardinalities()?;
    let d = config.dim;
    let k = config.n_clusters;
    let mut r = rng.rng();

    let mut sigmas = vec![config.main_sigma];
    let (s0, s1) = config.secondary_sigma;
    for _ in 1..k {
        sigmas.push(if s1 > s0 { r.random_range(s0..s1) } else { s0 });
    }

    let arena = Uniform::new_inclusive(config.arena.0, config.arena.1)
        .map_err(|e| Error::BadParameter(e.to_string()))?;
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    for c in 0..k {
        if c == 0 {
            if let Some(fixed) = &config.main_center {
                centers.push(fixed.clone());
                continue;
            }
        }
        let mut placed = None;
        for _ in 0..config.max_attempts {
            let cand: Vec<f64> = (0..d).map(|_| arena.sample(&mut r)).collect();
            let ok = centers.iter().enumerate().all(|(j, other)| {
                euclidean(&cand, other) >= config.separation_factor * (sigmas[c] + sigmas[j])
            });
            if ok {
                placed = Some(cand);
                break;
            }
        }
        centers.push(placed.ok_or(Error::PlacementFailed(config.max_attempts))?);
    }

    let mut flat = Vec::with_capacity(config.n_samples * d);
    let mut labels = Vec::with_capacity(config.n_samples);
    let counts = std::iter::once(main).chain(secondary.iter().copied());
    for (c, count) in counts.enumerate() {
        for _ in 0..count {
            for center in &centers[c] {
                let z: f64 = StandardNormal.sample(&mut r);
                flat.push(center + sigmas[c] * z);
            }
            labels.push(if c == 0 { Label::Main } else { Label::Cluster(c) });
        }
    }
    for _ in 0..noise {
        for _ in 0..d {
            flat.push(arena.sample(&mut r));
        }
        labels.push(Label::Noise);
    }

    Ok(MixtureInstance {
        points: PointSet::from_flat(flat, d)?,
        labels,
        true_centers: centers,
        sigmas,
        config: config.clone(),
        seed: *rng,
    })
}
