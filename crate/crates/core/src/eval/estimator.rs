use crate::bril::{bootstrap, bril, brl, BootstrapKind, BootstrapMethod, BrilConfig, BrlOutcome, ModeEstimate};
use crate::depth::{depth_median, DepthKind, DepthMethod, MedianMode};
use crate::error::{Error, Result};
use crate::points::{coordinate_wise_median, coordinate_wise_mode, mean, PointSet};
use crate::rng::RngStream;
use crate::stattests::{NormalityTest, CALIBRATION_STREAM, DEFAULT_ALPHA, DEFAULT_BOOTSTRAP};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Bril,
    Brl,
    Rec,
    Med,
    Max,
    Sup,
    Mean,
    CwMedian,
    CwMode,
}

/// A location estimator named by the `family:method[:param]` grammar:
///
/// * `bril:M`, `brl:M`, `rec:M` with `M` a depth name, `mcd` or `mve`
/// * `med:D`, `max:D`, `sup:D[:fraction]` with `D` a depth name
///   (fraction defaults to 0.1)
/// * `mean`, `cw-median`, `cw-mode[:bin_width]` (bin width defaults to 1)
///
/// Depth names: tukey, oja, liu, spatial, l2, mahalanobis, projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Estimator {
    Bril(BootstrapKind),
    Brl(BootstrapKind),
    Rec(BootstrapKind),
    Med(DepthMethod),
    Max(DepthMethod),
    Sup(DepthMethod, f64),
    Mean,
    CwMedian,
    CwMode(f64),
}

/// Settings shared by all estimators of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorOptions {
    pub alpha: f64,
    pub normality: NormalityTest,
    pub dip_boot: usize,
    pub calibration: RngStream,
    pub trim_fraction: f64,
    pub removal_batch: usize,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            alpha: DEFAULT_ALPHA,
            normality: NormalityTest::Mardia,
            dip_boot: DEFAULT_BOOTSTRAP,
            calibration: CALIBRATION_STREAM,
            trim_fraction: 0.5,
            removal_batch: 1,
        }
    }
}

impl EstimatorOptions {
    pub fn bril_config(&self, kind: BootstrapKind) -> BrilConfig {
        let mut bm = BootstrapMethod::new(kind);
        bm.trim_fraction = self.trim_fraction;
        let mut cfg = BrilConfig::new(bm).with_alpha(self.alpha).with_normality(self.normality);
        cfg.dip_boot = self.dip_boot;
        cfg.calibration = self.calibration;
        cfg.removal_batch = self.removal_batch;
        cfg
    }
}

/// Center plus whatever detail the estimator produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateOutput {
    pub center: Vec<f64>,
    pub mode: Option<ModeEstimate>,
    pub brl: Option<BrlOutcome>,
}

impl EstimateOutput {
    fn plain(center: Vec<f64>) -> Self {
        EstimateOutput {
            center,
            mode: None,
            brl: None,
        }
    }
}

impl Estimator {
    pub fn family(&self) -> Family {
        match self {
            Estimator::Bril(_) => Family::Bril,
            Estimator::Brl(_) => Family::Brl,
            Estimator::Rec(_) => Family::Rec,
            Estimator::Med(_) => Family::Med,
            Estimator::Max(_) => Family::Max,
            Estimator::Sup(..) => Family::Sup,
            Estimator::Mean => Family::Mean,
            Estimator::CwMedian => Family::CwMedian,
            Estimator::CwMode(_) => Family::CwMode,
        }
    }

    pub fn estimate(&self, points: &PointSet, opts: &EstimatorOptions, rng: &RngStream) -> Result<EstimateOutput> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(match *self {
            Estimator::Bril(kind) => {
                let m = bril(points, &opts.bril_config(kind), rng)?;
                EstimateOutput {
                    center: m.center.clone(),
                    mode: Some(m),
                    brl: None,
                }
            }
            Estimator::Brl(kind) => {
                let b = brl(points, &opts.bril_config(kind), rng)?;
                EstimateOutput {
                    center: b.center.clone(),
                    mode: None,
                    brl: Some(b),
                }
            }
            Estimator::Rec(kind) => {
                EstimateOutput::plain(bootstrap(points, &opts.bril_config(kind).bootstrap, rng)?)
            }
            Estimator::Med(m) => EstimateOutput::plain(depth_median(points, m, MedianMode::Med, rng)?),
            Estimator::Max(m) => EstimateOutput::plain(depth_median(points, m, MedianMode::Max, rng)?),
            Estimator::Sup(m, f) => EstimateOutput::plain(depth_median(points, m, MedianMode::Sup(f), rng)?),
            Estimator::Mean => EstimateOutput::plain(mean(points)),
            Estimator::CwMedian => EstimateOutput::plain(coordinate_wise_median(points)),
            Estimator::CwMode(w) => EstimateOutput::plain(coordinate_wise_mode(points, w)?),
        })
    }
}

fn parse_bootstrap(s: &str) -> Result<BootstrapKind> {
    match s {
        "mcd" => Ok(BootstrapKind::Mcd),
        "mve" => Ok(BootstrapKind::Mve),
        other => other.parse::<DepthKind>().map(|k| BootstrapKind::Depth(k.into())).map_err(|_| {
            Error::BadParameter(format!(
                "unknown method '{other}' (expected one of: tukey, oja, liu, spatial, l2, mahalanobis, projection, mcd, mve)"
            ))
        }),
    }
}

fn parse_param(s: &str, what: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite() && *v > 0.0)
        .ok_or_else(|| Error::BadParameter(format!("invalid {what} '{s}'")))
}

impl FromStr for Estimator {
    type Err = Error;
    fn from_str(spec: &str) -> Result<Self> {
        let lower = spec.trim().to_ascii_lowercase();
        let parts: Vec<&str> = lower.split(':').collect();
        let arity = |lo: usize, hi: usize| -> Result<()> {
            if parts.len() < lo || parts.len() > hi {
                Err(Error::BadParameter(format!(
                    "malformed estimator '{spec}' (expected family:method[:param])"
                )))
            } else {
                Ok(())
            }
        };
        let depth = |s: &str| s.parse::<DepthKind>().map(DepthMethod::from);
        match parts[0] {
            "bril" | "brl" | "rec" => {
                arity(2, 2)?;
                let kind = parse_bootstrap(parts[1])?;
                Ok(match parts[0] {
                    "bril" => Estimator::Bril(kind),
                    "brl" => Estimator::Brl(kind),
                    _ => Estimator::Rec(kind),
                })
            }
            "med" => {
                arity(2, 2)?;
                Ok(Estimator::Med(depth(parts[1])?))
            }
            "max" => {
                arity(2, 2)?;
                Ok(Estimator::Max(depth(parts[1])?))
            }
            "sup" => {
                arity(2, 3)?;
                let f = parts.get(2).map_or(Ok(0.1), |p| parse_param(p, "fraction"))?;
                if f > 1.0 {
                    return Err(Error::BadParameter(format!("fraction must lie in (0, 1], got {f}")));
                }
                Ok(Estimator::Sup(depth(parts[1])?, f))
            }
            "mean" => {
                arity(1, 1)?;
                Ok(Estimator::Mean)
            }
            "cw-median" | "med-cw" => {
                arity(1, 1)?;
                Ok(Estimator::CwMedian)
            }
            "cw-mode" => {
                arity(1, 2)?;
                Ok(Estimator::CwMode(
                    parts.get(1).map_or(Ok(1.0), |p| parse_param(p, "bin width"))?,
                ))
            }
            other => Err(Error::BadParameter(format!(
                "unknown estimator family '{other}' (expected one of: bril, brl, rec, med, max, sup, mean, cw-median, cw-mode)"
            ))),
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::Bril(k) => write!(f, "bril:{k}"),
            Estimator::Brl(k) => write!(f, "brl:{k}"),
            Estimator::Rec(k) => write!(f, "rec:{k}"),
            Estimator::Med(m) => write!(f, "med:{m}"),
            Estimator::Max(m) => write!(f, "max:{m}"),
            Estimator::Sup(m, p) => write!(f, "sup:{m}:{p}"),
            Estimator::Mean => f.write_str("mean"),
            Estimator::CwMedian => f.write_str("cw-median"),
            Estimator::CwMode(w) => write!(f, "cw-mode:{w}"),
        }
    }
}
