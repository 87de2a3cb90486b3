//! Bootstrap, refine and iterate: a mode locator for contaminated mixtures.
//!
//! 1. *Bootstrap*: a seed location from recursive trimming, either by depth
//!    (keep the deepest fraction, repeat) or by nested MCD/MVE h-subsets.
//! 2. *Refine*: order samples by distance to the seed and drop the farthest
//!    until the distances pass a dip test, then re-center, order by robust
//!    distance and drop the farthest until a normality test passes. The mean
//!    of the survivors is the BRL estimate.
//! 3. *Iterate*: remove each refined group and repeat on the rest. The answer
//!    is the center of the largest group, ignoring the final one.

mod bootstrap;
mod iterate;
mod refine;

pub use bootstrap::bootstrap;
pub use iterate::{bril, GroupRecord, IterationDiagnostics, ModeEstimate};
pub use refine::{brl, refine_normal, refine_unimodal, BrlOutcome, NormalOutcome, UnimodalOutcome};

use crate::depth::DepthMethod;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stattests::{NormalityTest, CALIBRATION_STREAM, DEFAULT_ALPHA, DEFAULT_BOOTSTRAP};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BootstrapKind {
    Depth(DepthMethod),
    Mcd,
    Mve,
}

impl fmt::Display for BootstrapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BootstrapKind::Depth(m) => write!(f, "{m}"),
            BootstrapKind::Mcd => f.write_str("mcd"),
            BootstrapKind::Mve => f.write_str("mve"),
        }
    }
}

/// How the seed location is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapMethod {
    pub kind: BootstrapKind,
    /// Fraction kept at each trimming round.
    pub trim_fraction: f64,
    /// Depth trimming stops at this size; `None` means `max(d + 2, 4)`.
    pub min_size: Option<usize>,
    /// Random starts for MCD/MVE rounds.
    pub minimizer_starts: usize,
}

impl BootstrapMethod {
    pub fn new(kind: BootstrapKind) -> Self {
        BootstrapMethod {
            kind,
            trim_fraction: 0.5,
            min_size: None,
            minimizer_starts: 500,
        }
    }

    pub fn depth(method: impl Into<DepthMethod>) -> Self {
        Self::new(BootstrapKind::Depth(method.into()))
    }

    pub fn min_size_for(&self, d: usize) -> usize {
        self.min_size.unwrap_or((d + 2).max(4))
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if !(self.trim_fraction > 0.0 && self.trim_fraction < 1.0) {
            return Err(Error::BadParameter(format!(
                "trim fraction must lie in (0, 1), got {}",
                self.trim_fraction
            )));
        }
        if self.min_size_for(d) < d + 1 {
            return Err(Error::BadParameter(format!(
                "minimum size must be at least {}, got {}",
                d + 1,
                self.min_size_for(d)
            )));
        }
        if self.minimizer_starts == 0 {
            return Err(Error::BadParameter("minimizer_starts must be at least 1".into()));
        }
        if let BootstrapKind::Depth(m) = self.kind {
            m.validate()?;
        }
        Ok(())
    }
}

/// Settings shared by the refine and iterate stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrilConfig {
    pub bootstrap: BootstrapMethod,
    pub normality: NormalityTest,
    /// Significance level of the dip test.
    pub dip_alpha: f64,
    /// Significance level of the normality test.
    pub normal_alpha: f64,
    /// Uniform samples per dip calibration table.
    pub dip_boot: usize,
    /// Stream seeding the dip calibration tables; sharing it across runs
    /// lets the tables be reused.
    pub calibration: RngStream,
    /// Samples dropped per filtering step. One reproduces the reference
    /// procedure; larger values trade fidelity for speed.
    pub removal_batch: usize,
}

impl BrilConfig {
    pub fn new(bootstrap: BootstrapMethod) -> Self {
        BrilConfig {
            bootstrap,
            normality: NormalityTest::Mardia,
            dip_alpha: DEFAULT_ALPHA,
            normal_alpha: DEFAULT_ALPHA,
            dip_boot: DEFAULT_BOOTSTRAP,
            calibration: CALIBRATION_STREAM,
            removal_batch: 1,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.dip_alpha = alpha;
        self.normal_alpha = alpha;
        self
    }

    pub fn with_normality(mut self, test: NormalityTest) -> Self {
        self.normality = test;
        self
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        self.bootstrap.validate(d)?;
        crate::stattests::check_alpha(self.dip_alpha)?;
        crate::stattests::check_alpha(self.normal_alpha)?;
        if self.dip_boot == 0 || self.removal_batch == 0 {
            return Err(Error::BadParameter(
                "dip_boot and removal_batch must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Smallest sample count the full pipeline accepts.
    pub fn min_input(&self, d: usize) -> usize {
        self.bootstrap.min_size_for(d).max(d + 2)
    }
}
