//! Unimodality (dip) and multivariate normality (Mardia, KS against the
//! chi-square law of squared Mahalanobis distances) tests.

mod dip;
mod ks;
mod mardia;

pub use dip::{dip_statistic, dip_test, reference_table, CALIBRATION_STREAM, DEFAULT_BOOTSTRAP};
pub(crate) use dip::dip_test_sorted;
pub use ks::{kolmogorov_sf, ks_chisq_test};
pub use mardia::{mardia_test, MardiaResult};

use crate::error::{Error, Result};
use crate::points::PointSet;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    Dip,
    MardiaSkewness,
    MardiaKurtosis,
    KsChisq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub method: TestKind,
}

impl TestResult {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Normality filter used while refining a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalityTest {
    /// Rejects when either the skewness or the kurtosis test rejects.
    Mardia,
    KsChisq,
}

impl NormalityTest {
    /// Whether the test rejects normality at `alpha`, with the smallest
    /// p-value involved.
    pub fn evaluate(&self, points: &PointSet, alpha: f64) -> Result<(bool, f64)> {
        match self {
            NormalityTest::Mardia => {
                let m = mardia_test(points, alpha)?;
                Ok((m.reject_any, m.skewness.p_value.min(m.kurtosis.p_value)))
            }
            NormalityTest::KsChisq => {
                let t = ks_chisq_test(points)?;
                Ok((t.rejects(alpha), t.p_value))
            }
        }
    }
}

impl fmt::Display for NormalityTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalityTest::Mardia => "mardia",
            NormalityTest::KsChisq => "ks-chisq",
        })
    }
}

impl FromStr for NormalityTest {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mardia" => Ok(NormalityTest::Mardia),
            "ks" | "ks-chisq" | "kschisq" => Ok(NormalityTest::KsChisq),
            other => Err(Error::BadParameter(format!(
                "unknown normality test '{other}' (expected mardia or ks-chisq)"
            ))),
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::BadParameter(format!(
            "significance level must lie in (0, 1), got {alpha}"
        )))
    }
}
