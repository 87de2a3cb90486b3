use super::{TestKind, TestResult};
use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::points::{covariance, mean, PointSet};
use crate::robust::squared_distances;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Kolmogorov survival function `P(K > λ)` for the limiting distribution of
/// `√n·D`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.0 {
        // Jacobi-theta form converges fast for small λ.
        let pi = std::f64::consts::PI;
        let mut cdf = 0.0;
        for k in 1..=20 {
            let m = (2 * k - 1) as f64;
            cdf += (-(m * m) * pi * pi / (8.0 * lambda * lambda)).exp();
        }
        cdf *= (2.0 * pi).sqrt() / lambda;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut sf = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sf += if k % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * sf).clamp(0.0, 1.0)
    }
}

/// One-sample KS test of squared Mahalanobis distances (sample mean and
/// unbiased covariance) against chi-square with `d` degrees of freedom.
pub fn ks_chisq_test(points: &PointSet) -> Result<TestResult> {
    let n = points.len();
    let d = points.dim();
    if n < d + 2 {
        return Err(Error::InsufficientSamples {
            needed: d + 2,
            got: n,
        });
    }
    let chol = Cholesky::new(&covariance(points)?)?;
    let mut d2 = squared_distances(points, &mean(points), &chol);
    d2.sort_by(f64::total_cmp);
    let chi = ChiSquared::new(d as f64).expect("positive degrees of freedom");
    let nf = n as f64;
    let mut stat: f64 = 0.0;
    for (i, v) in d2.iter().enumerate() {
        let f = chi.cdf(*v);
        stat = stat.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    Ok(TestResult {
        statistic: stat,
        p_value: kolmogorov_sf(nf.sqrt() * stat),
        method: TestKind::KsChisq,
    })
}
