use super::{check_alpha, TestKind, TestResult};
use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::points::{mean, scatter_about, PointSet};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MardiaResult {
    /// Statistic `n·b1/6`.
    pub skewness: TestResult,
    /// Standardized kurtosis `z`.
    pub kurtosis: TestResult,
    /// Raw `b1` and `b2` moments.
    pub b1: f64,
    pub b2: f64,
    pub reject_any: bool,
}

/// Mardia's multivariate skewness and kurtosis tests, using the biased
/// (divisor `n`) covariance.
pub fn mardia_test(points: &PointSet, alpha: f64) -> Result<MardiaResult> {
    check_alpha(alpha)?;
    let n = points.len();
    let d = points.dim();
    if n < d + 2 {
        return Err(Error::InsufficientSamples {
            needed: d + 2,
            got: n,
        });
    }
    let m = mean(points);
    let idx: Vec<usize> = (0..n).collect();
    let s = scatter_about(points, &idx, &m, n as f64);
    let chol = Cholesky::new(&s)?;

    // Whitened residuals y_i = L⁻¹ (x_i − x̄), so (x_i−x̄)ᵀS⁻¹(x_j−x̄) = y_i·y_j.
    let mut y = vec![0.0; n * d];
    for (i, p) in points.iter().enumerate() {
        let row = &mut y[i * d..(i + 1) * d];
        for k in 0..d {
            row[k] = p[k] - m[k];
        }
        chol.forward_in_place(row);
    }

    // Σ_ij (y_i·y_j)³ = Σ_abc (Σ_i y_ia y_ib y_ic)².
    let mut b1 = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let t: f64 = y
                    .chunks_exact(d)
                    .map(|r| r[a] * r[b] * r[c])
                    .sum();
                b1 += t * t;
            }
        }
    }
    let nf = n as f64;
    b1 /= nf * nf;
    let b2 = y
        .chunks_exact(d)
        .map(|r| {
            let q: f64 = r.iter().map(|v| v * v).sum();
            q * q
        })
        .sum::<f64>()
        / nf;

    let df = (d * (d + 1) * (d + 2)) as f64 / 6.0;
    let skew_stat = nf * b1 / 6.0;
    let chi = ChiSquared::new(df).expect("positive degrees of freedom");
    let skew_p = chi.sf(skew_stat).clamp(0.0, 1.0);

    let dd = (d * (d + 2)) as f64;
    let z = (b2 - dd) / (8.0 * dd / nf).sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let kurt_p = (2.0 * normal.sf(z.abs())).clamp(0.0, 1.0);

    let skewness = TestResult {
        statistic: skew_stat,
        p_value: skew_p,
        method: TestKind::MardiaSkewness,
    };
    let kurtosis = TestResult {
        statistic: z,
        p_value: kurt_p,
        method: TestKind::MardiaKurtosis,
    };
    Ok(MardiaResult {
        skewness,
        kurtosis,
        b1,
        b2,
        reject_any: skewness.rejects(alpha) || kurtosis.rejects(alpha),
    })
}
