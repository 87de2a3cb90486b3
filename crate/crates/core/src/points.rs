//! Point sets, index subsets and the elementary location/scatter summaries.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use serde::{Deserialize, Serialize};

/// An ordered collection of `n ≥ 1` finite points in `d ≥ 2` dimensions,
/// stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput)?;
        let dim = first.len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_flat(data, dim)
    }

    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadParameter(format!(
                "points must have at least 2 coordinates, got {dim}"
            )));
        }
        if data.is_empty() {
            return Err(Error::EmptyInput);
        }
        if data.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: data.len() % dim,
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos / dim));
        }
        Ok(PointSet { dim, data })
    }

    pub fn from_xy(xy: &[[f64; 2]]) -> Result<Self> {
        Self::from_flat(xy.iter().flatten().copied().collect(), 2)
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    /// Always false for a constructed set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(|p| p.to_vec()).collect()
    }

    /// The points selected by `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<PointSet> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.point(i));
        }
        Ok(PointSet {
            dim: self.dim,
            data,
        })
    }

    /// Applies `f` to every point.
    pub fn map<F: FnMut(&[f64]) -> Vec<f64>>(&self, mut f: F) -> Result<PointSet> {
        let mut data = Vec::with_capacity(self.data.len());
        for p in self.iter() {
            let q = f(p);
            if q.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: q.len(),
                });
            }
            data.extend(q);
        }
        Self::from_flat(data, self.dim)
    }
}

/// Strictly increasing indices into a parent [`PointSet`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    /// Validates that `indices` is strictly increasing and below `n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadParameter(
                "subset indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::BadParameter(format!(
                    "subset index {last} out of range for {n} points"
                )));
            }
        }
        Ok(IndexSubset(indices))
    }

    /// Sorts and deduplicates arbitrary indices.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSubset(indices)
    }

    pub fn all(n: usize) -> Self {
        IndexSubset((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Re-expresses local positions within this subset as parent indices.
    pub fn compose(&self, local: &IndexSubset) -> IndexSubset {
        IndexSubset(local.0.iter().map(|&k| self.0[k]).collect())
    }
}

/// A location estimate paired with a scatter matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationScatter {
    pub location: Vec<f64>,
    pub scatter: Matrix,
}

pub fn mean(points: &PointSet) -> Vec<f64> {
    let d = points.dim();
    let mut m = vec![0.0; d];
    for p in points.iter() {
        for (a, b) in m.iter_mut().zip(p) {
            *a += b;
        }
    }
    let n = points.len() as f64;
    m.iter_mut().for_each(|v| *v /= n);
    m
}

/// Mean of the points at `indices`.
pub fn subset_mean(points: &PointSet, indices: &[usize]) -> Result<Vec<f64>> {
    if indices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = points.dim();
    let mut m = vec![0.0; d];
    for &i in indices {
        for (a, b) in m.iter_mut().zip(points.point(i)) {
            *a += b;
        }
    }
    let n = indices.len() as f64;
    m.iter_mut().for_each(|v| *v /= n);
    Ok(m)
}

/// Scatter about `center` of the points at `indices`, divided by `divisor`.
pub(crate) fn scatter_about(
    points: &PointSet,
    indices: &[usize],
    center: &[f64],
    divisor: f64,
) -> Matrix {
    let d = points.dim();
    let mut s = Matrix::zeros(d);
    let mut diff = [0.0f64; 8];
    let mut diff_v;
    let diff: &mut [f64] = if d <= 8 {
        &mut diff[..d]
    } else {
        diff_v = vec![0.0; d];
        &mut diff_v
    };
    for &i in indices {
        let p = points.point(i);
        for k in 0..d {
            diff[k] = p[k] - center[k];
        }
        for a in 0..d {
            for b in 0..=a {
                s[(a, b)] += diff[a] * diff[b];
            }
        }
    }
    for a in 0..d {
        for b in 0..=a {
            let v = s[(a, b)] / divisor;
            s[(a, b)] = v;
            s[(b, a)] = v;
        }
    }
    s
}

/// Unbiased sample covariance (divisor `n − 1`).
pub fn covariance(points: &PointSet) -> Result<Matrix> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let m = mean(points);
    let idx: Vec<usize> = (0..n).collect();
    Ok(scatter_about(points, &idx, &m, (n - 1) as f64))
}

/// Mean and unbiased covariance of the points at `indices`.
pub fn subset_mean_cov(points: &PointSet, indices: &[usize]) -> Result<(Vec<f64>, Matrix)> {
    let n = indices.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let m = subset_mean(points, indices)?;
    let s = scatter_about(points, indices, &m, (n - 1) as f64);
    Ok((m, s))
}

/// Median of a slice (average of the two central order statistics for even
/// length). Reorders `values`.
pub fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    assert!(n > 0, "median of empty slice");
    let mid = n / 2;
    let (_, hi, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let hi = *hi;
    if n % 2 == 1 {
        hi
    } else {
        let lo = values[..mid]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

pub fn coordinate_wise_median(points: &PointSet) -> Vec<f64> {
    let mut col = Vec::with_capacity(points.len());
    (0..points.dim())
        .map(|k| {
            col.clear();
            col.extend(points.iter().map(|p| p[k]));
            median_in_place(&mut col)
        })
        .collect()
}

/// Per coordinate, the center of the fullest histogram bin. Bins have width
/// `bin_width` and start at the coordinate's minimum; equal counts go to the
/// lowest bin.
pub fn coordinate_wise_mode(points: &PointSet, bin_width: f64) -> Result<Vec<f64>> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::BadParameter(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let mut out = Vec::with_capacity(points.dim());
    for k in 0..points.dim() {
        let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
        let nbins = (((hi - lo) / bin_width).floor() as usize).saturating_add(1);
        if nbins > 10_000_000 {
            return Err(Error::BadParameter(format!(
                "bin width {bin_width} yields too many bins"
            )));
        }
        let mut counts = vec![0usize; nbins];
        for p in points.iter() {
            let b = (((p[k] - lo) / bin_width).floor() as usize).min(nbins - 1);
            counts[b] += 1;
        }
        let mut best = 0;
        for (b, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = b;
            }
        }
        out.push(lo + (best as f64 + 0.5) * bin_width);
    }
    Ok(out)
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
