//! Randomized approximations used above two dimensions (or on request).

use crate::linalg::{determinant, solve_general, Matrix};
use crate::points::PointSet;
use crate::rng::RngStream;
use rand::seq::index::sample;
use rand_distr::{Distribution, StandardNormal};

/// `count` unit vectors drawn uniformly on the sphere, flattened.
pub(crate) fn random_directions(d: usize, count: usize, rng: &RngStream) -> Vec<f64> {
    let mut r = rng.derive(0xD1).rng();
    let mut out = Vec::with_capacity(d * count);
    while out.len() < d * count {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut r)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.extend(v.iter().map(|x| x / norm));
        }
    }
    out
}

/// `count` random index tuples of `size` distinct samples, flattened.
pub(crate) fn random_tuples(n: usize, size: usize, count: usize, rng: &RngStream) -> Vec<usize> {
    let mut r = rng.derive(0x51).rng();
    if n < size {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(size * count);
    for _ in 0..count {
        out.extend(sample(&mut r, n, size));
    }
    out
}

pub(crate) fn halfspace_depth(query: &[f64], points: &PointSet, dirs: &[f64]) -> f64 {
    let d = points.dim();
    let n = points.len();
    let mut best = n;
    for u in dirs.chunks_exact(d) {
        let uq: f64 = u.iter().zip(query).map(|(a, b)| a * b).sum();
        let (mut ge, mut le) = (0, 0);
        for p in points.iter() {
            let up: f64 = u.iter().zip(p).map(|(a, b)| a * b).sum();
            if up >= uq {
                ge += 1;
            }
            if up <= uq {
                le += 1;
            }
        }
        best = best.min(ge).min(le);
    }
    best as f64 / n as f64
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

pub(crate) fn oja_mean_volume(query: &[f64], points: &PointSet, tuples: &[usize]) -> f64 {
    let d = points.dim();
    if tuples.is_empty() {
        return 0.0;
    }
    let mut m = Matrix::zeros(d);
    let mut total = 0.0;
    let count = tuples.len() / d;
    for t in tuples.chunks_exact(d) {
        for (r, &i) in t.iter().enumerate() {
            let p = points.point(i);
            for c in 0..d {
                m[(r, c)] = p[c] - query[c];
            }
        }
        total += determinant(&m).abs();
    }
    total / count as f64 / factorial(d)
}

pub(crate) fn simplicial_depth(query: &[f64], points: &PointSet, tuples: &[usize]) -> f64 {
    let d = points.dim();
    if tuples.is_empty() {
        return if points.iter().any(|p| p == query) { 1.0 } else { 0.0 };
    }
    let mut m = Matrix::zeros(d);
    let mut hits = 0usize;
    let count = tuples.len() / (d + 1);
    for t in tuples.chunks_exact(d + 1) {
        let base = points.point(t[0]);
        // Columns are edge vectors from the first vertex.
        for (c, &i) in t[1..].iter().enumerate() {
            let p = points.point(i);
            for r in 0..d {
                m[(r, c)] = p[r] - base[r];
            }
        }
        let rhs: Vec<f64> = query.iter().zip(base).map(|(a, b)| a - b).collect();
        if let Some(lambda) = solve_general(&m, &rhs) {
            let tol = 1e-12;
            let sum: f64 = lambda.iter().sum();
            if lambda.iter().all(|l| *l >= -tol) && sum <= 1.0 + tol {
                hits += 1;
            }
        }
    }
    hits as f64 / count as f64
}
