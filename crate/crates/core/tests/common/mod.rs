//! Brute-force reference implementations shared by the integration tests and
//! the acceptance runner. Nothing here calls into the library's own depth,
//! scatter or test code.

#![allow(dead_code)]

pub mod props;

use modeloc::depth::{depth_at, DepthKind, DepthMethod};
use modeloc::robust::{default_h, mcd, mve, MinimizerConfig, MinimizerKind};
use modeloc::stattests::{dip_statistic, mardia_test};
use modeloc::{PointSet, RngStream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Outcome of one oracle comparison campaign.
#[derive(Debug)]
pub struct Suite {
    pub name: &'static str,
    pub matched: usize,
    pub total: usize,
    pub worst: String,
}

impl Suite {
    pub fn rate(&self) -> f64 {
        self.matched as f64 / self.total as f64
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_xy(r: &mut ChaCha8Rng, n: usize, center: [f64; 2], sigma: f64) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let a: f64 = StandardNormal.sample(r);
            let b: f64 = StandardNormal.sample(r);
            [center[0] + sigma * a, center[1] + sigma * b]
        })
        .collect()
}

/// Small integer coordinates: plenty of collinear triples and repeats.
pub fn lattice_xy(r: &mut ChaCha8Rng, n: usize, span: i32) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| [r.random_range(0..=span) as f64, r.random_range(0..=span) as f64])
        .collect()
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

// ---------------------------------------------------------------- depth

/// Halfspace depth: every closed halfplane bounded by a line through the
/// query is one of the arcs between consecutive critical directions, so
/// checking one direction inside each arc is exhaustive.
pub fn tukey_oracle(q: [f64; 2], pts: &[[f64; 2]]) -> f64 {
    let mut crit = Vec::new();
    for p in pts {
        let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
        if dx != 0.0 || dy != 0.0 {
            let a = dy.atan2(dx);
            for s in [0.5, -0.5] {
                crit.push((a + s * std::f64::consts::PI).rem_euclid(std::f64::consts::TAU));
            }
        }
    }
    if crit.is_empty() {
        return 1.0;
    }
    crit.sort_by(f64::total_cmp);
    crit.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let mut best = usize::MAX;
    for i in 0..crit.len() {
        let lo = crit[i];
        let hi = if i + 1 < crit.len() {
            crit[i + 1]
        } else {
            crit[0] + std::f64::consts::TAU
        };
        let mid = 0.5 * (lo + hi);
        let u = [mid.cos(), mid.sin()];
        let count = pts
            .iter()
            .filter(|p| (p[0] - q[0]) * u[0] + (p[1] - q[1]) * u[1] >= 0.0)
            .count();
        best = best.min(count);
    }
    best as f64 / pts.len() as f64
}

fn in_closed_triangle(q: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let abc = cross(a, b, c);
    if abc == 0.0 {
        // Degenerate: the closed hull is a segment or a point.
        if cross(a, b, q) != 0.0 || cross(b, c, q) != 0.0 || cross(a, c, q) != 0.0 {
            return false;
        }
        let lo_x = a[0].min(b[0]).min(c[0]);
        let hi_x = a[0].max(b[0]).max(c[0]);
        let lo_y = a[1].min(b[1]).min(c[1]);
        let hi_y = a[1].max(b[1]).max(c[1]);
        return q[0] >= lo_x && q[0] <= hi_x && q[1] >= lo_y && q[1] <= hi_y;
    }
    let s = [cross(a, b, q), cross(b, c, q), cross(c, a, q)];
    s.iter().all(|v| *v >= 0.0) || s.iter().all(|v| *v <= 0.0)
}

/// Simplicial depth by enumerating all sample triangles.
pub fn liu_oracle(q: [f64; 2], pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    let (mut inside, mut total) = (0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                total += 1;
                if in_closed_triangle(q, pts[i], pts[j], pts[k]) {
                    inside += 1;
                }
            }
        }
    }
    inside as f64 / total as f64
}

/// Oja depth by enumerating all sample pairs.
pub fn oja_oracle(q: [f64; 2], pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    let mut sum = 0.0;
    let mut pairs = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += 0.5 * cross(q, pts[i], pts[j]).abs();
            pairs += 1.0;
        }
    }
    1.0 / (1.0 + sum / pairs)
}

/// Compares the three exact planar depths with their enumerations on random
/// continuous and lattice data, querying every sample and some extra points.
pub fn depth_suite(kind: DepthKind, trials: u64) -> Suite {
    let mut matched = 0;
    let mut total = 0;
    let mut worst = String::new();
    let mut worst_gap = -1.0;
    for t in 0..trials {
        let mut r = rng(1000 + t);
        let n = 3 + (t as usize % 10);
        let pts = if t % 2 == 0 {
            gaussian_xy(&mut r, n, [0.0, 0.0], 2.0)
        } else {
            lattice_xy(&mut r, n, 4)
        };
        let set = PointSet::from_xy(&pts).unwrap();
        let mut queries = pts.clone();
        queries.push([0.5, 0.5]);
        queries.push([2.0, 2.0]);
        queries.push([r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)]);
        for q in queries {
            let got = depth_at(&q, &set, DepthMethod::new(kind), &RngStream::new(t, 0)).unwrap();
            let want = match kind {
                DepthKind::Tukey => tukey_oracle(q, &pts),
                DepthKind::Liu => liu_oracle(q, &pts),
                DepthKind::Oja => oja_oracle(q, &pts),
                _ => unreachable!("no enumeration oracle for {kind}"),
            };
            let gap = if kind == DepthKind::Oja {
                (got - want).abs() / want.abs().max(1e-300)
            } else {
                (got - want).abs()
            };
            let ok = if kind == DepthKind::Oja { gap <= 1e-12 } else { got == want };
            total += 1;
            if ok {
                matched += 1;
            }
            if gap > worst_gap {
                worst_gap = gap;
                worst = format!("trial {t} query {q:?}: got {got}, oracle {want}");
            }
        }
    }
    Suite {
        name: match kind {
            DepthKind::Tukey => "tukey",
            DepthKind::Liu => "liu",
            _ => "oja",
        },
        matched,
        total,
        worst,
    }
}

// ---------------------------------------------------------------- scatter

fn cov_det(pts: &[[f64; 2]], idx: &[usize]) -> f64 {
    let m = idx.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &i in idx {
        sx += pts[i][0];
        sy += pts[i][1];
    }
    let (mx, my) = (sx / m, sy / m);
    let (mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0);
    for &i in idx {
        let (a, b) = (pts[i][0] - mx, pts[i][1] - my);
        xx += a * a;
        yy += b * b;
        xy += a * b;
    }
    (xx * yy - xy * xy) / ((m - 1.0) * (m - 1.0))
}

/// Calls `f` with every increasing k-combination of `0..n`.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The h-subset of smallest covariance determinant, by enumeration.
pub fn mcd_oracle(pts: &[[f64; 2]], h: usize) -> (Vec<usize>, f64) {
    let mut best = (Vec::new(), f64::INFINITY);
    for_each_combination(pts.len(), h, |idx| {
        let det = cov_det(pts, idx);
        if det < best.1 {
            best = (idx.to_vec(), det);
        }
    });
    best
}

/// Contaminated planar sample of size 10..=15.
pub fn contaminated(seed: u64) -> Vec<[f64; 2]> {
    let mut r = rng(seed);
    let n = 10 + (seed as usize % 6);
    let bad = n / 3;
    let mut pts = gaussian_xy(&mut r, n - bad, [0.0, 0.0], 1.0);
    for _ in 0..bad {
        pts.push([r.random_range(-8.0..8.0), r.random_range(-8.0..8.0)]);
    }
    pts
}

pub fn mcd_suite(seeds: u64) -> Suite {
    let mut matched = 0;
    let mut worst = String::new();
    for s in 0..seeds {
        let pts = contaminated(s);
        let h = default_h(pts.len(), 2);
        let (want, det) = mcd_oracle(&pts, h);
        let set = PointSet::from_xy(&pts).unwrap();
        let fit = mcd(&set, &MinimizerConfig::new(MinimizerKind::Mcd), &RngStream::new(s, 7)).unwrap();
        if fit.subset.as_slice() == want.as_slice() {
            matched += 1;
        } else if worst.is_empty() {
            worst = format!("seed {s}: got {:?} (det {}), oracle {want:?} (det {det})", fit.subset.as_slice(), fit.objective);
        }
    }
    Suite {
        name: "mcd",
        matched,
        total: seeds as usize,
        worst,
    }
}

/// Area-proportional volume of the minimum enclosing ellipse (Khachiyan).
pub fn enclosing_ellipse_volume(pts: &[[f64; 2]]) -> f64 {
    let m = pts.len();
    let mut u = vec![1.0 / m as f64; m];
    for _ in 0..100_000 {
        // X = Σ u_j q_j q_jᵀ with q_j = (x, y, 1).
        let mut x = [[0.0; 3]; 3];
        for (p, w) in pts.iter().zip(&u) {
            let q = [p[0], p[1], 1.0];
            for a in 0..3 {
                for b in 0..3 {
                    x[a][b] += w * q[a] * q[b];
                }
            }
        }
        let inv = inverse3(x);
        let (mut jmax, mut mmax) = (0, f64::MIN);
        for (j, p) in pts.iter().enumerate() {
            let q = [p[0], p[1], 1.0];
            let mut v = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    v += q[a] * inv[a][b] * q[b];
                }
            }
            if v > mmax {
                mmax = v;
                jmax = j;
            }
        }
        let step = (mmax - 3.0) / (3.0 * (mmax - 1.0));
        if step < 1e-10 {
            break;
        }
        for w in u.iter_mut() {
            *w *= 1.0 - step;
        }
        u[jmax] += step;
    }
    let c = pts.iter().zip(&u).fold([0.0, 0.0], |acc, (p, w)| [acc[0] + w * p[0], acc[1] + w * p[1]]);
    let (mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0);
    for (p, w) in pts.iter().zip(&u) {
        xx += w * (p[0] - c[0]) * (p[0] - c[0]);
        yy += w * (p[1] - c[1]) * (p[1] - c[1]);
        xy += w * (p[0] - c[0]) * (p[1] - c[1]);
    }
    // Shape matrix is (2Σ)⁻¹ scaled; the area is π·sqrt(det(2Σ)).
    (4.0 * (xx * yy - xy * xy)).max(0.0).sqrt()
}

fn inverse3(a: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
        }
    }
    inv
}

/// The h-subset whose minimum enclosing ellipse is smallest, by enumeration.
pub fn mve_oracle(pts: &[[f64; 2]], h: usize) -> Vec<usize> {
    let mut best = (Vec::new(), f64::INFINITY);
    for_each_combination(pts.len(), h, |idx| {
        let sub: Vec<[f64; 2]> = idx.iter().map(|&i| pts[i]).collect();
        let v = enclosing_ellipse_volume(&sub);
        if v < best.1 {
            best = (idx.to_vec(), v);
        }
    });
    best.0
}

pub fn planted_cluster() -> Vec<[f64; 2]> {
    vec![
        [0.2, 0.1],
        [1.1, 0.3],
        [0.0, 1.2],
        [1.0, 0.9],
        [0.6, 0.5],
        [0.5, -0.2],
        [9.0, 11.0],
        [-8.5, 9.5],
        [12.0, -6.0],
        [-10.0, -9.0],
    ]
}

pub fn mve_planted_matches() -> (Vec<usize>, Vec<usize>) {
    let pts = planted_cluster();
    let want = mve_oracle(&pts, 6);
    let set = PointSet::from_xy(&pts).unwrap();
    let fit = mve(&set, &MinimizerConfig::new(MinimizerKind::Mve).with_h(6), &RngStream::new(3, 0)).unwrap();
    (fit.subset.as_slice().to_vec(), want)
}

// ---------------------------------------------------------------- mardia

/// Mardia moments straight from the textbook double sums, with a closed-form
/// 2×2 inverse of the biased covariance.
pub fn mardia_oracle(pts: &[[f64; 2]]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let sxx = pts.iter().map(|p| (p[0] - mx).powi(2)).sum::<f64>() / n;
    let syy = pts.iter().map(|p| (p[1] - my).powi(2)).sum::<f64>() / n;
    let sxy = pts.iter().map(|p| (p[0] - mx) * (p[1] - my)).sum::<f64>() / n;
    let det = sxx * syy - sxy * sxy;
    let (ixx, iyy, ixy) = (syy / det, sxx / det, -sxy / det);
    let g = |a: &[f64; 2], b: &[f64; 2]| {
        let (ax, ay) = (a[0] - mx, a[1] - my);
        let (bx, by) = (b[0] - mx, b[1] - my);
        ax * (ixx * bx + ixy * by) + ay * (ixy * bx + iyy * by)
    };
    let mut b1 = 0.0;
    for a in pts {
        for b in pts {
            b1 += g(a, b).powi(3);
        }
    }
    b1 /= n * n;
    let b2 = pts.iter().map(|a| g(a, a).powi(2)).sum::<f64>() / n;
    (b1, b2)
}

pub fn mardia_suite(trials: u64) -> Suite {
    let mut matched = 0;
    let mut worst = String::new();
    let mut worst_gap = -1.0;
    for t in 0..trials {
        let mut r = rng(5000 + t);
        let n = 6 + (t as usize % 20);
        let mut pts = gaussian_xy(&mut r, n, [3.0, -1.0], 1.5);
        for p in pts.iter_mut().take(n / 4) {
            p[0] = p[0].powi(3) * 0.2;
        }
        let (b1, b2) = mardia_oracle(&pts);
        let nf = n as f64;
        let skew_stat = nf * b1 / 6.0;
        let kurt_z = (b2 - 8.0) / (64.0 / nf).sqrt();
        // Chi-square with 4 degrees of freedom: sf(x) = e^(−x/2)(1 + x/2).
        let skew_p = (-skew_stat / 2.0).exp() * (1.0 + skew_stat / 2.0);
        let got = mardia_test(&PointSet::from_xy(&pts).unwrap(), 0.05).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-12);
        let gap = rel(got.b1, b1)
            .max(rel(got.b2, b2))
            .max(rel(got.skewness.statistic, skew_stat))
            .max((got.kurtosis.statistic - kurt_z).abs())
            .max((got.skewness.p_value - skew_p).abs());
        if gap <= 1e-10 {
            matched += 1;
        }
        if gap > worst_gap {
            worst_gap = gap;
            worst = format!("trial {t}: largest discrepancy {gap:.3e}");
        }
    }
    Suite {
        name: "mardia",
        matched,
        total: trials as usize,
        worst,
    }
}

// ---------------------------------------------------------------- dip

/// Minimizes `cᵀx` subject to `Ax ≤ b`, `x ≥ 0`. Dense two-phase simplex
/// with Bland's rule; `None` when infeasible or unbounded.
pub fn lp_minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<f64> {
    const EPS: f64 = 1e-11;
    let (m, nv) = (a.len(), c.len());
    let arts: Vec<usize> = (0..m).filter(|&i| b[i] < 0.0).collect();
    let cols = nv + m + arts.len();
    let mut t = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nv {
            t[i][j] = s * a[i][j];
        }
        t[i][nv + i] = s;
        t[i][cols] = s * b[i];
        basis[i] = nv + i;
    }
    for (k, &i) in arts.iter().enumerate() {
        t[i][nv + m + k] = 1.0;
        basis[i] = nv + m + k;
    }

    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, cost: &[f64], allowed: usize| -> Option<()> {
        loop {
            let reduced = |j: usize| cost[j] - (0..m).map(|i| cost[basis[i]] * t[i][j]).sum::<f64>();
            let Some(enter) = (0..allowed).find(|&j| !basis.contains(&j) && reduced(j) < -EPS) else {
                return Some(());
            };
            let mut leave: Option<usize> = None;
            for i in 0..m {
                if t[i][enter] > EPS {
                    let r = t[i][cols] / t[i][enter];
                    leave = match leave {
                        None => Some(i),
                        Some(l) => {
                            let rl = t[l][cols] / t[l][enter];
                            if r < rl - EPS || (r <= rl + EPS && basis[i] < basis[l]) {
                                Some(i)
                            } else {
                                Some(l)
                            }
                        }
                    };
                }
            }
            let l = leave?;
            pivot(t, l, enter);
            basis[l] = enter;
        }
    };

    let mut phase1 = vec![0.0; cols];
    for k in 0..arts.len() {
        phase1[nv + m + k] = 1.0;
    }
    run(&mut t, &mut basis, &phase1, cols)?;
    let infeas: f64 = (0..m).filter(|&i| basis[i] >= nv + m).map(|i| t[i][cols]).sum();
    if infeas > 1e-9 {
        return None;
    }
    for i in 0..m {
        if basis[i] >= nv + m {
            if let Some(j) = (0..nv + m).find(|&j| t[i][j].abs() > EPS && !basis.contains(&j)) {
                pivot(&mut t, i, j);
                basis[i] = j;
            }
        }
    }
    let mut phase2 = vec![0.0; cols];
    phase2[..nv].copy_from_slice(c);
    run(&mut t, &mut basis, &phase2, nv + m)?;
    Some((0..m).map(|i| phase2[basis[i]] * t[i][cols]).sum())
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pr = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i != row && r[col] != 0.0 {
            let f = r[col];
            for (v, w) in r.iter_mut().zip(&pr) {
                *v -= f * w;
            }
        }
    }
}

/// Dip of sorted, distinct values straight from its definition: the
/// smallest sup-distance between the empirical CDF and a CDF that is convex
/// up to a mode and concave after it. The best unimodal fit can be taken
/// piecewise linear between samples with its mode on a sample, where it may
/// jump, so each mode position is one linear program over the fitted values
/// at the samples (left limit and value at the mode).
pub fn dip_oracle(x: &[f64]) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let mut best = f64::INFINITY;
    for k in 0..n {
        // Variable 0 is the distance; then the left chain (samples 0..k and
        // the left limit at the mode); then the right chain (value at the
        // mode and samples k+1..n).
        let left: Vec<usize> = (1..=k + 1).collect();
        let right: Vec<usize> = (k + 2..k + 2 + n - k).collect();
        let nv = n + 2;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut rhs: Vec<f64> = Vec::new();
        let mut add = |terms: &[(usize, f64)], b: f64| {
            let mut row = vec![0.0; nv];
            for &(v, w) in terms {
                row[v] += w;
            }
            rows.push(row);
            rhs.push(b);
        };
        let within = |add: &mut dyn FnMut(&[(usize, f64)], f64), v: usize, level: f64| {
            add(&[(v, 1.0), (0, -1.0)], level);
            add(&[(v, -1.0), (0, -1.0)], -level);
        };
        for i in 0..k {
            within(&mut add, left[i], i as f64 / nf);
            within(&mut add, left[i], (i + 1) as f64 / nf);
        }
        within(&mut add, left[k], k as f64 / nf);
        within(&mut add, right[0], (k + 1) as f64 / nf);
        for (j, i) in (k + 1..n).enumerate() {
            within(&mut add, right[j + 1], i as f64 / nf);
            within(&mut add, right[j + 1], (i + 1) as f64 / nf);
        }
        for v in 0..nv {
            add(&[(v, 1.0)], 1.0);
        }
        add(&[(left[k], 1.0), (right[0], -1.0)], 0.0);
        for chain in [&left, &right] {
            for w in chain.windows(2) {
                add(&[(w[0], 1.0), (w[1], -1.0)], 0.0);
            }
        }
        // sign·(slope(v0, v1) − slope(v1, v2)) ≤ 0: convex left, concave right.
        for (vars, xs, sign) in [(&left, &x[..=k], 1.0), (&right, &x[k..], -1.0)] {
            for i in 0..vars.len().saturating_sub(2) {
                let a = 1.0 / (xs[i + 1] - xs[i]);
                let b = 1.0 / (xs[i + 2] - xs[i + 1]);
                add(
                    &[(vars[i + 1], sign * (a + b)), (vars[i], -sign * a), (vars[i + 2], -sign * b)],
                    0.0,
                );
            }
        }
        let mut c = vec![0.0; nv];
        c[0] = 1.0;
        if let Some(v) = lp_minimize(&c, &rows, &rhs) {
            best = best.min(v);
        }
    }
    best
}

pub fn dip_suite(trials: u64) -> Suite {
    let mut matched = 0;
    let mut worst = String::new();
    let mut worst_gap = -1.0;
    for t in 0..trials {
        let mut r = rng(9000 + t);
        let n = 4 + (t as usize % 5);
        let mut x: Vec<f64> = (0..n)
            .map(|i| {
                let base: f64 = r.random_range(0.0..1.0);
                if t % 3 == 0 && i % 2 == 0 {
                    base + 5.0
                } else {
                    base
                }
            })
            .collect();
        x.sort_by(f64::total_cmp);
        let want = dip_oracle(&x);
        let got = dip_statistic(&x).unwrap();
        let gap = (got - want).abs();
        if gap <= 1e-9 {
            matched += 1;
        }
        if gap > worst_gap {
            worst_gap = gap;
            worst = format!("trial {t} {x:?}: got {got}, oracle {want}");
        }
    }
    Suite {
        name: "dip",
        matched,
        total: trials as usize,
        worst,
    }
}
