//! Property checks shared by the proptest suite and the acceptance runner.
//! Each returns `Err` with a description of the first violation.

#![allow(dead_code)]

use modeloc::bril::{bril, BootstrapMethod, BrilConfig};
use modeloc::depth::{depth_all, depth_median, DepthKind, DepthMethod, MedianMode};
use modeloc::eval::{aggregate, is_hit};
use modeloc::robust::{mcd, MinimizerConfig, MinimizerKind};
use modeloc::stattests::{dip_test, ks_chisq_test, mardia_test, CALIBRATION_STREAM};
use modeloc::synthgen::{generate, MixtureConfig};
use modeloc::{PointSet, RngStream};

pub type Check = Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `x ↦ A x + t`.
pub fn affine(points: &PointSet, a: [[f64; 2]; 2], t: [f64; 2]) -> PointSet {
    points
        .map(|p| {
            vec![
                a[0][0] * p[0] + a[0][1] * p[1] + t[0],
                a[1][0] * p[0] + a[1][1] * p[1] + t[1],
            ]
        })
        .unwrap()
}

pub fn rotation(degrees: f64, scale: f64) -> [[f64; 2]; 2] {
    let (s, c) = degrees.to_radians().sin_cos();
    [[scale * c, -scale * s], [scale * s, scale * c]]
}

pub fn mixture(n: usize, k: usize, seed: u64) -> PointSet {
    let mut cfg = MixtureConfig::new(n, k, 0.1, if k == 1 { 1.0 } else { 0.6 });
    cfg.separation_factor = 2.0;
    generate(&cfg, &RngStream::new(seed, 0)).unwrap().points
}

fn config(kind: DepthKind) -> BrilConfig {
    let mut c = BrilConfig::new(BootstrapMethod::depth(DepthMethod::new(kind)));
    c.dip_boot = 500;
    c
}

/// BRIL groups are disjoint, together with the unassigned samples they
/// cover every index once, and the selected group is the largest
/// non-terminal one (or the only group).
pub fn bril_partition(points: &PointSet, kind: DepthKind, seed: u64) -> Check {
    let est = bril(points, &config(kind), &RngStream::new(seed, 0)).map_err(|e| e.to_string())?;
    let mut seen = vec![0u32; points.len()];
    for g in &est.all_groups {
        ensure(!g.members.is_empty(), || "empty group".into())?;
        for &i in g.members.as_slice() {
            seen[i] += 1;
        }
    }
    for &i in est.unassigned.as_slice() {
        seen[i] += 1;
    }
    ensure(seen.iter().all(|&c| c == 1), || format!("coverage counts {seen:?}"))?;
    let terminal: Vec<bool> = est.all_groups.iter().map(|g| g.terminal).collect();
    ensure(terminal.iter().filter(|t| **t).count() == 1, || "expected exactly one terminal group".into())?;
    ensure(*terminal.last().unwrap(), || "terminal group is not the last".into())?;
    let sel = &est.all_groups[est.selected_index];
    ensure(*sel == est.selected_group, || "selected_group disagrees with selected_index".into())?;
    if est.all_groups.len() > 1 {
        ensure(!sel.terminal, || "selected the terminal group".into())?;
        let best = est.all_groups.iter().filter(|g| !g.terminal).map(|g| g.members.len()).max().unwrap();
        ensure(sel.members.len() == best, || "selected group is not the largest".into())?;
    }
    ensure(est.center == sel.center, || "center is not the selected group's".into())
}

/// BRIL commutes with rotations and translations: same groups, moved centers.
pub fn bril_rigid(points: &PointSet, kind: DepthKind, degrees: f64, t: [f64; 2], seed: u64) -> Check {
    let a = rotation(degrees, 1.0);
    let moved = affine(points, a, t);
    let rng = RngStream::new(seed, 0);
    let e0 = bril(points, &config(kind), &rng).map_err(|e| e.to_string())?;
    let e1 = bril(&moved, &config(kind), &rng).map_err(|e| e.to_string())?;
    ensure(e0.all_groups.len() == e1.all_groups.len(), || {
        format!("{} vs {} groups", e0.all_groups.len(), e1.all_groups.len())
    })?;
    for (g0, g1) in e0.all_groups.iter().zip(&e1.all_groups) {
        ensure(g0.members == g1.members, || "group membership changed".into())?;
    }
    let c = &e0.center;
    let want = [a[0][0] * c[0] + a[0][1] * c[1] + t[0], a[1][0] * c[0] + a[1][1] * c[1] + t[1]];
    let gap = ((want[0] - e1.center[0]).powi(2) + (want[1] - e1.center[1]).powi(2)).sqrt();
    ensure(gap < 1e-7, || format!("center moved by {gap} off the transformed center"))
}

/// The deepest sample keeps its index under the given map.
pub fn max_equivariant(points: &PointSet, kind: DepthKind, a: [[f64; 2]; 2], t: [f64; 2]) -> Check {
    let rng = RngStream::new(1, 0);
    let m = DepthMethod::new(kind);
    let i0 = depth_all(points, m, &rng).map_err(|e| e.to_string())?.argmax();
    let i1 = depth_all(&affine(points, a, t), m, &rng).map_err(|e| e.to_string())?.argmax();
    ensure(i0 == i1, || format!("{kind}: deepest sample {i0} became {i1}"))?;
    let est = depth_median(points, m, MedianMode::Max, &rng).map_err(|e| e.to_string())?;
    ensure(est == points.point(i0), || "Max is not the deepest sample".into())
}

/// Depth values follow a permutation of the samples.
pub fn depth_permutation(points: &PointSet, kind: DepthKind, perm: &[usize]) -> Check {
    let rng = RngStream::new(2, 0);
    let m = DepthMethod::new(kind);
    let base = depth_all(points, m, &rng).map_err(|e| e.to_string())?;
    let shuffled = points.select(perm).unwrap();
    let other = depth_all(&shuffled, m, &rng).map_err(|e| e.to_string())?;
    for (k, &i) in perm.iter().enumerate() {
        let (a, b) = (base.values[i], other.values[k]);
        ensure((a - b).abs() <= 1e-12 * a.abs().max(1.0), || format!("{kind}: sample {i} depth {a} vs {b}"))?;
    }
    Ok(())
}

pub fn mcd_affine(points: &PointSet, a: [[f64; 2]; 2], t: [f64; 2], seed: u64) -> Check {
    let cfg = MinimizerConfig::new(MinimizerKind::Mcd).with_starts(50);
    let rng = RngStream::new(seed, 0);
    let f0 = mcd(points, &cfg, &rng).map_err(|e| e.to_string())?;
    let f1 = mcd(&affine(points, a, t), &cfg, &rng).map_err(|e| e.to_string())?;
    ensure(f0.subset == f1.subset, || "MCD subset changed under an affine map".into())?;
    let c = &f0.estimate.location;
    let want = [a[0][0] * c[0] + a[0][1] * c[1] + t[0], a[1][0] * c[0] + a[1][1] * c[1] + t[1]];
    let gap = (want[0] - f1.estimate.location[0]).abs() + (want[1] - f1.estimate.location[1]).abs();
    ensure(gap < 1e-8 * (1.0 + want[0].abs() + want[1].abs()), || format!("location off by {gap}"))
}

pub fn mardia_affine(points: &PointSet, a: [[f64; 2]; 2], t: [f64; 2]) -> Check {
    let m0 = mardia_test(points, 0.05).map_err(|e| e.to_string())?;
    let m1 = mardia_test(&affine(points, a, t), 0.05).map_err(|e| e.to_string())?;
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-8 * x.abs().max(1.0);
    ensure(close(m0.b1, m1.b1) && close(m0.b2, m1.b2), || {
        format!("moments ({}, {}) became ({}, {})", m0.b1, m0.b2, m1.b1, m1.b2)
    })
}

/// Every test's p-value lies in [0, 1] and Mardia's combined decision is the
/// disjunction of its two parts.
pub fn p_values_in_unit(points: &PointSet, alpha: f64) -> Check {
    let unit = |p: f64| (0.0..=1.0).contains(&p);
    let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
    let dip = dip_test(&xs, &CALIBRATION_STREAM, 200).map_err(|e| e.to_string())?;
    ensure(unit(dip.p_value), || format!("dip p {}", dip.p_value))?;
    if let Ok(m) = mardia_test(points, alpha) {
        ensure(unit(m.skewness.p_value) && unit(m.kurtosis.p_value), || "mardia p outside [0,1]".into())?;
        ensure(
            m.reject_any == (m.skewness.p_value < alpha || m.kurtosis.p_value < alpha),
            || "reject_any is not the disjunction".into(),
        )?;
    }
    if let Ok(k) = ks_chisq_test(points) {
        ensure(unit(k.p_value) && (0.0..=1.0).contains(&k.statistic), || "ks outside [0,1]".into())?;
    }
    Ok(())
}

pub fn hit_semantics(e: f64, threshold: f64) -> Check {
    ensure(is_hit(e, threshold) == (e < threshold), || format!("is_hit({e}, {threshold})"))?;
    ensure(!is_hit(threshold, threshold), || "the threshold itself counted as a hit".into())
}

pub fn aggregate_permutation(errors: &[f64], perm: &[usize]) -> Check {
    let a = aggregate(errors, 3.0).map_err(|e| e.to_string())?;
    let shuffled: Vec<f64> = perm.iter().map(|&i| errors[i]).collect();
    let b = aggregate(&shuffled, 3.0).map_err(|e| e.to_string())?;
    let same = |x: f64, y: f64| x == y || (x.is_nan() && y.is_nan());
    ensure(
        same(a.mean_error, b.mean_error)
            && same(a.sd, b.sd)
            && same(a.sse, b.sse)
            && a.hit_rate == b.hit_rate
            && same(a.hits_only_mean_error, b.hits_only_mean_error)
            && same(a.hits_only_sse, b.hits_only_sse)
            && a.failures == b.failures,
        || format!("{a:?} vs {b:?}"),
    )?;
    let hits = errors.iter().filter(|e| **e < 3.0).count();
    ensure(a.hit_rate == hits as f64 / errors.len() as f64, || "hit rate is not the strict count".into())?;
    ensure((a.hit_rate + a.miss_rate - 1.0).abs() < 1e-12, || "hit and miss rates do not sum to 1".into())
}
