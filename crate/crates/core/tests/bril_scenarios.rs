//! Seeded simulations of the locator stages on labeled mixtures.

use modeloc::bril::{bootstrap, bril, brl, refine_normal, refine_unimodal, BootstrapKind, BootstrapMethod, BrilConfig};
use modeloc::depth::{DepthKind, DepthMethod};
use modeloc::eval::error;
use modeloc::points::{euclidean, subset_mean};
use modeloc::synthgen::{generate, Label, MixtureConfig, MixtureInstance};
use modeloc::{IndexSubset, PointSet, RngStream};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(n: usize, seed: u64) -> PointSet {
    let mut r = RngStream::new(seed, 77).rng();
    let xy: Vec<[f64; 2]> = (0..n)
        .map(|_| [StandardNormal.sample(&mut r), StandardNormal.sample(&mut r)])
        .collect();
    PointSet::from_xy(&xy).unwrap()
}

fn config(kind: BootstrapKind) -> BrilConfig {
    BrilConfig::new(BootstrapMethod::new(kind))
}

fn depth(kind: DepthKind) -> BootstrapKind {
    BootstrapKind::Depth(DepthMethod::new(kind))
}

/// 400 main, two clusters of 200 and 200 noise samples.
fn four_hundred_main(seed: u64) -> MixtureInstance {
    generate(&MixtureConfig::new(1000, 3, 0.2, 0.5), &RngStream::new(seed, 0)).unwrap()
}

#[test]
fn bootstrap_of_a_gaussian_is_near_its_center() {
    let mut kinds: Vec<(BootstrapKind, f64)> = DepthKind::ALL.iter().map(|k| (depth(*k), 0.3)).collect();
    // Trimming by smallest determinant or volume wanders more: the final
    // handful of samples is the tightest clump, not the most central one.
    kinds.extend([(BootstrapKind::Mcd, 0.6), (BootstrapKind::Mve, 0.6)]);
    for (kind, bound) in kinds {
        let mut errs: Vec<f64> = (0..20)
            .map(|s| {
                let p = gaussian(500, 1 + s);
                let c = bootstrap(&p, &BootstrapMethod::new(kind), &RngStream::new(2, s)).unwrap();
                euclidean(&c, &[0.0, 0.0])
            })
            .collect();
        errs.sort_by(f64::total_cmp);
        assert!(errs[10] < bound, "{kind}: median error {}", errs[10]);
        assert!(errs[19] < 1.0, "{kind}: worst error {}", errs[19]);
    }
}

#[test]
fn recursive_oja_seed_usually_lands_in_the_main_cluster() {
    // 30% main, two clusters of 22.5%, 25% noise.
    let cfg = MixtureConfig::new(500, 3, 0.25, 0.4);
    let mut hits = 0;
    for seed in 0..30 {
        let inst = generate(&cfg, &RngStream::new(seed, 0)).unwrap();
        let c = bootstrap(&inst.points, &BootstrapMethod::new(depth(DepthKind::Oja)), &RngStream::new(seed, 1)).unwrap();
        if error(&c, inst.main_center()).unwrap() < 3.0 {
            hits += 1;
        }
    }
    assert!(hits > 15, "{hits}/30");
}

#[test]
fn unimodal_filter_keeps_a_gaussian_ball() {
    let p = gaussian(400, 3);
    let out = refine_unimodal(&p, &[0.0, 0.0], &config(depth(DepthKind::Projection))).unwrap();
    assert!(out.unimodal_at_start);
    assert_eq!(out.members, IndexSubset::all(400));
}

#[test]
fn unimodal_filter_isolates_the_main_cluster() {
    for seed in 0..5 {
        let inst = four_hundred_main(seed);
        let out = refine_unimodal(&inst.points, inst.main_center(), &config(depth(DepthKind::Projection))).unwrap();
        let members = out.members.as_slice();
        let main_kept = members.iter().filter(|&&i| inst.labels[i] == Label::Main).count();
        let foreign = members.len() - main_kept;
        assert!(main_kept as f64 >= 0.95 * 400.0, "seed {seed}: kept {main_kept} of 400");
        // Sparse uniform noise only thins the distance tail, which the dip
        // cannot see; the survivors that matter are the other clusters.
        let clustered = members.iter().filter(|&&i| matches!(inst.labels[i], Label::Cluster(_))).count();
        assert!(foreign < members.len() / 3, "seed {seed}: {foreign} foreign of {}", members.len());
        assert!(clustered as f64 <= 0.1 * 400.0, "seed {seed}: {clustered} samples of other clusters");

        // Survivors are exactly the nearest samples to the seed.
        let mut dist: Vec<f64> = (0..inst.points.len()).map(|i| euclidean(inst.points.point(i), inst.main_center())).collect();
        let cut = members.iter().map(|&i| dist[i]).fold(0.0, f64::max);
        dist.sort_by(f64::total_cmp);
        assert_eq!(dist.iter().filter(|d| **d <= cut).count(), members.len());
        // The trace ends at the first passing p-value.
        let last = *out.p_trace.last().unwrap();
        assert!(last >= 0.05);
        assert!(out.p_trace[..out.p_trace.len() - 1].iter().all(|p| *p < 0.05));
    }
}

#[test]
fn normal_filter_leaves_gaussians_alone() {
    let cfg = config(depth(DepthKind::Projection));
    let (mut passes, mut removed) = (0, 0usize);
    let seeds = 40;
    for seed in 0..seeds {
        let p = gaussian(300, 100 + seed);
        let out = refine_normal(&p, &IndexSubset::all(300), &cfg, &RngStream::new(seed, 0)).unwrap();
        if out.p_trace[0] >= 0.05 {
            passes += 1;
        }
        removed += 300 - out.members.len();
        let mean = subset_mean(&p, out.members.as_slice()).unwrap();
        assert_eq!(out.center, mean);
    }
    assert!(passes as f64 >= 0.9 * seeds as f64, "{passes}/{seeds}");
    let avg = removed as f64 / (seeds as f64 * 300.0);
    assert!(avg <= 0.05, "removed {avg}");
}

#[test]
fn normal_filter_removes_stragglers() {
    let cfg = config(depth(DepthKind::Projection));
    let mut removed = 0;
    let mut total = 0;
    for seed in 0..10 {
        let mut r = RngStream::new(seed, 5).rng();
        let mut xy: Vec<[f64; 2]> = (0..200)
            .map(|_| [StandardNormal.sample(&mut r), StandardNormal.sample(&mut r)])
            .collect();
        // Uniform over the annulus 3 ≤ r ≤ 5, well inside a unimodal shell.
        for _ in 0..20 {
            let rad = (r.random_range(9.0..25.0f64)).sqrt();
            let t = r.random_range(0.0..std::f64::consts::TAU);
            xy.push([rad * t.cos(), rad * t.sin()]);
        }
        let p = PointSet::from_xy(&xy).unwrap();
        let out = refine_normal(&p, &IndexSubset::all(220), &cfg, &RngStream::new(seed, 0)).unwrap();
        removed += (200..220).filter(|i| !out.members.contains(*i)).count();
        total += 20;
    }
    // Stragglers just past the Gaussian's own reach look like its tail.
    assert!(removed as f64 >= 0.7 * total as f64, "{removed}/{total}");
}

#[test]
fn brl_on_a_gaussian_is_precise() {
    let cfg = config(depth(DepthKind::Projection));
    let mut good = 0;
    for seed in 0..100 {
        let p = gaussian(500, 1000 + seed);
        let out = brl(&p, &cfg, &RngStream::new(seed, 0)).unwrap();
        if euclidean(&out.center, &[0.0, 0.0]) < 0.2 {
            good += 1;
        }
        assert!(out.normal.members.as_slice().iter().all(|&i| out.unimodal.members.contains(i)));
    }
    assert!(good >= 99, "{good}/100");
}

#[test]
fn bril_on_a_single_gaussian_selects_its_only_group() {
    let p = gaussian(500, 9);
    let est = bril(&p, &config(depth(DepthKind::Projection)), &RngStream::new(1, 0)).unwrap();
    assert_eq!(est.all_groups.len(), 1);
    assert!(est.selected_group.terminal);
    assert!(euclidean(&est.center, &[0.0, 0.0]) < 0.3);
}

#[test]
fn bril_recovers_the_four_hundred_sample_cluster() {
    for seed in 0..5 {
        let inst = four_hundred_main(seed);
        let est = bril(&inst.points, &config(depth(DepthKind::Projection)), &RngStream::new(seed, 0)).unwrap();
        let size = est.selected_group.members.len();
        assert!((385..=415).contains(&size), "seed {seed}: selected {size}");
        assert!(error(&est.center, inst.main_center()).unwrap() < 3.0);
        // One group per cluster; leftover noise may form a final small group.
        let big = est.all_groups.iter().filter(|g| g.members.len() >= 150).count();
        assert_eq!(big, 3, "seed {seed}");
        assert!(est.all_groups.len() <= 4);
    }
}

#[test]
fn bril_prefers_the_sixty_percent_cluster() {
    let cfg = MixtureConfig::new(500, 2, 0.0, 0.6);
    let bril_cfg = config(depth(DepthKind::Projection));
    let mut hits = 0;
    for seed in 0..100 {
        let inst = generate(&cfg, &RngStream::new(seed, 0)).unwrap();
        let est = bril(&inst.points, &bril_cfg, &RngStream::new(seed, 1)).unwrap();
        if error(&est.center, inst.main_center()).unwrap() < 3.0 {
            hits += 1;
        }
    }
    assert!(hits >= 99, "{hits}/100");
}
