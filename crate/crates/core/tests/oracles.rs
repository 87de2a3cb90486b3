mod common;

use common::*;
use modeloc::depth::DepthKind;
use modeloc::robust::{mcd, robust_distances, MinimizerConfig, MinimizerKind};
use modeloc::stattests::dip_statistic;
use modeloc::{LocationScatter, PointSet, RngStream};

fn assert_all(s: Suite) {
    assert_eq!(s.matched, s.total, "{}: {}/{} matched; worst {}", s.name, s.matched, s.total, s.worst);
}

#[test]
fn tukey_depth_matches_enumeration() {
    assert_all(depth_suite(DepthKind::Tukey, 60));
}

#[test]
fn simplicial_depth_matches_enumeration() {
    assert_all(depth_suite(DepthKind::Liu, 60));
}

#[test]
fn oja_depth_matches_enumeration() {
    assert_all(depth_suite(DepthKind::Oja, 60));
}

#[test]
fn oracles_agree_on_known_configurations() {
    let square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    assert_eq!(liu_oracle([0.5, 0.5], &square), 1.0);
    assert_eq!(tukey_oracle([0.5, 0.5], &square), 0.5);
    assert!((oja_oracle([0.5, 0.5], &square) - 6.0 / 7.0).abs() < 1e-15);
    assert_eq!(tukey_oracle([0.0, 0.0], &square), 0.25);
}

#[test]
fn randomized_mcd_finds_the_enumerated_optimum() {
    let s = mcd_suite(200);
    assert!(s.rate() >= 0.99, "{}/{}: {}", s.matched, s.total, s.worst);
}

#[test]
fn mcd_objective_is_the_subset_determinant() {
    for seed in 0..20 {
        let pts = contaminated(seed);
        let set = PointSet::from_xy(&pts).unwrap();
        let fit = mcd(&set, &MinimizerConfig::new(MinimizerKind::Mcd), &RngStream::new(seed, 1)).unwrap();
        let (_, best) = mcd_oracle(&pts, fit.subset.len());
        assert!(fit.objective >= best * (1.0 - 1e-9));
    }
}

#[test]
fn mve_planted_cluster_matches_enumeration() {
    let (got, want) = mve_planted_matches();
    assert_eq!(want, vec![0, 1, 2, 3, 4, 5]);
    assert_eq!(got, want);
    let pts = planted_cluster();
    assert_eq!(mcd_oracle(&pts, 6).0, want);
}

#[test]
fn enclosing_ellipse_of_a_square_is_its_circumcircle() {
    let sq = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
    // Circle of radius √2: area 2π, so the reported factor is 2.
    assert!((enclosing_ellipse_volume(&sq) - 2.0).abs() < 1e-6);
}

#[test]
fn robust_distances_with_sample_moments_are_mahalanobis() {
    let mut r = rng(42);
    let pts = gaussian_xy(&mut r, 30, [1.0, 2.0], 1.3);
    let set = PointSet::from_xy(&pts).unwrap();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let sxx = pts.iter().map(|p| (p[0] - mx).powi(2)).sum::<f64>() / (n - 1.0);
    let syy = pts.iter().map(|p| (p[1] - my).powi(2)).sum::<f64>() / (n - 1.0);
    let sxy = pts.iter().map(|p| (p[0] - mx) * (p[1] - my)).sum::<f64>() / (n - 1.0);
    let ls = LocationScatter {
        location: vec![mx, my],
        scatter: modeloc::linalg::Matrix::from_rows(&[vec![sxx, sxy], vec![sxy, syy]]),
    };
    let got = robust_distances(&set, &ls).unwrap();
    let det = sxx * syy - sxy * sxy;
    for (p, d) in pts.iter().zip(got) {
        let (a, b) = (p[0] - mx, p[1] - my);
        let want = ((syy * a * a - 2.0 * sxy * a * b + sxx * b * b) / det).sqrt();
        assert!((d - want).abs() < 1e-10);
    }
}

#[test]
fn mardia_matches_double_sums() {
    assert_all(mardia_suite(100));
}

#[test]
fn mardia_on_a_six_point_set() {
    let pts = [[0.0, 0.0], [1.0, 0.3], [2.5, 1.0], [0.4, 2.2], [3.1, 3.3], [1.7, -0.8]];
    let (b1, b2) = mardia_oracle(&pts);
    let got = modeloc::stattests::mardia_test(&PointSet::from_xy(&pts).unwrap(), 0.05).unwrap();
    assert!((got.b1 - b1).abs() <= 1e-10 * b1.abs().max(1.0));
    assert!((got.b2 - b2).abs() <= 1e-10 * b2.abs().max(1.0));
}

#[test]
fn dip_matches_definition() {
    assert_all(dip_suite(150));
}

#[test]
fn dip_oracle_known_values() {
    // Evenly spaced samples: the best fit is a uniform CDF through the
    // middle of each jump.
    let x: Vec<f64> = (0..6).map(|i| i as f64).collect();
    assert!((dip_oracle(&x) - 1.0 / 12.0).abs() < 1e-9);
    assert!((dip_statistic(&x).unwrap() - 1.0 / 12.0).abs() < 1e-12);
    // Two tight pairs far apart need a larger dip than the even spread.
    let y = [0.0, 0.01, 10.0, 10.01];
    let e = [0.0, 1.0, 2.0, 3.0];
    assert!(dip_oracle(&y) > dip_oracle(&e) + 1e-6);
}
