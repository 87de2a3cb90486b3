//! Dip test on one- and two-peaked samples, and the two normality tests on
//! Gaussian, uniform and contaminated clouds.

use modeloc::stattests::{dip_test, ks_chisq_test, mardia_test, CALIBRATION_STREAM};
use modeloc::{PointSet, RngStream};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> modeloc::Result<()> {
    let mut r = RngStream::new(5, 0).rng();
    let mut normal = || -> f64 { StandardNormal.sample(&mut r) };

    let one: Vec<f64> = (0..300).map(|_| normal()).collect();
    let two: Vec<f64> = (0..300).map(|i| normal() + if i % 2 == 0 { -2.5 } else { 2.5 }).collect();
    let skewed: Vec<f64> = (0..300).map(|_| normal().exp()).collect();
    println!("{:<24} {:>8} {:>8}", "sample", "dip", "p");
    for (name, v) in [("gaussian", &one), ("two peaks 5 sd apart", &two), ("lognormal", &skewed)] {
        let t = dip_test(v, &CALIBRATION_STREAM, 2000)?;
        println!("{name:<24} {:>8.4} {:>8.3}", t.statistic, t.p_value);
    }

    let mut r = RngStream::new(6, 0).rng();
    let gauss: Vec<[f64; 2]> = (0..300)
        .map(|_| [StandardNormal.sample(&mut r), StandardNormal.sample(&mut r)])
        .collect();
    let square: Vec<[f64; 2]> = (0..300).map(|_| [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]).collect();
    let mut tailed = gauss.clone();
    for k in 0..15 {
        let t = k as f64 * 0.4;
        tailed.push([5.0 * t.cos(), 5.0 * t.sin()]);
    }
    println!();
    println!("{:<18} {:>10} {:>10} {:>10} {:>10}", "cloud", "skew p", "kurt p", "ks stat", "ks p");
    for (name, xy) in [("gaussian", &gauss), ("uniform square", &square), ("gaussian + ring", &tailed)] {
        let p = PointSet::from_xy(xy)?;
        let m = mardia_test(&p, 0.05)?;
        let k = ks_chisq_test(&p)?;
        println!(
            "{name:<18} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            m.skewness.p_value, m.kurtosis.p_value, k.statistic, k.p_value
        );
    }
    Ok(())
}
