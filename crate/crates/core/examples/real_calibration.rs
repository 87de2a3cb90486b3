//! The calibration protocol: repeated draws of gaze samples per target,
//! errors in pixels against the known target positions.
//!
//! With no arguments a session is simulated: fixations around nine targets
//! with late samples still on the previous target and screen-wide noise. Otherwise pass a sample CSV (`trial,target,x,y`) and a truth JSON.
//!
//! ```text
//! cargo run --release --example real_calibration -- [samples.csv truth.json]
//! ```

use modeloc::eval::{read_calibration, read_truth, real_eval, CalibrationSample, EstimatorOptions, RealEvalConfig, RealEvalRow};
use modeloc::RngStream;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::collections::BTreeMap;
use std::fs::File;

fn simulate() -> (Vec<CalibrationSample>, BTreeMap<i64, [f64; 2]>) {
    let mut r = RngStream::new(21, 0).rng();
    let fix = Normal::new(0.0, 10.0).unwrap();
    let mut truth = BTreeMap::new();
    for (k, (i, j)) in (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).enumerate() {
        truth.insert(k as i64, [160.0 + 800.0 * j as f64, 90.0 + 450.0 * i as f64]);
    }
    let mut samples = Vec::new();
    for (&t, c) in &truth {
        let prev = truth[&((t + 8) % 9)];
        for k in 0..1200 {
            let u: f64 = r.random();
            let (x, y) = if u < 0.6 {
                (c[0] + fix.sample(&mut r), c[1] + fix.sample(&mut r))
            } else if u < 0.85 {
                (prev[0] + fix.sample(&mut r), prev[1] + fix.sample(&mut r))
            } else {
                (r.random_range(0.0..1920.0), r.random_range(0.0..1080.0))
            };
            samples.push(CalibrationSample { trial: k / 200, target: t, x, y });
        }
    }
    (samples, truth)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (samples, truth) = match args.as_slice() {
        [data, truth] => (read_calibration(File::open(data)?)?, read_truth(File::open(truth)?)?),
        [] => simulate(),
        _ => return Err("expected no arguments or <samples.csv> <truth.json>".into()),
    };
    let estimators = ["bril:spatial", "brl:spatial", "cw-median", "cw-mode:5", "mean"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<_>, _>>()?;
    let config = RealEvalConfig {
        draws: 5,
        draw_size: 500,
        timing: false,
        ..RealEvalConfig::default()
    };
    let rows = real_eval("session", &samples, &truth, &config, &estimators, &EstimatorOptions::default(), &RngStream::new(22, 0))?;
    let session: Vec<RealEvalRow> = rows.into_iter().filter(|r| r.target.is_none()).collect();
    println!("{:<14} {:>12} {:>12} {:>9}", "estimator", "error px", "error deg", "hit rate");
    for r in &session {
        println!(
            "{:<14} {:>12.3} {:>12.4} {:>9.3}",
            r.estimator,
            r.metrics.mean_error,
            r.metrics.mean_error / config.pixel_per_degree,
            r.metrics.hit_rate
        );
    }
    Ok(())
}
