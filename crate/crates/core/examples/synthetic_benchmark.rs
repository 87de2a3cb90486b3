//! Run a small Monte-Carlo grid and print a metrics table.
//!
//! ```text
//! cargo run --release --example synthetic_benchmark -- [reps] [estimator ...]
//! ```

use modeloc::eval::{benchmark_grid, BenchmarkConfig, Estimator, Grid};

const GRID: &str = r#"
name = "example"
[base]
n_samples = 500
[sweep]
n_clusters = [3, 5]
noise_ratio = [0.0, 0.25]
inlier_ratio = [0.4]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let reps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let mut estimators: Vec<Estimator> = args.map(|s| s.parse()).collect::<Result<_, _>>()?;
    if estimators.is_empty() {
        estimators = ["bril:projection", "brl:projection", "rec:projection", "max:projection", "mean", "cw-median"]
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()?;
    }
    let grid = Grid::from_toml_str(GRID)?;
    let results = benchmark_grid(&grid, &BenchmarkConfig::new(estimators, reps, 7))?;

    println!(
        "{:<20} {:<18} {:>10} {:>9} {:>12} {:>10}",
        "cell", "estimator", "mean err", "hit rate", "hits err", "median ms"
    );
    for r in &results {
        println!(
            "{:<20} {:<18} {:>10.4} {:>9.3} {:>12.4} {:>10.1}",
            r.config_id,
            r.estimator,
            r.metrics.mean_error,
            r.metrics.hit_rate,
            r.metrics.hits_only_mean_error,
            r.median_ms.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
