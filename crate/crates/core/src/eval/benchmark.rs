use super::{aggregate, error, Estimator, EstimatorOptions, RunMetrics, HIT_THRESHOLD};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::synthgen::{generate, MixtureConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub id: String,
    pub config: MixtureConfig,
}

/// A set of mixture configurations, usually read from a TOML grid file:
///
/// ```toml
/// name = "noise"
/// skip_invalid = true        # drop sweep combinations that fail validation
///
/// [base]                     # MixtureConfig fields shared by every cell
/// n_samples = 500
///
/// [sweep]                    # Cartesian product, one cell per combination
/// n_clusters = [3, 4]
/// noise_ratio = [0.0, 0.25]
///
/// [[cell]]                   # explicit cells, layered over `base`
/// id = "single"
/// n_clusters = 1
/// inlier_ratio = 1.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub name: String,
    pub cells: Vec<GridCell>,
}

/// Sweep keys are expanded in this order; others follow alphabetically.
const SWEEP_ORDER: [(&str, &str); 4] = [
    ("n_samples", "n"),
    ("n_clusters", "k"),
    ("noise_ratio", "e"),
    ("inlier_ratio", "d"),
];

fn value_label(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_config(table: toml::Table) -> Result<MixtureConfig> {
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))
}

impl Grid {
    pub fn from_toml_str(text: &str) -> Result<Grid> {
        let mut root: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        let name = match root.remove("name") {
            Some(toml::Value::String(s)) => s,
            None => "grid".to_string(),
            Some(_) => return Err(Error::Parse("'name' must be a string".into())),
        };
        let skip_invalid = match root.remove("skip_invalid") {
            Some(toml::Value::Boolean(b)) => b,
            None => false,
            Some(_) => return Err(Error::Parse("'skip_invalid' must be a boolean".into())),
        };
        let base = match root.remove("base") {
            Some(toml::Value::Table(t)) => t,
            None => toml::Table::new(),
            Some(_) => return Err(Error::Parse("'base' must be a table".into())),
        };
        let sweep = match root.remove("sweep") {
            Some(toml::Value::Table(t)) => Some(t),
            None => None,
            Some(_) => return Err(Error::Parse("'sweep' must be a table".into())),
        };
        let explicit = match root.remove("cell") {
            Some(toml::Value::Array(a)) => a,
            None => Vec::new(),
            Some(_) => return Err(Error::Parse("'cell' must be an array of tables".into())),
        };
        if let Some(k) = root.keys().next() {
            return Err(Error::Parse(format!("unknown grid key '{k}'")));
        }

        let mut cells = Vec::new();
        if let Some(sweep) = sweep {
            let mut keys: Vec<(String, String)> = Vec::new();
            for (k, short) in SWEEP_ORDER {
                if sweep.contains_key(k) {
                    keys.push((k.to_string(), short.to_string()));
                }
            }
            for k in sweep.keys() {
                if !SWEEP_ORDER.iter().any(|(name, _)| name == k) {
                    keys.push((k.clone(), k.clone()));
                }
            }
            let mut axes: Vec<&Vec<toml::Value>> = Vec::new();
            for (k, _) in &keys {
                match &sweep[k] {
                    toml::Value::Array(a) if !a.is_empty() => axes.push(a),
                    _ => return Err(Error::Parse(format!("sweep '{k}' must be a nonempty array"))),
                }
            }
            let total: usize = axes.iter().map(|a| a.len()).product();
            for flat in 0..total {
                let mut table = base.clone();
                let mut id = Vec::new();
                let mut rest = flat;
                // Last key varies fastest.
                let mut picks = vec![0; axes.len()];
                for a in (0..axes.len()).rev() {
                    picks[a] = rest % axes[a].len();
                    rest /= axes[a].len();
                }
                for (a, (k, short)) in keys.iter().enumerate() {
                    let v = axes[a][picks[a]].clone();
                    id.push(format!("{short}{}", value_label(&v)));
                    table.insert(k.clone(), v);
                }
                let config = to_config(table)?;
                if let Err(e) = config.cardinalities() {
                    if skip_invalid {
                        continue;
                    }
                    return Err(Error::Parse(format!("cell {}: {e}", id.join("_"))));
                }
                cells.push(GridCell { id: id.join("_"), config });
            }
        }
        for (i, v) in explicit.into_iter().enumerate() {
            let toml::Value::Table(mut t) = v else {
                return Err(Error::Parse("'cell' entries must be tables".into()));
            };
            let id = match t.remove("id") {
                Some(toml::Value::String(s)) => s,
                None => format!("cell{}", i + 1),
                Some(_) => return Err(Error::Parse("cell 'id' must be a string".into())),
            };
            let mut table = base.clone();
            table.extend(t);
            let config = to_config(table)?;
            config
                .cardinalities()
                .map_err(|e| Error::Parse(format!("cell {id}: {e}")))?;
            cells.push(GridCell { id, config });
        }
        if cells.is_empty() {
            return Err(Error::Parse("grid defines no cells".into()));
        }
        let mut ids: Vec<&str> = cells.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parse(format!("duplicate cell id '{}'", w[0])));
        }
        Ok(Grid { name, cells })
    }

    pub fn load(path: &Path) -> Result<Grid> {
        Grid::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub reps: usize,
    pub seed: u64,
    pub estimators: Vec<Estimator>,
    pub options: EstimatorOptions,
    pub threshold: f64,
    /// Record wall-clock time per estimator call.
    pub timing: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl BenchmarkConfig {
    pub fn new(estimators: Vec<Estimator>, reps: usize, seed: u64) -> Self {
        BenchmarkConfig {
            reps,
            seed,
            estimators,
            options: EstimatorOptions::default(),
            threshold: HIT_THRESHOLD,
            timing: true,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub config_id: String,
    pub estimator: String,
    pub metrics: RunMetrics,
    pub median_ms: Option<f64>,
}

/// 64-bit FNV-1a, used to key streams by name rather than by position.
fn name_hash(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Run every estimator on `reps` fresh instances of every cell.
///
/// Repetition `r` of a cell draws its mixture from stream `r` of the master
/// seed, derived by the cell id; each estimator derives its own stream from
/// that by name. Results therefore do not depend on scheduling, on the
/// order of cells or on which other estimators run. Failed estimates count
/// as infinite errors.
pub fn benchmark_grid(grid: &Grid, config: &BenchmarkConfig) -> Result<Vec<CellResult>> {
    if config.reps == 0 {
        return Err(Error::BadParameter("reps must be at least 1".into()));
    }
    if config.estimators.is_empty() {
        return Err(Error::BadParameter("no estimators given".into()));
    }
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::BadParameter(e.to_string()))?
            .install(|| run(grid, config)),
        None => run(grid, config),
    }
}

fn run(grid: &Grid, config: &BenchmarkConfig) -> Result<Vec<CellResult>> {
    let names: Vec<String> = config.estimators.iter().map(|e| e.to_string()).collect();
    let tasks: Vec<(usize, usize)> = (0..grid.cells.len())
        .flat_map(|c| (0..config.reps).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Vec<(f64, f64)>> = tasks
        .par_iter()
        .map(|&(c, r)| -> Result<Vec<(f64, f64)>> {
            let cell = &grid.cells[c];
            let stream = RngStream::new(config.seed, r as u64).derive(name_hash(&cell.id));
            let inst = generate(&cell.config, &stream)?;
            Ok(config
                .estimators
                .iter()
                .zip(&names)
                .map(|(est, name)| {
                    let start = Instant::now();
                    let out = est.estimate(&inst.points, &config.options, &stream.derive(name_hash(name)));
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    let err = out
                        .and_then(|o| error(&o.center, inst.main_center()))
                        .unwrap_or(f64::INFINITY);
                    (err, ms)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut results = Vec::with_capacity(grid.cells.len() * names.len());
    for (c, cell) in grid.cells.iter().enumerate() {
        let rows = &outcomes[c * config.reps..(c + 1) * config.reps];
        for (e, name) in names.iter().enumerate() {
            let errors: Vec<f64> = rows.iter().map(|row| row[e].0).collect();
            let median_ms = config.timing.then(|| {
                let mut ms: Vec<f64> = rows.iter().map(|row| row[e].1).collect();
                crate::points::median_in_place(&mut ms)
            });
            results.push(CellResult {
                config_id: cell.id.clone(),
                estimator: name.clone(),
                metrics: aggregate(&errors, config.threshold)?,
                median_ms,
            });
        }
    }
    Ok(results)
}

pub(crate) fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NA".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.6}")
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "config_id",
    "estimator",
    "mean_error",
    "sd",
    "sse",
    "hit_rate",
    "miss_rate",
    "hits_mean_error",
    "hits_sse",
    "median_ms",
];

pub(crate) fn metric_fields(m: &RunMetrics, median_ms: Option<f64>) -> Vec<String> {
    vec![
        fmt_num(m.mean_error),
        fmt_num(m.sd),
        fmt_num(m.sse),
        fmt_num(m.hit_rate),
        fmt_num(m.miss_rate),
        fmt_num(m.hits_only_mean_error),
        fmt_num(m.hits_only_sse),
        median_ms.map_or("NA".into(), |v| format!("{v:.3}")),
    ]
}

pub fn write_csv<W: Write>(results: &[CellResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(crate::synthgen::csv_err)?;
    for r in results {
        let mut rec = vec![r.config_id.clone(), r.estimator.clone()];
        rec.extend(metric_fields(&r.metrics, r.median_ms));
        w.write_record(&rec).map_err(crate::synthgen::csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    grid: &'a str,
    seed: u64,
    reps: usize,
    threshold: f64,
    estimators: Vec<String>,
    options: &'a EstimatorOptions,
    cells: Vec<JsonCell<'a>>,
}

#[derive(Serialize)]
struct JsonCell<'a> {
    config_id: &'a str,
    config: &'a MixtureConfig,
    estimator: &'a str,
    metrics: JsonMetrics,
    median_ms: Option<f64>,
}

/// JSON has no NaN or infinity, so those become null.
#[derive(Serialize)]
struct JsonMetrics {
    mean_error: Option<f64>,
    sd: Option<f64>,
    sse: Option<f64>,
    hit_rate: f64,
    miss_rate: f64,
    n_reps: usize,
    hits_mean_error: Option<f64>,
    hits_sse: f64,
    failures: usize,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn write_json<W: Write>(grid: &Grid, config: &BenchmarkConfig, results: &[CellResult], mut out: W) -> Result<()> {
    let report = JsonReport {
        grid: &grid.name,
        seed: config.seed,
        reps: config.reps,
        threshold: config.threshold,
        estimators: config.estimators.iter().map(|e| e.to_string()).collect(),
        options: &config.options,
        cells: results
            .iter()
            .map(|r| JsonCell {
                config_id: &r.config_id,
                config: &grid
                    .cells
                    .iter()
                    .find(|c| c.id == r.config_id)
                    .expect("result from this grid")
                    .config,
                estimator: &r.estimator,
                metrics: JsonMetrics {
                    mean_error: finite(r.metrics.mean_error),
                    sd: finite(r.metrics.sd),
                    sse: finite(r.metrics.sse),
                    hit_rate: r.metrics.hit_rate,
                    miss_rate: r.metrics.miss_rate,
                    n_reps: r.metrics.n_reps,
                    hits_mean_error: finite(r.metrics.hits_only_mean_error),
                    hits_sse: r.metrics.hits_only_sse,
                    failures: r.metrics.failures,
                },
                median_ms: r.median_ms,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}
