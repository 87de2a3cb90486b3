use super::benchmark::{fmt_num, metric_fields};
use super::{aggregate, error, Estimator, EstimatorOptions, RunMetrics};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::rng::RngStream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealEvalConfig {
    pub draws: usize,
    pub draw_size: usize,
    pub pixel_per_degree: f64,
    /// Hit threshold in pixels.
    pub hit_threshold_px: f64,
    /// Keep only samples inside `[xmin, xmax] × [ymin, ymax]`.
    pub range: Option<[f64; 4]>,
    pub timing: bool,
}

impl Default for RealEvalConfig {
    fn default() -> Self {
        RealEvalConfig {
            draws: 25,
            draw_size: 1000,
            pixel_per_degree: 25.0,
            hit_threshold_px: 75.0,
            range: None,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSample {
    pub trial: i64,
    pub target: i64,
    pub x: f64,
    pub y: f64,
}

/// Gaze samples from a CSV with header `trial,target,x,y`.
pub fn read_calibration<R: Read>(input: R) -> Result<Vec<CalibrationSample>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    for need in ["trial", "target", "x", "y"] {
        if !headers.iter().any(|h| h.trim() == need) {
            return Err(Error::Parse(format!("calibration CSV lacks a '{need}' column")));
        }
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<CalibrationSample>().enumerate() {
        let s = rec.map_err(|e| Error::Parse(format!("row {}: {e}", i + 2)))?;
        if !(s.x.is_finite() && s.y.is_finite()) {
            return Err(Error::Parse(format!("row {}: non-finite coordinate", i + 2)));
        }
        out.push(s);
    }
    Ok(out)
}

/// Ground truth as a JSON object mapping target ids to `[x, y]`.
pub fn read_truth<R: Read>(input: R) -> Result<BTreeMap<i64, [f64; 2]>> {
    let raw: BTreeMap<String, [f64; 2]> =
        serde_json::from_reader(input).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_iter()
        .map(|(k, v)| {
            k.trim()
                .parse::<i64>()
                .map(|id| (id, v))
                .map_err(|_| Error::Parse(format!("target id '{k}' is not an integer")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealEvalRow {
    pub session: String,
    /// `None` for the session-wide row.
    pub target: Option<i64>,
    pub estimator: String,
    /// Errors in pixels.
    pub metrics: RunMetrics,
    pub median_ms: Option<f64>,
}

/// Random draws without replacement from each target's samples, with
/// errors in pixels against the ground truth, summarized per target and
/// for the whole session.
pub fn real_eval(
    session: &str,
    samples: &[CalibrationSample],
    truth: &BTreeMap<i64, [f64; 2]>,
    config: &RealEvalConfig,
    estimators: &[Estimator],
    options: &EstimatorOptions,
    rng: &RngStream,
) -> Result<Vec<RealEvalRow>> {
    if config.draws == 0 || config.draw_size == 0 {
        return Err(Error::BadParameter("draws and draw_size must be at least 1".into()));
    }
    if estimators.is_empty() {
        return Err(Error::BadParameter("no estimators given".into()));
    }
    let mut by_target: BTreeMap<i64, Vec<[f64; 2]>> = BTreeMap::new();
    for s in samples {
        if let Some([x0, x1, y0, y1]) = config.range {
            if !(s.x >= x0 && s.x <= x1 && s.y >= y0 && s.y <= y1) {
                continue;
            }
        }
        by_target.entry(s.target).or_default().push([s.x, s.y]);
    }
    if by_target.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (&t, pts) in &by_target {
        if !truth.contains_key(&t) {
            return Err(Error::MissingGroundTruth(t.to_string()));
        }
        if pts.len() < config.draw_size {
            return Err(Error::InsufficientSamples {
                needed: config.draw_size,
                got: pts.len(),
            });
        }
    }

    let names: Vec<String> = estimators.iter().map(|e| e.to_string()).collect();
    let tasks: Vec<(i64, usize)> = by_target
        .keys()
        .flat_map(|&t| (0..config.draws).map(move |d| (t, d)))
        .collect();
    let results: Vec<Vec<(f64, f64)>> = tasks
        .par_iter()
        .map(|&(t, d)| -> Result<Vec<(f64, f64)>> {
            let pool = &by_target[&t];
            let stream = rng.derive(t as u64).derive(d as u64);
            let mut r = stream.rng();
            let idx = rand::seq::index::sample(&mut r, pool.len(), config.draw_size).into_vec();
            let xy: Vec<[f64; 2]> = idx.iter().map(|&i| pool[i]).collect();
            let points = PointSet::from_xy(&xy)?;
            let target = truth[&t];
            Ok(estimators
                .iter()
                .enumerate()
                .map(|(e, est)| {
                    let start = Instant::now();
                    let out = est.estimate(&points, options, &stream.derive(1 + e as u64));
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    let err = out.and_then(|o| error(&o.center, &target)).unwrap_or(f64::INFINITY);
                    (err, ms)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let targets: Vec<i64> = by_target.keys().copied().collect();
    for (e, name) in names.iter().enumerate() {
        let mut all_err = Vec::new();
        let mut all_ms = Vec::new();
        for (ti, &t) in targets.iter().enumerate() {
            let chunk = &results[ti * config.draws..(ti + 1) * config.draws];
            let errs: Vec<f64> = chunk.iter().map(|r| r[e].0).collect();
            let mut ms: Vec<f64> = chunk.iter().map(|r| r[e].1).collect();
            all_err.extend_from_slice(&errs);
            all_ms.extend_from_slice(&ms);
            rows.push(RealEvalRow {
                session: session.to_string(),
                target: Some(t),
                estimator: name.clone(),
                metrics: aggregate(&errs, config.hit_threshold_px)?,
                median_ms: config.timing.then(|| crate::points::median_in_place(&mut ms)),
            });
        }
        rows.push(RealEvalRow {
            session: session.to_string(),
            target: None,
            estimator: name.clone(),
            metrics: aggregate(&all_err, config.hit_threshold_px)?,
            median_ms: config.timing.then(|| crate::points::median_in_place(&mut all_ms)),
        });
    }
    Ok(rows)
}

impl RealEvalRow {
    pub fn csv_header() -> Vec<&'static str> {
        let mut h = vec!["session", "target"];
        h.extend(&super::benchmark::CSV_HEADER[1..]);
        h.push("mean_error_deg");
        h
    }

    pub fn write_csv<W: Write>(rows: &[RealEvalRow], pixel_per_degree: f64, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::csv_header()).map_err(crate::synthgen::csv_err)?;
        for r in rows {
            let mut rec = vec![
                r.session.clone(),
                r.target.map_or("all".into(), |t| t.to_string()),
                r.estimator.clone(),
            ];
            rec.extend(metric_fields(&r.metrics, r.median_ms));
            rec.push(fmt_num(r.metrics.mean_error / pixel_per_degree));
            w.write_record(&rec).map_err(crate::synthgen::csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}
