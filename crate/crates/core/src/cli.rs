//! Command-line front end. Exit codes: 0 success, 2 input error, 3
//! estimation failure.

use crate::error::{Error, Result};
use crate::eval::{
    benchmark_grid, read_calibration, read_truth, real_eval, write_csv, write_json, BenchmarkConfig, Estimator,
    EstimatorOptions, Grid, RealEvalConfig, RealEvalRow,
};
use crate::points::PointSet;
use crate::rng::{RngStream, DEFAULT_SEED};
use crate::stattests::NormalityTest;
use crate::synthgen::{generate, MixtureConfig, MixtureInstance};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_ESTIMATION: u8 = 3;

const ESTIMATOR_HELP: &str = "Estimator spec family:method[:param]. Families: \
bril, brl, rec (method: tukey, oja, liu, spatial, l2, mahalanobis, projection, mcd, mve); \
med, max (method: a depth name); sup:DEPTH[:fraction, default 0.1]; mean; cw-median; \
cw-mode[:bin width, default 1]";

#[derive(Debug, Parser)]
#[command(name = "modeloc", version, about = "Locate the main mode of contaminated point clouds")]
pub struct Cli {
    /// Worker threads (the MODELOC_THREADS variable takes precedence).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the main mode of a point CSV.
    Estimate(EstimateArgs),
    /// Run a Monte-Carlo grid and write a metrics table.
    Benchmark(BenchmarkArgs),
    /// Evaluate estimators on a calibration session with ground truth.
    RealEval(RealEvalArgs),
    /// Draw points, groups and centers as SVG.
    Plot(PlotArgs),
    /// Write one synthetic mixture as CSV or JSON.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonOptions {
    /// Significance level of the dip and normality tests.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Normality test used while refining: mardia or ks-chisq.
    #[arg(long, default_value = "mardia")]
    pub normality: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Uniform samples per dip calibration table.
    #[arg(long, default_value_t = crate::stattests::DEFAULT_BOOTSTRAP)]
    pub dip_boot: usize,
}

impl CommonOptions {
    fn estimator_options(&self) -> Result<EstimatorOptions> {
        crate::stattests::check_alpha(self.alpha)?;
        Ok(EstimatorOptions {
            alpha: self.alpha,
            normality: self.normality.parse::<NormalityTest>()?,
            dip_boot: self.dip_boot,
            ..EstimatorOptions::default()
        })
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV with a header; uses columns x,y if present, else every column
    /// except `label`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "bril:projection", help = ESTIMATOR_HELP)]
    pub estimator: String,
    #[command(flatten)]
    pub common: CommonOptions,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-row group labels as CSV.
    #[arg(long)]
    pub labels_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Grid file, or a preset name: table1, table2, table2_scaled,
    /// fig16_noise, fig17_size.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    /// Comma-separated estimator specs.
    #[arg(long, default_value = "bril:projection,mean", help = ESTIMATOR_HELP)]
    pub estimators: String,
    #[command(flatten)]
    pub common: CommonOptions,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the extension of --out by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Omit timings so the output depends only on the inputs.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct RealEvalArgs {
    /// Calibration CSV with header trial,target,x,y.
    #[arg(long)]
    pub data: PathBuf,
    /// JSON object mapping target ids to [x, y].
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long, default_value_t = 25)]
    pub draws: usize,
    #[arg(long, default_value_t = 1000)]
    pub draw_size: usize,
    #[arg(long, default_value_t = 25.0)]
    pub pixel_per_degree: f64,
    /// Keep only samples in the box XMIN,XMAX,YMIN,YMAX.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub range: Option<Vec<f64>>,
    /// Session name in the output (defaults to the data file stem).
    #[arg(long)]
    pub session: Option<String>,
    #[arg(long, default_value = "bril:spatial,cw-median,mean", help = ESTIMATOR_HELP)]
    pub estimators: String,
    #[command(flatten)]
    pub common: CommonOptions,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Points CSV (optional `label` column), estimate JSON or mixture JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Extra true-center marker X,Y.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub truth: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub clusters: usize,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.5)]
    pub inliers: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Parse the process arguments and run.
pub fn run() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    ExitCode::from(run_from(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock()))
}

/// Run with explicit arguments and streams; returns the exit code.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_INPUT;
            }
            let _ = write!(stdout, "{text}");
            return 0;
        }
    };
    let threads = std::env::var("MODELOC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .or(cli.threads);
    match dispatch(cli.command, threads, stdout) {
        Ok(()) => 0,
        Err(Failure::Input(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
        Err(Failure::Estimation(e)) => {
            let _ = writeln!(stderr, "estimation failed: {e}");
            EXIT_ESTIMATION
        }
    }
}

enum Failure {
    Input(Error),
    Estimation(Error),
}

fn input<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Input)
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(t) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::BadParameter(e.to_string()))?
            .install(f)),
        None => Ok(f()),
    }
}

fn dispatch(cmd: Command, threads: Option<usize>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Estimate(a) => cmd_estimate(a, threads, stdout),
        Command::Benchmark(a) => cmd_benchmark(a, threads, stdout),
        Command::RealEval(a) => cmd_real_eval(a, threads, stdout),
        Command::Plot(a) => cmd_plot(a, stdout),
        Command::Generate(a) => cmd_generate(a, stdout),
    }
}

/// Write to a file atomically enough for scripting: the file appears only
/// once the content is complete.
fn emit(out: &Option<PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => {
            let tmp = path.with_extension("partial");
            std::fs::write(&tmp, bytes)?;
            std::fs::rename(&tmp, path)?;
        }
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn parse_estimators(list: &str) -> Result<Vec<Estimator>> {
    let specs: Vec<Estimator> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if specs.is_empty() {
        return Err(Error::BadParameter("no estimators given".into()));
    }
    Ok(specs)
}

/// Points from a headed CSV, plus the `label` column when present.
pub fn read_points_csv(path: &Path) -> Result<(PointSet, Option<Vec<String>>)> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let label_col = headers.iter().position(|h| h == "label");
    let coord_cols: Vec<usize> = match (headers.iter().position(|h| h == "x"), headers.iter().position(|h| h == "y")) {
        (Some(x), Some(y)) => vec![x, y],
        _ => (0..headers.len()).filter(|&i| Some(i) != label_col).collect(),
    };
    if coord_cols.len() < 2 {
        return Err(Error::Parse("need at least two coordinate columns".into()));
    }
    let mut flat = Vec::new();
    let mut labels = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("line {}: {e}", row + 2)))?;
        for &c in &coord_cols {
            let field = rec.get(c).unwrap_or("").trim();
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: '{field}' is not a number", row + 2)))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("line {}: non-finite value", row + 2)));
            }
            flat.push(v);
        }
        if let Some(l) = label_col {
            labels.push(rec.get(l).unwrap_or("").to_string());
        }
    }
    if flat.is_empty() {
        return Err(Error::EmptyInput);
    }
    let points = PointSet::from_flat(flat, coord_cols.len())?;
    Ok((points, label_col.map(|_| labels)))
}

#[derive(Serialize)]
struct GroupJson {
    iteration: usize,
    size: usize,
    center: Vec<f64>,
    terminal: bool,
    members: Vec<usize>,
}

#[derive(Serialize)]
struct EstimateJson {
    estimator: String,
    seed: u64,
    alpha: f64,
    center: Vec<f64>,
    selected_group: Option<usize>,
    group_sizes: Vec<usize>,
    groups: Vec<GroupJson>,
    unassigned: Vec<usize>,
    diagnostics: serde_json::Value,
    points: Vec<Vec<f64>>,
}

fn cmd_estimate(a: EstimateArgs, threads: Option<usize>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let est: Estimator = input(a.estimator.parse())?;
    let opts = input(a.common.estimator_options())?;
    let (points, _) = input(read_points_csv(&a.input))?;
    let d = points.dim();
    if points.len() < d + 2 {
        return Err(Failure::Input(Error::InsufficientSamples {
            needed: d + 2,
            got: points.len(),
        }));
    }
    let rng = RngStream::new(a.common.seed, 0);
    let out = input(with_threads(threads, || est.estimate(&points, &opts, &rng)))?.map_err(Failure::Estimation)?;

    let (groups, selected, unassigned, diagnostics) = match &out.mode {
        Some(m) => (
            m.all_groups
                .iter()
                .map(|g| GroupJson {
                    iteration: g.iteration,
                    size: g.members.len(),
                    center: g.center.clone(),
                    terminal: g.terminal,
                    members: g.members.as_slice().to_vec(),
                })
                .collect::<Vec<_>>(),
            Some(m.selected_index),
            m.unassigned.as_slice().to_vec(),
            serde_json::to_value(&m.diagnostics).unwrap_or_default(),
        ),
        None => match &out.brl {
            Some(b) => {
                let members = b.normal.members.as_slice().to_vec();
                let unassigned = (0..points.len()).filter(|i| !b.normal.members.contains(*i)).collect();
                (
                    vec![GroupJson {
                        iteration: 1,
                        size: members.len(),
                        center: b.center.clone(),
                        terminal: true,
                        members,
                    }],
                    Some(0),
                    unassigned,
                    serde_json::json!({
                        "seed": b.seed,
                        "dip_trace": b.unimodal.p_trace,
                        "normal_trace": b.normal.p_trace,
                        "unimodal_size": b.unimodal.members.len(),
                    }),
                )
            }
            None => (Vec::new(), None, (0..points.len()).collect(), serde_json::Value::Null),
        },
    };
    let report = EstimateJson {
        estimator: est.to_string(),
        seed: a.common.seed,
        alpha: a.common.alpha,
        center: out.center.clone(),
        selected_group: selected,
        group_sizes: groups.iter().map(|g| g.size).collect(),
        groups,
        unassigned,
        diagnostics,
        points: points.to_rows(),
    };
    let mut text = serde_json::to_vec_pretty(&report).map_err(|e| Failure::Input(Error::Io(e.to_string())))?;
    text.push(b'\n');

    if let Some(path) = &a.labels_out {
        let mut label = vec!["unassigned".to_string(); points.len()];
        for (gi, g) in report.groups.iter().enumerate() {
            for &i in &g.members {
                label[i] = format!("group-{}", gi + 1);
            }
        }
        let mut csv = String::from("index,group\n");
        for (i, l) in label.iter().enumerate() {
            let _ = writeln!(csv, "{i},{l}");
        }
        input(emit(&Some(path.clone()), csv.as_bytes(), stdout))?;
    }
    input(emit(&a.out, &text, stdout))
}

fn load_grid(spec: &str) -> Result<Grid> {
    let preset = match spec {
        "table1" => Some(include_str!("../grids/table1.grid")),
        "table2" => Some(include_str!("../grids/table2.grid")),
        "table2_scaled" => Some(include_str!("../grids/table2_scaled.grid")),
        "fig16_noise" => Some(include_str!("../grids/fig16_noise.grid")),
        "fig17_size" => Some(include_str!("../grids/fig17_size.grid")),
        _ => None,
    };
    match preset {
        Some(text) if !Path::new(spec).exists() => Grid::from_toml_str(text),
        _ => Grid::load(Path::new(spec)),
    }
}

fn format_for(out: &Option<PathBuf>, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        _ => Format::Csv,
    })
}

fn cmd_benchmark(a: BenchmarkArgs, threads: Option<usize>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let grid = input(load_grid(&a.grid))?;
    let estimators = input(parse_estimators(&a.estimators))?;
    let mut cfg = BenchmarkConfig::new(estimators, a.reps, a.common.seed);
    cfg.options = input(a.common.estimator_options())?;
    cfg.timing = !a.no_timing;
    cfg.threads = threads;
    if a.reps == 0 {
        return Err(Failure::Input(Error::BadParameter("reps must be at least 1".into())));
    }
    let results = benchmark_grid(&grid, &cfg).map_err(|e| match e {
        Error::PlacementFailed(_) | Error::BadParameter(_) => Failure::Input(e),
        other => Failure::Estimation(other),
    })?;
    let mut buf = Vec::new();
    match format_for(&a.out, a.format) {
        Format::Csv => input(write_csv(&results, &mut buf))?,
        Format::Json => input(write_json(&grid, &cfg, &results, &mut buf))?,
    }
    input(emit(&a.out, &buf, stdout))
}

fn cmd_real_eval(a: RealEvalArgs, threads: Option<usize>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let estimators = input(parse_estimators(&a.estimators))?;
    let opts = input(a.common.estimator_options())?;
    let open = |p: &Path| std::fs::File::open(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())));
    let samples = input(open(&a.data).and_then(read_calibration))?;
    let truth = input(open(&a.truth).and_then(read_truth))?;
    let config = RealEvalConfig {
        draws: a.draws,
        draw_size: a.draw_size,
        pixel_per_degree: a.pixel_per_degree,
        range: a.range.map(|r| [r[0], r[1], r[2], r[3]]),
        timing: !a.no_timing,
        ..RealEvalConfig::default()
    };
    let session = a.session.clone().unwrap_or_else(|| {
        a.data
            .file_stem()
            .map_or("session".into(), |s| s.to_string_lossy().into_owned())
    });
    let rng = RngStream::new(a.common.seed, 0);
    let rows = input(with_threads(threads, || {
        real_eval(&session, &samples, &truth, &config, &estimators, &opts, &rng)
    }))?
    .map_err(Failure::Input)?;
    let mut buf = Vec::new();
    input(RealEvalRow::write_csv(&rows, config.pixel_per_degree, &mut buf))?;
    input(emit(&a.out, &buf, stdout))
}

fn cmd_generate(a: GenerateArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let cfg = MixtureConfig::new(a.n, a.clusters, a.noise, a.inliers);
    let inst = input(generate(&cfg, &RngStream::new(a.seed, 0)))?;
    let mut buf = Vec::new();
    match format_for(&a.out, a.format) {
        Format::Csv => input(inst.write_csv(&mut buf))?,
        Format::Json => {
            buf = input(inst.to_json())?.into_bytes();
            buf.push(b'\n');
        }
    }
    input(emit(&a.out, &buf, stdout))
}

/// What a plot shows: labeled series, loose points and cross markers.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct PlotData {
    pub points: Vec<[f64; 2]>,
    pub series: Vec<(String, Vec<usize>)>,
    pub loose: Vec<usize>,
    /// (class, position)
    pub markers: Vec<(String, [f64; 2])>,
}

fn xy(p: &[f64]) -> [f64; 2] {
    [p[0], p[1]]
}

fn plot_data_from(path: &Path, truth: Option<&[f64]>) -> Result<PlotData> {
    let text_start = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let first = text_start.iter().find(|b| !b.is_ascii_whitespace()).copied();
    let mut data = PlotData::default();
    if first == Some(b'{') {
        let v: serde_json::Value = serde_json::from_slice(&text_start).map_err(|e| Error::Parse(e.to_string()))?;
        if v.get("labels").is_some() && v.get("true_centers").is_some() {
            let inst: MixtureInstance = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            data.points = inst.points.iter().map(xy).collect();
            let mut names: Vec<_> = inst.labels.clone();
            names.sort();
            names.dedup();
            for l in names {
                let idx = (0..inst.labels.len()).filter(|&i| inst.labels[i] == l).collect();
                data.series.push((l.to_string(), idx));
            }
            for c in &inst.true_centers {
                data.markers.push(("truth".into(), xy(c)));
            }
        } else {
            let rows: Vec<Vec<f64>> = serde_json::from_value(v.get("points").cloned().unwrap_or_default())
                .map_err(|_| Error::Parse("estimate JSON lacks a 'points' array".into()))?;
            if rows.iter().any(|r| r.len() < 2) {
                return Err(Error::Parse("points need two coordinates".into()));
            }
            data.points = rows.iter().map(|r| xy(r)).collect();
            let groups = v.get("groups").and_then(|g| g.as_array()).cloned().unwrap_or_default();
            let mut assigned = vec![false; data.points.len()];
            for (gi, g) in groups.iter().enumerate() {
                let members: Vec<usize> = serde_json::from_value(g.get("members").cloned().unwrap_or_default())
                    .map_err(|_| Error::Parse("group without a members array".into()))?;
                if members.iter().any(|&i| i >= data.points.len()) {
                    return Err(Error::Parse("group member out of range".into()));
                }
                for &i in &members {
                    assigned[i] = true;
                }
                data.series.push((format!("group-{}", gi + 1), members));
            }
            data.loose = (0..data.points.len()).filter(|&i| !assigned[i]).collect();
            if !groups.is_empty() {
                if let Some(c) = v.get("center").and_then(|c| serde_json::from_value::<Vec<f64>>(c.clone()).ok()) {
                    if c.len() >= 2 {
                        data.markers.push(("estimate".into(), xy(&c)));
                    }
                }
            }
        }
    } else {
        let (points, labels) = read_points_csv(path)?;
        data.points = points.iter().map(xy).collect();
        match labels {
            Some(labels) => {
                let mut names = labels.clone();
                names.sort();
                names.dedup();
                for name in names {
                    let idx = (0..labels.len()).filter(|&i| labels[i] == name).collect();
                    data.series.push((name, idx));
                }
            }
            None => data.loose = (0..data.points.len()).collect(),
        }
    }
    if let Some(t) = truth {
        data.markers.push(("truth".into(), xy(t)));
    }
    Ok(data)
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Scatter plot as a standalone SVG document.
pub fn render_svg(data: &PlotData) -> String {
    const W: f64 = 640.0;
    const H: f64 = 640.0;
    const PAD: f64 = 30.0;
    let all = data.points.iter().chain(data.markers.iter().map(|(_, p)| p));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (W - 2.0 * PAD) / span;
    let sx = |x: f64| PAD + (x - x0) * scale;
    let sy = |y: f64| H - PAD - (y - y0) * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !data.loose.is_empty() {
        let _ = writeln!(s, r##"<g class="unassigned" fill="#b0b0b0">"##);
        for &i in &data.loose {
            let p = data.points[i];
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, sx(p[0]), sy(p[1]));
        }
        let _ = writeln!(s, "</g>");
    }
    for (k, (name, idx)) in data.series.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<g class="series" data-label="{}" fill="{}">"#,
            escape(name),
            PALETTE[k % PALETTE.len()]
        );
        for &i in idx {
            let p = data.points[i];
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#, sx(p[0]), sy(p[1]));
        }
        let _ = writeln!(s, "</g>");
    }
    for (class, p) in &data.markers {
        let (cx, cy) = (sx(p[0]), sy(p[1]));
        let color = if class == "estimate" { "black" } else { "#d00000" };
        let _ = writeln!(
            s,
            r#"<g class="{}-marker" stroke="{color}" stroke-width="2"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"#,
            escape(class),
            cx - 8.0,
            cy - 8.0,
            cx + 8.0,
            cy + 8.0,
            cx - 8.0,
            cy + 8.0,
            cx + 8.0,
            cy - 8.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_plot(a: PlotArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let data = input(plot_data_from(&a.input, a.truth.as_deref()))?;
    input(emit(&a.out, render_svg(&data).as_bytes(), stdout))
}
