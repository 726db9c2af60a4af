use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, TraceSource, Trajectory};
use super::trace_io::ingest_trace;
use crate::baselines::gp_tailored_radius;
use crate::confidence::LocationWindow;
use crate::error::{Error, Result};
use crate::metrics::{aed, sed, summarize, EmpiricalCdf, EvalRecord, SummaryRow};
use crate::sim::{self, default_floorplan, Trace, TraceEntry};
use crate::special_math::Probability;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Cone { alpha: Probability },
    GpTailored,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Cone { .. } => "cone",
            Method::GpTailored => "gp",
        }
    }

    pub fn alpha(&self) -> Option<Probability> {
        match self {
            Method::Cone { alpha } => Some(*alpha),
            Method::GpTailored => None,
        }
    }

    /// File-name stem, e.g. `cone_a0.95` or `gp`.
    pub fn label(&self) -> String {
        match self {
            Method::Cone { alpha } => format!("cone_a{alpha}"),
            Method::GpTailored => "gp".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub records: Vec<EvalRecord>,
    pub summary: SummaryRow,
}

impl MethodResult {
    pub fn aed_cdf(&self) -> Result<EmpiricalCdf> {
        EmpiricalCdf::new(&self.records.iter().map(aed).collect::<Vec<_>>())
    }

    pub fn sed_cdf(&self) -> Result<EmpiricalCdf> {
        EmpiricalCdf::new(&self.records.iter().map(sed).collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub w: usize,
    pub fixes: usize,
    pub results: Vec<MethodResult>,
}

impl Evaluation {
    pub fn result(&self, method: Method) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }
}

/// Builds the trace a config points at: a simulated session or a file.
pub fn load_trace(config: &ExperimentConfig) -> Result<Trace> {
    match &config.source {
        TraceSource::File(path) => ingest_trace(path),
        TraceSource::Simulated => simulate_trace(config),
    }
}

pub fn simulate_trace(config: &ExperimentConfig) -> Result<Trace> {
    config.validate()?;
    let plan = default_floorplan();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    match config.trajectory {
        Trajectory::Survey => {
            let points = sim::survey_points(&plan, config.test_points, &mut rng)?;
            sim::simulate_session(
                &plan,
                &points,
                &config.channel,
                config.k,
                config.samples_per_point,
                &mut rng,
            )
        }
        Trajectory::Walk => {
            let points =
                sim::waypoint_walk(&plan, config.walk_speed, 1.0, config.walk_fixes, &mut rng)?;
            sim::simulate_session(&plan, &points, &config.channel, config.k, 1, &mut rng)
        }
    }
}

/// Streams the trace through a sliding window and scores every method on
/// each fix past priming.
pub fn evaluate(trace: &[TraceEntry], config: &ExperimentConfig) -> Result<Evaluation> {
    config.validate()?;
    if config.baseline {
        if let Some(pos) = trace.iter().position(|e| e.candidates.is_empty()) {
            return Err(Error::BaselineUnavailable(format!(
                "fix {pos} (t={}) has no candidate grid points; disable the baseline to evaluate this trace",
                trace[pos].timestamp
            )));
        }
    }

    let mut methods: Vec<Method> = config
        .alphas
        .iter()
        .map(|&alpha| Method::Cone { alpha })
        .collect();
    if config.baseline {
        methods.push(Method::GpTailored);
    }
    let mut records: Vec<Vec<EvalRecord>> = vec![Vec::new(); methods.len()];

    let mut window = LocationWindow::new(config.w)?;
    let mut fixes = 0;
    for entry in trace {
        window.push(entry.estimate);
        if window.len() < 2 || !(window.is_primed() || config.include_priming) {
            continue;
        }
        fixes += 1;
        let actual = entry.error();
        for (method, out) in methods.iter().zip(records.iter_mut()) {
            let radius = match method {
                Method::Cone { alpha } => window.estimate(*alpha)?.radius,
                Method::GpTailored => {
                    let cands = entry.candidate_set().expect("checked above");
                    gp_tailored_radius(&cands, config.gp_factor)?
                }
            };
            out.push(EvalRecord::new(actual, radius)?);
        }
    }
    if fixes == 0 {
        return Err(Error::InsufficientSamples {
            required: config.w,
            got: trace.len(),
        });
    }

    let results = methods
        .into_iter()
        .zip(records)
        .map(|(method, records)| {
            let summary = summarize(&records)?;
            Ok(MethodResult {
                method,
                records,
                summary,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Evaluation {
        w: config.w,
        fixes,
        results,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub const SUMMARY_HEADER: &str =
    "method,alpha,w,count,median_aed,inside_fraction,median_positive_sed,median_negative_sed";

pub fn summary_csv(eval: &Evaluation) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in &eval.results {
        let s = &r.summary;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.method.name(),
            r.method.alpha().map(|a| a.to_string()).unwrap_or_default(),
            eval.w,
            s.count,
            s.median_aed,
            s.inside_fraction,
            opt(s.median_positive_sed),
            opt(s.median_negative_sed),
        );
    }
    out
}

pub fn cdf_csv(cdf: &EmpiricalCdf) -> String {
    let mut out = String::from("value,fraction\n");
    for (v, f) in cdf.points() {
        let _ = writeln!(out, "{v},{f}");
    }
    out
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Writes `summary.csv` and one `cdf_<method>_<metric>.csv` per method and
/// metric into `dir`. Returns the paths written.
pub fn write_outputs(eval: &Evaluation, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let summary = dir.join("summary.csv");
    write_file(&summary, &summary_csv(eval))?;
    written.push(summary);
    for r in &eval.results {
        for (metric, cdf) in [("aed", r.aed_cdf()?), ("sed", r.sed_cdf()?)] {
            let path = dir.join(format!("cdf_{}_{metric}.csv", r.method.label()));
            write_file(&path, &cdf_csv(&cdf))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Loads the configured trace, evaluates it, and writes all output files.
pub fn run_eval(config: &ExperimentConfig, out_dir: &Path) -> Result<(Evaluation, Vec<PathBuf>)> {
    let trace = load_trace(config)?;
    let eval = evaluate(&trace, config)?;
    let files = write_outputs(&eval, out_dir)?;
    Ok((eval, files))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub w: usize,
    pub alpha: Probability,
    pub median_aed: f64,
    pub inside_fraction: f64,
}

/// Evaluates the window estimator at each `w` on one shared trace.
pub fn sweep_w(
    config: &ExperimentConfig,
    w_values: &[usize],
    trace: &[TraceEntry],
) -> Result<Vec<SweepRow>> {
    if let Some(w) = w_values.iter().find(|w| **w < 2) {
        return Err(Error::Config(format!("w must be at least 2, got {w}")));
    }
    let mut rows = Vec::new();
    for &w in w_values {
        let cfg = ExperimentConfig {
            w,
            baseline: false,
            ..config.clone()
        };
        let eval = evaluate(trace, &cfg)?;
        rows.extend(eval.results.iter().map(|r| SweepRow {
            w,
            alpha: r.method.alpha().expect("window estimator only"),
            median_aed: r.summary.median_aed,
            inside_fraction: r.summary.inside_fraction,
        }));
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("w,alpha,median_aed,inside_fraction\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.w, r.alpha, r.median_aed, r.inside_fraction
        );
    }
    out
}

pub fn run_sweep(
    config: &ExperimentConfig,
    w_values: &[usize],
    out: &Path,
) -> Result<Vec<SweepRow>> {
    let trace = if w_values.is_empty() {
        Trace::new()
    } else {
        load_trace(config)?
    };
    let rows = sweep_w(config, w_values, &trace)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    write_file(out, &sweep_csv(&rows))?;
    Ok(rows)
}
