//! Command-line harness: evaluate confidence estimators on simulated or
//! recorded traces.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cone::harness::{
    ingest_trace, parse_alphas, run_eval, run_sweep, simulate_trace, write_trace, ExperimentConfig,
    TraceSource, Trajectory,
};
use cone::Result;

#[derive(Parser, Debug)]
#[command(
    name = "cone",
    version,
    about = "Sliding-window confidence radii for location estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the window estimator (and the grid baseline) and write summary and CDF files.
    Eval {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory.
        #[arg(long, default_value = "cone-out")]
        out: PathBuf,
    },
    /// Evaluate a range of window sizes on one trace.
    SweepW {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated window sizes.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
        w_values: Vec<usize>,
        /// Output CSV.
        #[arg(long, default_value = "sweep_w.csv")]
        out: PathBuf,
    },
    /// Simulate a session on the synthetic testbed and write it as a trace file.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "trace.csv")]
        out: PathBuf,
    },
    /// Validate a trace file and print what it contains.
    IngestCheck { path: PathBuf },
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Window size.
    #[arg(long)]
    w: Option<usize>,
    /// Comma-separated confidence levels in (0, 1).
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    gp_factor: Option<f64>,
    /// Candidate grid points reported by the localizer.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trace file to evaluate instead of a simulated session.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Evaluate the grid-candidate baseline (true/false).
    #[arg(long)]
    baseline: Option<bool>,
    /// Score fixes produced before the window filled up.
    #[arg(long)]
    include_priming: bool,
    #[arg(long)]
    tx_power: Option<f64>,
    #[arg(long)]
    path_loss_exp: Option<f64>,
    /// Shadowing noise, dB.
    #[arg(long)]
    noise_sd: Option<f64>,
    /// survey | walk
    #[arg(long)]
    trajectory: Option<String>,
    #[arg(long)]
    test_points: Option<usize>,
    #[arg(long)]
    samples_per_point: Option<usize>,
    #[arg(long)]
    walk_fixes: Option<usize>,
    #[arg(long)]
    walk_speed: Option<f64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            cfg.merge_file(path)?;
        }
        if let Some(v) = self.w {
            cfg.w = v;
        }
        if let Some(v) = &self.alphas {
            cfg.alphas = parse_alphas(v)?;
        }
        if let Some(v) = self.gp_factor {
            cfg.gp_factor = v;
        }
        if let Some(v) = self.k {
            cfg.k = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.trace {
            cfg.source = TraceSource::File(v.clone());
        }
        if let Some(v) = self.baseline {
            cfg.baseline = v;
        }
        if self.include_priming {
            cfg.include_priming = true;
        }
        if let Some(v) = self.tx_power {
            cfg.channel.tx_power = v;
        }
        if let Some(v) = self.path_loss_exp {
            cfg.channel.path_loss_exp = v;
        }
        if let Some(v) = self.noise_sd {
            cfg.channel.noise_sd = v;
        }
        if let Some(v) = &self.trajectory {
            cfg.set("trajectory", v)?;
        }
        if let Some(v) = self.test_points {
            cfg.test_points = v;
        }
        if let Some(v) = self.samples_per_point {
            cfg.samples_per_point = v;
        }
        if let Some(v) = self.walk_fixes {
            cfg.walk_fixes = v;
        }
        if let Some(v) = self.walk_speed {
            cfg.walk_speed = v;
        }
        cfg.validate()?;
        if let Some(path) = &self.config {
            eprintln!("config: {}", path.display());
        }
        match &cfg.source {
            TraceSource::File(p) => eprintln!("trace: {}", p.display()),
            TraceSource::Simulated => {
                let kind = match cfg.trajectory {
                    Trajectory::Survey => "survey",
                    Trajectory::Walk => "walk",
                };
                eprintln!("trace: simulated ({kind})");
            }
        }
        eprintln!("seed: {}", cfg.seed);
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval { config, out } => {
            let cfg = config.resolve()?;
            let (eval, files) = run_eval(&cfg, &out)?;
            for f in &files {
                eprintln!("wrote: {}", f.display());
            }
            println!("fixes evaluated: {}", eval.fixes);
            for r in &eval.results {
                let s = &r.summary;
                println!(
                    "{:<12} median AED {:.3} m  inside {:.1}%",
                    r.method.label(),
                    s.median_aed,
                    100.0 * s.inside_fraction
                );
            }
        }
        Command::SweepW {
            config,
            w_values,
            out,
        } => {
            let cfg = config.resolve()?;
            let rows = run_sweep(&cfg, &w_values, &out)?;
            eprintln!("wrote: {}", out.display());
            for r in rows {
                println!(
                    "w={:<4} alpha={:<7} median AED {:.3} m  inside {:.1}%",
                    r.w,
                    r.alpha,
                    r.median_aed,
                    100.0 * r.inside_fraction
                );
            }
        }
        Command::Simulate { config, out } => {
            let cfg = config.resolve()?;
            let trace = simulate_trace(&cfg)?;
            write_trace(&out, &trace)?;
            eprintln!("wrote: {}", out.display());
            println!("fixes: {}", trace.len());
        }
        Command::IngestCheck { path } => {
            eprintln!("trace: {}", path.display());
            let trace = ingest_trace(&path)?;
            let k = trace.first().map_or(0, |e| e.candidates.len());
            println!("fixes: {}", trace.len());
            println!("candidates per fix: {k}");
            if let (Some(first), Some(last)) = (trace.first(), trace.last()) {
                println!("time span: {} .. {}", first.timestamp, last.timestamp);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
