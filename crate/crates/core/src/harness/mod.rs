//! Experiment harness: configuration, trace files, evaluation, and sweeps.

mod config;
mod eval;
mod trace_io;

pub use config::{
    parse_alphas, ExperimentConfig, TraceSource, Trajectory, DEFAULT_ALPHAS, DEFAULT_K,
    DEFAULT_SEED,
};
pub use eval::{
    cdf_csv, evaluate, load_trace, run_eval, run_sweep, simulate_trace, summary_csv, sweep_csv,
    sweep_w, write_outputs, Evaluation, Method, MethodResult, SweepRow, SUMMARY_HEADER,
};
pub use trace_io::{ingest_trace, write_trace};
