//! Benchmark protocol: mask a complete dataset, impute it, score the result.

mod inject;
mod metrics;
mod report;
mod sweep;

pub use inject::{inject_missing, GroundTruth, InjectionParams, MaskedCell};
pub use metrics::{evaluate, evaluate_with_sources, Metrics};
pub use report::{write_csv, write_json, write_plot_data};
pub use sweep::{run_sweep, run_sweep_on, BenchReport, BenchRow, ExperimentSpec, Method, SweepAxis, Timing};
