//! Seeded Monte Carlo sweeps over the three architectures and their CSV
//! persistence.

mod config;
mod csv_io;
mod sweep;
mod trial;

pub use config::{
    parse_grid, parse_kv, CsiMode, ExperimentConfig, PahpEstimator, Scenario, SelectionRule,
    SweepVariable,
};
pub use csv_io::{emit_csv, parse_csv, read_csv, write_csv, CSV_HEADER};
pub use sweep::{aggregate, run_sweep, SweepResult, SweepRow};
pub use trial::{run_trial, CsiKind, Metric, Sample, SimContext, TrialFailure, TrialOutcome};
