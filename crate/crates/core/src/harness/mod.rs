//! Monte Carlo runner, parameter sweeps, and CSV emission.

mod config;
mod csv;
mod experiments;
mod runner;

pub use config::ExperimentConfig;
pub use csv::{fmt_sig9, Table};
pub use experiments::{
    converse_experiment, emit_exponent_curves, s_membership_experiment, sweep_p, ConverseReport, ConverseRow,
    CurveRow, SMembershipRow, SweepRow,
};
pub use runner::{
    run_trial, run_trials, run_trials_with, wilson_interval, AdversaryReport, Execution, RunSummary, TrialOutcome,
};
