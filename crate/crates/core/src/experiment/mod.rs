//! Experiment orchestration behind the command line tool.

mod check;
mod config;
mod demo;
mod fit;
pub mod output;
mod sweep;
mod trial;

pub use check::{check_model, RegularityRow};
pub use config::{Algorithm, ExperimentConfig, GeometricParams, ModelConfig};
pub use demo::{demo_lower_bound, DemoReport};
pub use fit::{fit_power_law, PowerLawFit};
pub use sweep::{aggregate, rows_from_outcomes, run_sweep, run_trials, HorizonAggregate, SweepResult, TrialRow};
pub use trial::{trial_seed, Experiment, TrialOptions, TrialOutcome};
