use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::fit::{fit_power_law, PowerLawFit};
use super::trial::{trial_seed, Experiment, TrialOptions, TrialOutcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub horizon: u64,
    pub trial: usize,
    pub seed: u64,
    pub regret: f64,
    pub completed_steps: u32,
    pub final_tv: Option<f64>,
    pub final_price: Vec<f64>,
}

impl TrialRow {
    fn from_outcome(trial: usize, o: &TrialOutcome) -> Self {
        TrialRow {
            horizon: o.horizon,
            trial,
            seed: o.seed,
            regret: o.ledger.cumulative_regret(),
            completed_steps: o.completed_steps,
            final_tv: o.final_tv,
            final_price: o.final_price.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonAggregate {
    pub horizon: u64,
    pub mean_regret: f64,
    /// Standard error of the mean (0 for a single trial).
    pub stderr: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub algorithm: String,
    pub products: usize,
    pub rows: Vec<TrialRow>,
    pub aggregates: Vec<HorizonAggregate>,
    /// Slope of ln(mean regret) against ln T; absent when some mean regret
    /// is not positive.
    pub exponent: Option<PowerLawFit>,
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Runs `config.trials` trials at one horizon, in trial order.
pub fn run_trials(experiment: &Experiment, horizon: u64, workers: Option<usize>) -> Result<Vec<TrialOutcome>> {
    let seed = experiment.config.seed;
    pool(workers)?.install(|| {
        (0..experiment.config.trials)
            .into_par_iter()
            .map(|k| experiment.run_trial(horizon, trial_seed(seed, k), TrialOptions::default()))
            .collect()
    })
}

pub fn aggregate(horizon: u64, regrets: &[f64]) -> HorizonAggregate {
    let n = regrets.len();
    let mean = regrets.iter().sum::<f64>() / n as f64;
    let stderr = if n > 1 {
        let var = regrets.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    HorizonAggregate {
        horizon,
        mean_regret: mean,
        stderr,
        trials: n,
    }
}

/// Runs every (horizon, trial) pair and fits the regret growth exponent.
pub fn run_sweep(config: &ExperimentConfig, workers: Option<usize>) -> Result<SweepResult> {
    if config.horizons.len() < 3 {
        return Err(Error::Config(format!(
            "a sweep needs at least 3 horizons, got {}",
            config.horizons.len()
        )));
    }
    let experiment = Experiment::new(config.clone())?;
    let tasks: Vec<(u64, usize)> = config
        .horizons
        .iter()
        .flat_map(|&h| (0..config.trials).map(move |k| (h, k)))
        .collect();
    let rows: Vec<TrialRow> = pool(workers)?.install(|| {
        tasks
            .par_iter()
            .map(|&(h, k)| {
                experiment
                    .run_trial(h, trial_seed(config.seed, k), TrialOptions::default())
                    .map(|o| TrialRow::from_outcome(k, &o))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let aggregates: Vec<HorizonAggregate> = config
        .horizons
        .iter()
        .map(|&h| {
            let regrets: Vec<f64> = rows.iter().filter(|r| r.horizon == h).map(|r| r.regret).collect();
            aggregate(h, &regrets)
        })
        .collect();
    let points: Vec<(f64, f64)> = aggregates
        .iter()
        .map(|a| (a.horizon as f64, a.mean_regret))
        .collect();
    Ok(SweepResult {
        algorithm: config.algorithm.name().to_string(),
        products: experiment.market.products(),
        rows,
        aggregates,
        exponent: fit_power_law(&points).ok(),
    })
}

/// Rows for a single-horizon run.
pub fn rows_from_outcomes(outcomes: &[TrialOutcome]) -> Vec<TrialRow> {
    outcomes
        .iter()
        .enumerate()
        .map(|(k, o)| TrialRow::from_outcome(k, o))
        .collect()
}
