use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use posted_price::experiment::{
    check_model, demo_lower_bound, output, rows_from_outcomes, run_sweep, trial_seed, Experiment,
    ExperimentConfig, ModelConfig, TrialOptions,
};
use posted_price::{Error, Result};

#[derive(Parser)]
#[command(name = "posted-price", version, about = "Online posted-price experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Overrides,
}

#[derive(Args, Default)]
struct Overrides {
    /// Trials per horizon.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV output.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Initial exploration length of the geometric policy.
    #[arg(long = "L", global = true)]
    initial_len: Option<u64>,
    /// Growth ratio of the geometric policy's periods.
    #[arg(long = "S", global = true)]
    growth: Option<u64>,
    /// Run even if the model fails the regularity checks.
    #[arg(long, global = true)]
    allow_irregular: bool,
    /// Worker threads for trials (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate regularity checks for every type and product.
    Check { config: PathBuf },
    /// Compute the optimal price under the true type distribution.
    Solve { config: PathBuf },
    /// Run one trial and write its regret curve.
    Simulate {
        config: PathBuf,
        #[arg(long = "T")]
        horizon: u64,
    },
    /// Run all trials on all horizons and fit the regret exponent.
    Sweep { config: PathBuf },
    /// Price the two-type example with swapped weights.
    DemoLowerBound,
}

impl Overrides {
    fn apply(&self, mut config: ExperimentConfig) -> ExperimentConfig {
        if let Some(t) = self.trials {
            config.trials = t;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(l) = self.initial_len {
            config.geometric.initial_len = l;
        }
        if let Some(s) = self.growth {
            config.geometric.growth = s;
        }
        if self.out.is_some() {
            config.output = self.out.clone();
        }
        config.allow_irregular |= self.allow_irregular;
        config
    }
}

/// Accepts a full experiment config or a bare model.
fn load_model(path: &Path) -> Result<ModelConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_json(&text)
        .map(|c| c.model)
        .or_else(|e| ModelConfig::from_json(&text).map_err(|_| e))
}

fn check(path: &Path, opts: &Overrides) -> Result<()> {
    let rows = check_model(&load_model(path)?)?;
    println!("type product family     alpha      beta       cost       sup v'''   eps        result");
    let mut failures = Vec::new();
    for r in &rows {
        let failed = r.failed_conditions();
        println!(
            "{:<4} {:<7} {:<10} {:<10.6} {:<10.6} {:<10.6} {:<10.6} {:<10.6} {}",
            r.type_index,
            r.product,
            format!("{:?}", r.family),
            r.alpha,
            r.beta,
            r.cost,
            r.report.third_derivative_sup,
            r.report.epsilon_margin,
            if failed.is_empty() { "ok".to_string() } else { failed.join(",") }
        );
        for f in failed {
            failures.push(format!("type {} product {}: {f}", r.type_index, r.product));
        }
    }
    if let Some(dir) = &opts.out {
        output::write_regularity(&dir.join(output::REGULARITY_FILE), &rows)?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::Irregular(failures.join("; ")))
    }
}

fn experiment(path: &Path, opts: &Overrides) -> Result<Experiment> {
    Experiment::new(opts.apply(ExperimentConfig::load(path)?))
}

fn solve(path: &Path, opts: &Overrides) -> Result<()> {
    let exp = experiment(path, opts)?;
    for (j, p) in exp.oracle.price.iter().enumerate() {
        println!("product {j}: price {p:.6}");
    }
    println!("expected revenue per round: {:.6}", exp.oracle.revenue);
    if let Some(dir) = &exp.config.output {
        output::write_solution(&dir.join(output::SOLUTION_FILE), &exp.oracle)?;
    }
    Ok(())
}

fn simulate(path: &Path, horizon: u64, opts: &Overrides) -> Result<()> {
    let exp = experiment(path, opts)?;
    let seed = trial_seed(exp.config.seed, 0);
    let outcome = exp.run_trial(
        horizon,
        seed,
        TrialOptions {
            keep_trajectory: true,
            decomposition: false,
        },
    )?;
    let name = exp.config.algorithm.name();
    println!("algorithm {name}, T = {horizon}, trial seed {seed}");
    println!("cumulative regret: {:.6}", outcome.ledger.cumulative_regret());
    println!("completed search steps: {}", outcome.completed_steps);
    if let Some(tv) = outcome.final_tv {
        println!("final TV distance: {tv:.6}");
    }
    println!("final price: {:?}", outcome.final_price);
    println!("optimal price: {:?}", exp.oracle.price);
    if let Some(dir) = &exp.config.output {
        output::write_trials(
            &dir.join(output::TRIALS_FILE),
            name,
            exp.market.products(),
            &rows_from_outcomes(std::slice::from_ref(&outcome)),
        )?;
        output::write_curve(&dir.join(output::CURVE_FILE), &outcome.ledger)?;
    }
    Ok(())
}

fn sweep(path: &Path, opts: &Overrides) -> Result<()> {
    let config = opts.apply(ExperimentConfig::load(path)?);
    let result = run_sweep(&config, opts.workers)?;
    println!("algorithm {}, {} trials per horizon", result.algorithm, config.trials);
    println!("{:>10} {:>14} {:>12}", "T", "mean regret", "stderr");
    for a in &result.aggregates {
        println!("{:>10} {:>14.4} {:>12.4}", a.horizon, a.mean_regret, a.stderr);
    }
    match result.exponent {
        Some(f) => println!("fitted exponent: {:.4} +/- {:.4}", f.slope, f.slope_stderr),
        None => println!("fitted exponent: undefined (non-positive regret)"),
    }
    if let Some(dir) = &config.output {
        output::write_sweep(dir, &result)?;
    }
    Ok(())
}

fn demo(opts: &Overrides) -> Result<()> {
    let r = demo_lower_bound()?;
    println!("true weights {:?}", r.true_weights);
    println!("  optimal price {:.6}, expected revenue {:.6}", r.optimal_price, r.optimal_revenue);
    println!("misestimated weights {:?}", r.misestimated_weights);
    println!("  optimal price under them {:.6}", r.misestimated_price);
    println!("  true expected revenue there {:.6}", r.revenue_at_misestimated);
    println!("relative loss {:.2}%", 100.0 * r.relative_loss);
    if let Some(dir) = &opts.out {
        output::write_demo(&dir.join(output::DEMO_FILE), &r)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.opts;
    let result = match &cli.command {
        Command::Check { config } => check(config, opts),
        Command::Solve { config } => solve(config, opts),
        Command::Simulate { config, horizon } => simulate(config, *horizon, opts),
        Command::Sweep { config } => sweep(config, opts),
        Command::DemoLowerBound => demo(opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
