//! CSV files written by the command line tool.
//!
//! * trials: `algorithm,T,trial,seed,regret,completed_steps,final_tv,final_price_0..m-1`
//! * aggregate: `algorithm,T,mean_regret,stderr,n_trials`
//! * exponent: `algorithm,slope,slope_stderr,intercept`
//!
//! Floats use Rust's shortest round-trip formatting, so identical runs give
//! byte-identical files.

use std::path::Path;

use crate::error::Result;
use crate::pricing::OracleSolution;
use crate::regret::RegretLedger;

use super::check::RegularityRow;
use super::demo::DemoReport;
use super::sweep::{HorizonAggregate, SweepResult, TrialRow};

pub const TRIALS_FILE: &str = "trials.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const EXPONENT_FILE: &str = "exponent.csv";
pub const CURVE_FILE: &str = "regret_curve.csv";
pub const REGULARITY_FILE: &str = "regularity.csv";
pub const SOLUTION_FILE: &str = "solution.csv";
pub const DEMO_FILE: &str = "demo_lower_bound.csv";

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(csv::Writer::from_path(path)?)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_trials(path: &Path, algorithm: &str, products: usize, rows: &[TrialRow]) -> Result<()> {
    let mut w = writer(path)?;
    let mut header: Vec<String> = [
        "algorithm",
        "T",
        "trial",
        "seed",
        "regret",
        "completed_steps",
        "final_tv",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..products).map(|j| format!("final_price_{j}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            algorithm.to_string(),
            r.horizon.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.regret.to_string(),
            r.completed_steps.to_string(),
            opt(r.final_tv),
        ];
        rec.extend(r.final_price.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate(path: &Path, algorithm: &str, aggregates: &[HorizonAggregate]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["algorithm", "T", "mean_regret", "stderr", "n_trials"])?;
    for a in aggregates {
        w.write_record([
            algorithm.to_string(),
            a.horizon.to_string(),
            a.mean_regret.to_string(),
            a.stderr.to_string(),
            a.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_exponent(path: &Path, sweep: &SweepResult) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["algorithm", "slope", "slope_stderr", "intercept"])?;
    let fit = sweep.exponent;
    w.write_record([
        sweep.algorithm.clone(),
        opt(fit.map(|f| f.slope)),
        opt(fit.map(|f| f.slope_stderr)),
        opt(fit.map(|f| f.intercept)),
    ])?;
    w.flush()?;
    Ok(())
}

/// Writes the three sweep files into `dir`.
pub fn write_sweep(dir: &Path, sweep: &SweepResult) -> Result<()> {
    write_trials(&dir.join(TRIALS_FILE), &sweep.algorithm, sweep.products, &sweep.rows)?;
    write_aggregate(&dir.join(AGGREGATE_FILE), &sweep.algorithm, &sweep.aggregates)?;
    write_exponent(&dir.join(EXPONENT_FILE), sweep)
}

/// Rounds at which the regret curve is sampled: the first 100, about a
/// thousand evenly spaced ones, and the last.
fn curve_rounds(horizon: u64) -> impl Fn(u64) -> bool {
    let stride = (horizon / 1000).max(1);
    move |t| t <= 100 || t % stride == 0 || t == horizon
}

pub fn write_curve(path: &Path, ledger: &RegretLedger) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "cumulative_regret"])?;
    let keep = curve_rounds(ledger.rounds());
    for (t, r) in ledger.regret_curve() {
        if keep(t) {
            w.write_record([t.to_string(), r.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_regularity(path: &Path, rows: &[RegularityRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "type",
        "product",
        "family",
        "alpha",
        "beta",
        "cost",
        "third_derivative_sup",
        "third_order_ok",
        "epsilon_margin",
        "second_order_ok",
    ])?;
    for r in rows {
        w.write_record([
            r.type_index.to_string(),
            r.product.to_string(),
            format!("{:?}", r.family),
            r.alpha.to_string(),
            r.beta.to_string(),
            r.cost.to_string(),
            r.report.third_derivative_sup.to_string(),
            r.report.third_order_ok.to_string(),
            r.report.epsilon_margin.to_string(),
            r.report.second_order_ok.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_solution(path: &Path, solution: &OracleSolution) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["product", "price", "expected_revenue"])?;
    for (j, p) in solution.price.iter().enumerate() {
        w.write_record([j.to_string(), p.to_string(), solution.revenue.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_demo(path: &Path, report: &DemoReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["quantity", "value"])?;
    let rows = [
        ("optimal_price", report.optimal_price),
        ("optimal_revenue", report.optimal_revenue),
        ("misestimated_price", report.misestimated_price),
        ("revenue_at_misestimated", report.revenue_at_misestimated),
        ("relative_loss", report.relative_loss),
    ];
    for (k, v) in rows {
        w.write_record([k.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
