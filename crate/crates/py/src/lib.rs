//! Python bindings: utility specs, markets, the oracle solver, trials and
//! sweeps driven by JSON experiment configs.

use posted_price::experiment::{self, Experiment, ExperimentConfig, TrialOptions};
use posted_price::pricing::{maximize_expected_revenue, oracle_optimal_price, ORACLE_TOLERANCE};
use posted_price::{
    check_regularity, inverse_marginal, marginal_utility, models, ConsumerType, Error, Market as CoreMarket,
    MarketConfig, Population, TypeCounts, UtilityFamily, UtilitySpec as CoreSpec,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(posted_price, ConfigError, PyValueError, "Invalid configuration or model.");
create_exception!(posted_price, IrregularModelError, PyValueError, "Model fails a regularity check.");
create_exception!(posted_price, ProtocolError, PyRuntimeError, "Policy protocol violation.");

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Config(_) => ConfigError::new_err(msg),
        Error::Irregular(_) => IrregularModelError::new_err(msg),
        Error::Protocol(_) => ProtocolError::new_err(msg),
        Error::IndexOutOfRange { .. } => PyIndexError::new_err(msg),
        Error::Io(_) => PyOSError::new_err(msg),
        Error::Domain(_) | Error::EmptyObservation => PyValueError::new_err(msg),
    }
}

fn family(name: &str) -> PyResult<UtilityFamily> {
    match name {
        "log_like" | "log" => Ok(UtilityFamily::LogLike),
        "exp_like" | "exp" => Ok(UtilityFamily::ExpLike),
        other => Err(PyValueError::new_err(format!(
            "unknown utility family {other:?}, expected \"log_like\" or \"exp_like\""
        ))),
    }
}

fn family_name(f: UtilityFamily) -> &'static str {
    match f {
        UtilityFamily::LogLike => "log_like",
        UtilityFamily::ExpLike => "exp_like",
    }
}

/// Utility `alpha ln(1 + beta k)` ("log_like") or `alpha (1 - exp(-beta k))` ("exp_like").
#[pyclass(frozen, from_py_object, name = "UtilitySpec")]
#[derive(Clone, Copy)]
struct UtilitySpec(CoreSpec);

#[pymethods]
impl UtilitySpec {
    #[new]
    fn new(family_name: &str, alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(UtilitySpec(CoreSpec::new(family(family_name)?, alpha, beta).map_err(to_py)?))
    }

    #[getter]
    fn family(&self) -> &'static str {
        family_name(self.0.family())
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    fn value(&self, k: f64) -> f64 {
        self.0.value(k)
    }

    fn marginal(&self, k: f64) -> PyResult<f64> {
        marginal_utility(&self.0, k).map_err(to_py)
    }

    /// Quantity bought at price `p`.
    fn inverse_marginal(&self, p: f64) -> PyResult<f64> {
        inverse_marginal(&self.0, p).map_err(to_py)
    }

    fn second_derivative(&self, k: f64) -> f64 {
        self.0.second_derivative(k)
    }

    fn third_derivative(&self, k: f64) -> f64 {
        self.0.third_derivative(k)
    }

    fn choke_price(&self) -> f64 {
        self.0.choke_price()
    }

    fn check_regularity<'py>(&self, py: Python<'py>, cost: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = check_regularity(&self.0, cost).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("third_derivative_sup", r.third_derivative_sup)?;
        d.set_item("third_order_ok", r.third_order_ok)?;
        d.set_item("epsilon_margin", r.epsilon_margin)?;
        d.set_item("second_order_ok", r.second_order_ok)?;
        d.set_item("feasible_price_range", r.feasible_price_range.to_vec())?;
        d.set_item("passes", r.passes())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "UtilitySpec({:?}, alpha={}, beta={})",
            self.family(),
            self.0.alpha(),
            self.0.beta()
        )
    }
}

/// Consumer types with weights, and per-product costs.
#[pyclass(frozen, name = "Market")]
struct Market(CoreMarket);

#[pymethods]
impl Market {
    /// `types[i][j]` is type `i`'s utility for product `j`.
    #[new]
    fn new(weights: Vec<f64>, costs: Vec<f64>, types: Vec<Vec<UtilitySpec>>) -> PyResult<Self> {
        let types = types
            .into_iter()
            .map(|t| ConsumerType::new(t.into_iter().map(|u| u.0).collect()))
            .collect();
        let population = Population::new(types, weights).map_err(to_py)?;
        let config = MarketConfig::new(costs).map_err(to_py)?;
        Ok(Market(CoreMarket::new(population, config).map_err(to_py)?))
    }

    /// The two-type, one-product example with weights (0.1, 0.9) and cost 0.1.
    #[staticmethod]
    #[pyo3(signature = (weights = (0.1, 0.9)))]
    fn worked_example(weights: (f64, f64)) -> Self {
        Market(models::two_type_example_with_weights([weights.0, weights.1]))
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.0.population.weights().to_vec()
    }

    #[getter]
    fn costs(&self) -> Vec<f64> {
        self.0.config.costs().to_vec()
    }

    #[getter]
    fn types(&self) -> usize {
        self.0.types()
    }

    #[getter]
    fn products(&self) -> usize {
        self.0.products()
    }

    fn is_regular(&self) -> bool {
        self.0.is_regular()
    }

    fn expected_revenue(&self, price: Vec<f64>) -> PyResult<f64> {
        self.0.expected_revenue(&price).map_err(to_py)
    }

    /// Quantities bought by type `i` at `price`.
    fn demand(&self, i: usize, price: Vec<f64>) -> PyResult<Vec<f64>> {
        let types = self.0.population.types();
        let consumer = types.get(i).ok_or_else(|| {
            to_py(Error::IndexOutOfRange {
                index: i,
                len: types.len(),
            })
        })?;
        posted_price::demand(consumer, &price, &self.0.config).map_err(to_py)
    }

    /// Type indices of `n` arrivals drawn with `seed`.
    fn sample_types(&self, n: usize, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| posted_price::sample_type(&self.0.population, &mut rng))
            .collect()
    }

    /// Revenue-maximizing price vector and its expected revenue.
    #[pyo3(signature = (tol = ORACLE_TOLERANCE, allow_irregular = false))]
    fn optimal_price(&self, tol: f64, allow_irregular: bool) -> PyResult<(Vec<f64>, f64)> {
        let sol = if allow_irregular {
            maximize_expected_revenue(&self.0, tol)
        } else {
            oracle_optimal_price(&self.0, tol)
        }
        .map_err(to_py)?;
        Ok((sol.price, sol.revenue))
    }
}

#[pyfunction]
fn tv_distance(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    posted_price::tv_distance(&p, &q).map_err(to_py)
}

/// Empirical distribution of observed type indices over `types` types.
#[pyfunction]
fn empirical_weights(observed: Vec<usize>, types: usize) -> PyResult<Vec<f64>> {
    let mut counts = TypeCounts::new(types);
    for i in observed {
        counts.record(i).map_err(to_py)?;
    }
    counts.empirical_weights().map_err(to_py)
}

/// Regularity table of a model given as JSON (a full config or a bare model).
#[pyfunction]
fn check_model<'py>(py: Python<'py>, config_json: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let model = match ExperimentConfig::from_json(config_json) {
        Ok(c) => c.model,
        Err(e) => experiment::ModelConfig::from_json(config_json).map_err(|_| to_py(e))?,
    };
    experiment::check_model(&model)
        .map_err(to_py)?
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("type", r.type_index)?;
            d.set_item("product", r.product)?;
            d.set_item("family", family_name(r.family))?;
            d.set_item("third_derivative_sup", r.report.third_derivative_sup)?;
            d.set_item("epsilon_margin", r.report.epsilon_margin)?;
            d.set_item("failed", r.failed_conditions())?;
            Ok(d)
        })
        .collect()
}

/// Runs one trial of the configured policy for `horizon` rounds.
#[pyfunction]
#[pyo3(signature = (config_json, horizon, seed, curve = false))]
fn run_trial<'py>(
    py: Python<'py>,
    config_json: &str,
    horizon: u64,
    seed: u64,
    curve: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let config = ExperimentConfig::from_json(config_json).map_err(to_py)?;
    let outcome = py
        .detach(|| {
            let exp = Experiment::new(config)?;
            exp.run_trial(
                horizon,
                seed,
                TrialOptions {
                    keep_trajectory: curve,
                    decomposition: false,
                },
            )
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("horizon", outcome.horizon)?;
    d.set_item("seed", outcome.seed)?;
    d.set_item("regret", outcome.ledger.cumulative_regret())?;
    d.set_item("completed_steps", outcome.completed_steps)?;
    d.set_item("final_tv", outcome.final_tv)?;
    d.set_item("final_price", outcome.final_price)?;
    if curve {
        d.set_item("curve", outcome.ledger.regret_curve())?;
    }
    Ok(d)
}

/// Runs every configured horizon and trial and fits the regret exponent.
#[pyfunction]
#[pyo3(signature = (config_json, workers = None))]
fn run_sweep<'py>(py: Python<'py>, config_json: &str, workers: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let config = ExperimentConfig::from_json(config_json).map_err(to_py)?;
    let result = py.detach(|| experiment::run_sweep(&config, workers)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("algorithm", &result.algorithm)?;
    let aggregates: Vec<(u64, f64, f64, usize)> = result
        .aggregates
        .iter()
        .map(|a| (a.horizon, a.mean_regret, a.stderr, a.trials))
        .collect();
    d.set_item("aggregates", aggregates)?;
    let regrets: Vec<(u64, usize, f64)> = result.rows.iter().map(|r| (r.horizon, r.trial, r.regret)).collect();
    d.set_item("trials", regrets)?;
    d.set_item("slope", result.exponent.map(|f| f.slope))?;
    d.set_item("slope_stderr", result.exponent.map(|f| f.slope_stderr))?;
    Ok(d)
}

/// Prices the worked example with the true and with swapped weights.
#[pyfunction]
fn demo_lower_bound<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let r = experiment::demo_lower_bound().map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("optimal_price", r.optimal_price)?;
    d.set_item("optimal_revenue", r.optimal_revenue)?;
    d.set_item("misestimated_weights", r.misestimated_weights)?;
    d.set_item("misestimated_price", r.misestimated_price)?;
    d.set_item("revenue_at_misestimated", r.revenue_at_misestimated)?;
    d.set_item("relative_loss", r.relative_loss)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "posted_price")]
fn posted_price_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<UtilitySpec>()?;
    m.add_class::<Market>()?;
    m.add_function(wrap_pyfunction!(tv_distance, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_weights, m)?)?;
    m.add_function(wrap_pyfunction!(check_model, m)?)?;
    m.add_function(wrap_pyfunction!(run_trial, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(demo_lower_bound, m)?)?;
    let py = m.py();
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("IrregularModelError", py.get_type::<IrregularModelError>())?;
    m.add("ProtocolError", py.get_type::<ProtocolError>())?;
    Ok(())
}
