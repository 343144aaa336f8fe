use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::models::{two_type_example, two_type_example_with_weights};
use crate::pricing::{maximize_expected_revenue, oracle_optimal_price, ORACLE_TOLERANCE};

/// Revenue lost by pricing against a badly estimated type distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub true_weights: Vec<f64>,
    pub optimal_price: f64,
    pub optimal_revenue: f64,
    pub misestimated_weights: Vec<f64>,
    pub misestimated_price: f64,
    /// True expected revenue earned at the misestimated price.
    pub revenue_at_misestimated: f64,
    pub relative_loss: f64,
}

/// Two types (10% log-utility, 90% exponential-utility), one product at
/// cost 0.1, priced once with the true weights and once with the weights
/// swapped.
pub fn demo_lower_bound() -> Result<DemoReport> {
    let truth = two_type_example();
    let wrong = two_type_example_with_weights([0.9, 0.1]);
    let best = oracle_optimal_price(&truth, ORACLE_TOLERANCE)?;
    let mis = maximize_expected_revenue(&wrong, ORACLE_TOLERANCE)?;
    let earned = truth.expected_revenue(&mis.price)?;
    Ok(DemoReport {
        true_weights: truth.population.weights().to_vec(),
        optimal_price: best.price[0],
        optimal_revenue: best.revenue,
        misestimated_weights: wrong.population.weights().to_vec(),
        misestimated_price: mis.price[0],
        revenue_at_misestimated: earned,
        relative_loss: (best.revenue - earned) / best.revenue,
    })
}
