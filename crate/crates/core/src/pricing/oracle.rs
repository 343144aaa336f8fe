//! Revenue-maximizing price under a known type distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{ConsumerType, Market, MarketConfig};

/// Golden-section tolerance used for regret accounting.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is narrower
/// than `tol`. Returns the bracket midpoint and its value.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub price: Vec<f64>,
    pub revenue: f64,
}

/// Expected revenue of product `j` at `p` under arbitrary type weights.
pub fn weighted_product_revenue(
    types: &[ConsumerType],
    weights: &[f64],
    config: &MarketConfig,
    j: usize,
    p: f64,
) -> f64 {
    let demand: f64 = types
        .iter()
        .zip(weights)
        .map(|(t, w)| w * t.utilities[j].quantity_at(p))
        .sum();
    demand * (p - config.costs()[j])
}

/// Maximizes revenue of product `j` over its price box.
///
/// Each type's revenue is concave up to its choke price `v'(0)` and zero
/// beyond it, so the mixture is concave between consecutive choke prices.
/// Golden-section runs on each such piece.
fn maximize_product(types: &[ConsumerType], weights: &[f64], config: &MarketConfig, j: usize, tol: f64) -> (f64, f64) {
    let (lo, hi) = config.price_box(j);
    let mut knots: Vec<f64> = types
        .iter()
        .map(|t| t.utilities[j].choke_price())
        .filter(|&k| k > lo && k < hi)
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut edges = Vec::with_capacity(knots.len() + 2);
    edges.push(lo);
    edges.extend(knots);
    edges.push(hi);

    let f = |p: f64| weighted_product_revenue(types, weights, config, j, p);
    let mut best = (lo, f(lo));
    for w in edges.windows(2) {
        let (x, fx) = golden_section_max(f, w[0], w[1], tol);
        for (x, fx) in [(x, fx), (w[1], f(w[1]))] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

/// Maximizes expected revenue for the given weights without checking
/// regularity. `weights` need not be strictly positive.
pub fn maximize_for_weights(
    types: &[ConsumerType],
    weights: &[f64],
    config: &MarketConfig,
    tol: f64,
) -> Result<OracleSolution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if types.len() != weights.len() {
        return Err(Error::Domain("weights and types differ in length".into()));
    }
    let mut price = Vec::with_capacity(config.products());
    let mut revenue = 0.0;
    for j in 0..config.products() {
        let (p, r) = maximize_product(types, weights, config, j, tol);
        price.push(p);
        revenue += r;
    }
    Ok(OracleSolution { price, revenue })
}

/// Maximizes the true expected revenue without the regularity gate.
pub fn maximize_expected_revenue(market: &Market, tol: f64) -> Result<OracleSolution> {
    maximize_for_weights(
        market.population.types(),
        market.population.weights(),
        &market.config,
        tol,
    )
}

/// The revenue-maximizing price vector. Refuses models whose concavity is
/// not certified by the regularity checks.
pub fn oracle_optimal_price(market: &Market, tol: f64) -> Result<OracleSolution> {
    if let Some(pos) = market.regularity().iter().position(|r| !r.passes()) {
        let (i, j) = (pos / market.products(), pos % market.products());
        return Err(Error::Irregular(format!(
            "type {i} product {j}: concavity not certified"
        )));
    }
    maximize_expected_revenue(market, tol)
}
