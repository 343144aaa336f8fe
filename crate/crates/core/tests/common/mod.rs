//! Reference computations written from the closed forms, independent of the
//! library's solver.
#![allow(dead_code)]

use posted_price::{ConsumerType, Market, UtilityFamily, UtilitySpec};

/// Quantity at which the marginal utility equals `p`, or 0 above the choke price.
pub fn quantity(spec: &UtilitySpec, p: f64) -> f64 {
    let (a, b) = (spec.alpha(), spec.beta());
    match spec.family() {
        UtilityFamily::LogLike => (a / p - 1.0 / b).max(0.0),
        UtilityFamily::ExpLike => {
            if p < a * b {
                (a * b / p).ln() / b
            } else {
                0.0
            }
        }
    }
}

pub fn revenue(types: &[ConsumerType], weights: &[f64], cost: f64, j: usize, p: f64) -> f64 {
    types
        .iter()
        .zip(weights)
        .map(|(t, w)| w * quantity(&t.utilities[j], p))
        .sum::<f64>()
        * (p - cost)
}

/// Best of `points` evenly spaced prices on `[c, c + 1]`.
pub fn grid_argmax(types: &[ConsumerType], weights: &[f64], cost: f64, j: usize, points: usize) -> (f64, f64) {
    let mut best = (cost, f64::NEG_INFINITY);
    for k in 0..points {
        let p = cost + k as f64 / (points - 1) as f64;
        let r = revenue(types, weights, cost, j, p);
        if r > best.1 {
            best = (p, r);
        }
    }
    best
}

pub fn market_grid_argmax(m: &Market, j: usize, points: usize) -> (f64, f64) {
    grid_argmax(
        m.population.types(),
        m.population.weights(),
        m.config.costs()[j],
        j,
        points,
    )
}

/// Per-round expected revenue of the two-type example at `p`.
pub fn two_type_revenue(weights: [f64; 2], p: f64) -> f64 {
    let log = (1.0 / p - 1.0).max(0.0);
    let exp = if p < 1.0 { -p.ln() } else { 0.0 };
    (weights[0] * log + weights[1] * exp) * (p - 0.1)
}
