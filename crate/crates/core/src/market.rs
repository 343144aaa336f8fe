//! Consumer population, demand and revenue.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::utility::{check_regularity, RegularityReport, UtilitySpec};

/// Prices may exceed the box by this much before being rejected.
pub const BOX_TOLERANCE: f64 = 1e-12;

/// Weights must sum to one within this tolerance.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// One consumer type: a separable utility with one component per product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumerType {
    pub utilities: Vec<UtilitySpec>,
}

impl ConsumerType {
    pub fn new(utilities: Vec<UtilitySpec>) -> Self {
        ConsumerType { utilities }
    }

    pub fn products(&self) -> usize {
        self.utilities.len()
    }
}

/// Consumer types together with their arrival probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    types: Vec<ConsumerType>,
    weights: Vec<f64>,
    sampler: WeightedIndex<f64>,
}

impl Population {
    pub fn new(types: Vec<ConsumerType>, weights: Vec<f64>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::Config("population has no consumer types".into()));
        }
        if types.len() != weights.len() {
            return Err(Error::Config(format!(
                "{} types but {} weights",
                types.len(),
                weights.len()
            )));
        }
        let m = types[0].products();
        if m == 0 {
            return Err(Error::Config("consumer types have no products".into()));
        }
        if let Some(i) = types.iter().position(|t| t.products() != m) {
            return Err(Error::Config(format!(
                "type {i} has {} utilities, expected {m}",
                types[i].products()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Config(format!("weights must be positive, got {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::Config(format!("weights sum to {sum}, not 1")));
        }
        let sampler = WeightedIndex::new(&weights)
            .map_err(|e| Error::Config(format!("invalid weights: {e}")))?;
        Ok(Population {
            types,
            weights,
            sampler,
        })
    }

    /// Like [`Population::new`] but rescales positive weights to sum to one.
    pub fn normalized(types: Vec<ConsumerType>, weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() || sum <= 0.0 {
            return Err(Error::Config(format!("weights sum to {sum}")));
        }
        Self::new(types, weights.iter().map(|w| w / sum).collect())
    }

    pub fn types(&self) -> &[ConsumerType] {
        &self.types
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn products(&self) -> usize {
        self.types[0].products()
    }

    /// Same types, different arrival weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.types.clone(), weights)
    }
}

/// Product costs; product `j` may be priced anywhere in `[c_j, c_j + 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketConfig {
    costs: Vec<f64>,
}

impl MarketConfig {
    pub fn new(costs: Vec<f64>) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::Config("no products".into()));
        }
        if let Some(c) = costs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::Config(format!("costs must be positive, got {c}")));
        }
        Ok(MarketConfig { costs })
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn products(&self) -> usize {
        self.costs.len()
    }

    pub fn price_box(&self, j: usize) -> (f64, f64) {
        (self.costs[j], self.costs[j] + 1.0)
    }

    pub fn check_price(&self, price: &[f64]) -> Result<()> {
        if price.len() != self.costs.len() {
            return Err(Error::Domain(format!(
                "price vector has {} entries, expected {}",
                price.len(),
                self.costs.len()
            )));
        }
        for (j, &p) in price.iter().enumerate() {
            let (lo, hi) = self.price_box(j);
            if !(p >= lo - BOX_TOLERANCE && p <= hi + BOX_TOLERANCE) {
                return Err(Error::Domain(format!(
                    "price {p} of product {j} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// A population facing a set of products.
#[derive(Debug, Clone, PartialEq)]
pub struct Market {
    pub population: Population,
    pub config: MarketConfig,
}

impl Market {
    pub fn new(population: Population, config: MarketConfig) -> Result<Self> {
        if population.products() != config.products() {
            return Err(Error::Config(format!(
                "utilities cover {} products but {} costs given",
                population.products(),
                config.products()
            )));
        }
        Ok(Market { population, config })
    }

    pub fn products(&self) -> usize {
        self.config.products()
    }

    pub fn types(&self) -> usize {
        self.population.len()
    }

    /// Regularity report for every (type, product) pair, type-major.
    pub fn regularity(&self) -> Vec<RegularityReport> {
        self.population
            .types()
            .iter()
            .flat_map(|t| {
                t.utilities
                    .iter()
                    .zip(self.config.costs())
                    .map(|(u, &c)| check_regularity(u, c).expect("costs validated positive"))
            })
            .collect()
    }

    pub fn is_regular(&self) -> bool {
        self.regularity().iter().all(RegularityReport::passes)
    }

    pub fn expected_revenue(&self, price: &[f64]) -> Result<f64> {
        expected_revenue(&self.population, price, &self.config)
    }

    /// Expected revenue from product `j` alone at price `p`, no box check.
    pub fn product_revenue(&self, j: usize, p: f64) -> f64 {
        product_revenue(&self.population, &self.config, j, p)
    }
}

/// Draws a type index with probability equal to its weight.
pub fn sample_type<R: Rng + ?Sized>(population: &Population, rng: &mut R) -> usize {
    population.sampler.sample(rng)
}

/// Utility-maximizing bundle of `consumer` at `price`.
pub fn demand(consumer: &ConsumerType, price: &[f64], config: &MarketConfig) -> Result<Vec<f64>> {
    config.check_price(price)?;
    if consumer.products() != price.len() {
        return Err(Error::Domain("consumer and price dimensions differ".into()));
    }
    Ok(consumer
        .utilities
        .iter()
        .zip(price)
        .map(|(u, &p)| u.quantity_at(p))
        .collect())
}

/// Margin earned on one consumer: `sum_j k_j (p_j - c_j)`.
pub fn realized_revenue(consumer: &ConsumerType, price: &[f64], config: &MarketConfig) -> Result<f64> {
    let k = demand(consumer, price, config)?;
    Ok(k.iter()
        .zip(price)
        .zip(config.costs())
        .map(|((k, p), c)| k * (p - c))
        .sum())
}

/// Exact expectation of [`realized_revenue`] over the type distribution.
pub fn expected_revenue(population: &Population, price: &[f64], config: &MarketConfig) -> Result<f64> {
    config.check_price(price)?;
    if population.products() != price.len() {
        return Err(Error::Domain("population and price dimensions differ".into()));
    }
    Ok((0..price.len())
        .map(|j| product_revenue(population, config, j, price[j]))
        .sum())
}

pub(crate) fn product_revenue(population: &Population, config: &MarketConfig, j: usize, p: f64) -> f64 {
    let margin = p - config.costs()[j];
    population
        .types()
        .iter()
        .zip(population.weights())
        .map(|(t, w)| w * t.utilities[j].quantity_at(p))
        .sum::<f64>()
        * margin
}
