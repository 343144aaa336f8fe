//! Expected-revenue regret against the oracle price.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{expected_revenue, MarketConfig, Population};

/// Per-round terms of the regret decomposition: distance of the posted
/// price from the optimum under the latest estimate, and the estimate's
/// total-variation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub price_distance: f64,
    pub tv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: u64,
    pub price: Vec<f64>,
    pub revenue: f64,
    pub gap: f64,
    pub decomposition: Option<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretLedger {
    optimal_per_round: f64,
    keep_trajectory: bool,
    trajectory: Vec<RoundRecord>,
    rounds: u64,
    cumulative: f64,
    min_gap: f64,
}

impl RegretLedger {
    /// Ledger that keeps every round.
    pub fn new(optimal_per_round: f64) -> Self {
        Self::with_trajectory(optimal_per_round, true)
    }

    /// Ledger that keeps only running totals.
    pub fn summary(optimal_per_round: f64) -> Self {
        Self::with_trajectory(optimal_per_round, false)
    }

    fn with_trajectory(optimal_per_round: f64, keep_trajectory: bool) -> Self {
        RegretLedger {
            optimal_per_round,
            keep_trajectory,
            trajectory: Vec::new(),
            rounds: 0,
            cumulative: 0.0,
            min_gap: f64::INFINITY,
        }
    }

    pub fn optimal_per_round(&self) -> f64 {
        self.optimal_per_round
    }

    /// Records round `t` with its expected revenue computed exactly.
    pub fn record_round(
        &mut self,
        t: u64,
        posted: &[f64],
        population: &Population,
        config: &MarketConfig,
    ) -> Result<f64> {
        let revenue = expected_revenue(population, posted, config)?;
        self.record_evaluated(t, posted, revenue, None)
    }

    /// Records round `t` whose expected revenue the caller already computed.
    pub fn record_evaluated(
        &mut self,
        t: u64,
        posted: &[f64],
        revenue: f64,
        decomposition: Option<Decomposition>,
    ) -> Result<f64> {
        if t != self.rounds + 1 {
            return Err(Error::Protocol(format!(
                "round {t} recorded after round {}",
                self.rounds
            )));
        }
        let gap = self.optimal_per_round - revenue;
        self.rounds = t;
        self.cumulative += gap;
        self.min_gap = self.min_gap.min(gap);
        if self.keep_trajectory {
            self.trajectory.push(RoundRecord {
                t,
                price: posted.to_vec(),
                revenue,
                gap,
                decomposition,
            });
        }
        Ok(gap)
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn cumulative_regret(&self) -> f64 {
        self.cumulative
    }

    /// Smallest per-round gap seen, `+inf` when empty.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    pub fn trajectory(&self) -> &[RoundRecord] {
        &self.trajectory
    }

    /// `(t, regret up to t)` for every kept round.
    pub fn regret_curve(&self) -> Vec<(u64, f64)> {
        let mut acc = 0.0;
        self.trajectory
            .iter()
            .map(|r| {
                acc += r.gap;
                (r.t, acc)
            })
            .collect()
    }
}
