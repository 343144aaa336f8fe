use crate::error::{Error, Result};
use crate::estimation::TypeCounts;
use crate::market::MarketConfig;

use super::schedule::{GeometricSchedule, Phase};
use super::search::SearchState;
use super::{check_observation, PricingPolicy};

/// Geometric learning: after an initial exploration at cost, each period of
/// geometrically growing length re-estimates the type distribution from all
/// arrivals so far, runs a short warm-started search and exploits the result.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricPolicy {
    costs: Vec<f64>,
    types: usize,
    schedule: GeometricSchedule,
    round: u64,
    counts: TypeCounts,
    snapshot: Option<Vec<f64>>,
    period: Option<u32>,
    searches: Vec<SearchState>,
    steps_before_period: u32,
    pending: Option<Phase>,
}

impl GeometricPolicy {
    pub fn new(
        config: &MarketConfig,
        types: usize,
        horizon: u64,
        initial_len: u64,
        growth: u64,
    ) -> Result<Self> {
        let schedule = GeometricSchedule::new(horizon, initial_len, growth, types)?;
        Ok(GeometricPolicy {
            costs: config.costs().to_vec(),
            types,
            schedule,
            round: 0,
            counts: TypeCounts::new(types),
            snapshot: None,
            period: None,
            searches: config
                .costs()
                .iter()
                .map(|&c| SearchState::new(c, types))
                .collect(),
            steps_before_period: 0,
            pending: None,
        })
    }

    pub fn schedule(&self) -> &GeometricSchedule {
        &self.schedule
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn phase(&self) -> Phase {
        self.schedule.phase(self.round + 1)
    }

    /// Current period, `None` during the initial exploration.
    pub fn period(&self) -> Option<u32> {
        self.period
    }

    pub fn searches(&self) -> &[SearchState] {
        &self.searches
    }

    pub fn counts(&self) -> &TypeCounts {
        &self.counts
    }

    pub fn candidate(&self) -> Vec<f64> {
        self.searches.iter().map(SearchState::candidate).collect()
    }

    fn current_steps(&self) -> u32 {
        self.searches.iter().map(SearchState::steps).min().unwrap_or(0)
    }

    fn enter_period(&mut self, q: u32) -> Result<()> {
        self.snapshot = Some(self.counts.empirical_weights()?);
        if self.period.is_some() {
            self.steps_before_period += self.current_steps();
            self.searches.iter_mut().for_each(SearchState::warm_restart);
        }
        self.period = Some(q);
        Ok(())
    }
}

impl PricingPolicy for GeometricPolicy {
    fn next_price(&mut self) -> Result<Vec<f64>> {
        if self.pending.is_some() {
            return Err(Error::Protocol("price requested twice without an observation".into()));
        }
        let t = self.round + 1;
        if t > self.schedule.horizon {
            return Err(Error::Protocol(format!("horizon {} exhausted", self.schedule.horizon)));
        }
        let phase = self.schedule.phase(t);
        let price = match phase {
            Phase::Explore => self.costs.clone(),
            Phase::Search { period } => {
                if self.period != Some(period) {
                    self.enter_period(period)?;
                }
                self.searches.iter_mut().map(SearchState::emit).collect()
            }
            Phase::Exploit { .. } => self.candidate(),
        };
        self.pending = Some(phase);
        Ok(price)
    }

    fn observe(&mut self, type_index: usize, quantities: &[f64]) -> Result<()> {
        check_observation(
            self.pending.is_some(),
            type_index,
            quantities,
            self.types,
            self.costs.len(),
        )?;
        self.counts.record(type_index)?;
        if let Phase::Search { .. } = self.pending.take().unwrap() {
            let weights = self.snapshot.as_deref().expect("snapshot taken on entering a period");
            for (s, &k) in self.searches.iter_mut().zip(quantities) {
                s.observe(type_index, k, weights);
            }
        }
        self.round += 1;
        Ok(())
    }

    /// Completed steps summed over all periods.
    fn completed_steps(&self) -> u32 {
        self.steps_before_period + self.current_steps()
    }

    fn latest_estimate(&self) -> Option<&[f64]> {
        self.snapshot.as_deref()
    }
}
