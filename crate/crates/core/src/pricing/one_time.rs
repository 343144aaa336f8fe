use crate::error::{Error, Result};
use crate::estimation::TypeCounts;
use crate::market::MarketConfig;

use super::schedule::{OneTimeSchedule, Phase};
use super::search::SearchState;
use super::{check_observation, PricingPolicy};

/// Explore at cost, search once against the explored type distribution,
/// then post the final candidate for the rest of the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct OneTimePolicy {
    costs: Vec<f64>,
    types: usize,
    schedule: OneTimeSchedule,
    round: u64,
    counts: TypeCounts,
    snapshot: Option<Vec<f64>>,
    searches: Vec<SearchState>,
    pending: Option<Phase>,
}

impl OneTimePolicy {
    pub fn new(config: &MarketConfig, types: usize, horizon: u64) -> Result<Self> {
        let schedule = OneTimeSchedule::new(horizon, types)?;
        Ok(OneTimePolicy {
            costs: config.costs().to_vec(),
            types,
            schedule,
            round: 0,
            counts: TypeCounts::new(types),
            snapshot: None,
            searches: config
                .costs()
                .iter()
                .map(|&c| SearchState::new(c, types))
                .collect(),
            pending: None,
        })
    }

    pub fn schedule(&self) -> &OneTimeSchedule {
        &self.schedule
    }

    /// Rounds completed so far.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Phase of the next round.
    pub fn phase(&self) -> Phase {
        self.schedule.phase(self.round + 1)
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
}

impl PricingPolicy for OneTimePolicy {
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
            Phase::Search { .. } => {
                if self.snapshot.is_none() {
                    self.snapshot = Some(self.counts.empirical_weights()?);
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
        match self.pending.take().unwrap() {
            Phase::Explore => self.counts.record(type_index)?,
            Phase::Search { .. } => {
                let weights = self.snapshot.as_deref().expect("snapshot taken on entering search");
                for (s, &k) in self.searches.iter_mut().zip(quantities) {
                    s.observe(type_index, k, weights);
                }
            }
            Phase::Exploit { .. } => {}
        }
        self.round += 1;
        Ok(())
    }

    fn completed_steps(&self) -> u32 {
        self.searches.iter().map(SearchState::steps).min().unwrap_or(0)
    }

    fn latest_estimate(&self) -> Option<&[f64]> {
        self.snapshot.as_deref()
    }
}
