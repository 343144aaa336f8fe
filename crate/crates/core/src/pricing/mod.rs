//! Pricing policies as round-by-round state machines.
//!
//! Every policy strictly alternates [`PricingPolicy::next_price`] and
//! [`PricingPolicy::observe`]. A policy sees only what the seller sees: the
//! arriving consumer's type index and the quantities bought.

mod geometric;
mod one_time;
pub mod oracle;
pub mod schedule;
pub mod search;

pub use geometric::GeometricPolicy;
pub use one_time::OneTimePolicy;
pub use oracle::{
    golden_section_max, maximize_expected_revenue, maximize_for_weights, oracle_optimal_price,
    OracleSolution, ORACLE_TOLERANCE,
};
pub use schedule::{GeometricSchedule, OneTimeSchedule, Phase};
pub use search::{SearchState, Side};

use crate::error::{Error, Result};
use crate::market::MarketConfig;

pub trait PricingPolicy {
    fn next_price(&mut self) -> Result<Vec<f64>>;

    /// Feeds back the type of the consumer who faced the last price and the
    /// quantities they bought.
    fn observe(&mut self, type_index: usize, quantities: &[f64]) -> Result<()>;

    /// Completed search steps (minimum over products).
    fn completed_steps(&self) -> u32 {
        0
    }

    /// The type distribution the policy currently prices against, if any.
    fn latest_estimate(&self) -> Option<&[f64]> {
        None
    }
}

/// Posts the same price every round.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPricePolicy {
    price: Vec<f64>,
    awaiting: bool,
}

impl FixedPricePolicy {
    pub fn new(price: Vec<f64>, config: &MarketConfig) -> Result<Self> {
        config.check_price(&price)?;
        Ok(FixedPricePolicy {
            price,
            awaiting: false,
        })
    }
}

impl PricingPolicy for FixedPricePolicy {
    fn next_price(&mut self) -> Result<Vec<f64>> {
        if self.awaiting {
            return Err(Error::Protocol("price requested twice without an observation".into()));
        }
        self.awaiting = true;
        Ok(self.price.clone())
    }

    fn observe(&mut self, _type_index: usize, quantities: &[f64]) -> Result<()> {
        if !self.awaiting {
            return Err(Error::Protocol("observation without a posted price".into()));
        }
        if quantities.len() != self.price.len() {
            return Err(Error::Protocol("quantity vector has wrong length".into()));
        }
        self.awaiting = false;
        Ok(())
    }
}

/// Shared bookkeeping of the learning policies.
pub(crate) fn check_observation(
    awaiting: bool,
    type_index: usize,
    quantities: &[f64],
    types: usize,
    products: usize,
) -> Result<()> {
    if !awaiting {
        return Err(Error::Protocol("observation without a posted price".into()));
    }
    if type_index >= types {
        return Err(Error::IndexOutOfRange {
            index: type_index,
            len: types,
        });
    }
    if quantities.len() != products {
        return Err(Error::Protocol(format!(
            "{} quantities for {products} products",
            quantities.len()
        )));
    }
    Ok(())
}
