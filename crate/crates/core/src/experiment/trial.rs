use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::estimation::tv_distance;
use crate::market::{demand, sample_type, Market};
use crate::pricing::{
    maximize_expected_revenue, maximize_for_weights, oracle_optimal_price, FixedPricePolicy,
    GeometricPolicy, OneTimePolicy, OracleSolution, PricingPolicy, ORACLE_TOLERANCE,
};
use crate::regret::{Decomposition, RegretLedger};

use super::config::{Algorithm, ExperimentConfig};

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial`: the SplitMix64 output for counter `trial + 1`
/// started at `master`. Independent of the horizon, so horizons share
/// random streams.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    mix(master.wrapping_add((trial as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialOptions {
    /// Keep every round in the ledger.
    pub keep_trajectory: bool,
    /// Record price distance and TV error per round (implies a trajectory).
    pub decomposition: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub horizon: u64,
    pub seed: u64,
    pub ledger: RegretLedger,
    pub completed_steps: u32,
    /// TV distance between the true weights and the policy's final estimate.
    pub final_tv: Option<f64>,
    pub final_price: Vec<f64>,
}

/// A validated config with its market and oracle solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub market: Market,
    pub oracle: OracleSolution,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let market = config.validate()?;
        let oracle = if config.allow_irregular {
            maximize_expected_revenue(&market, ORACLE_TOLERANCE)?
        } else {
            oracle_optimal_price(&market, ORACLE_TOLERANCE)?
        };
        Ok(Experiment {
            config,
            market,
            oracle,
        })
    }

    pub fn policy(&self, horizon: u64) -> Result<Box<dyn PricingPolicy + Send>> {
        let m = &self.market;
        Ok(match &self.config.algorithm {
            Algorithm::OneTime => Box::new(OneTimePolicy::new(&m.config, m.types(), horizon)?),
            Algorithm::Geometric => Box::new(GeometricPolicy::new(
                &m.config,
                m.types(),
                horizon,
                self.config.geometric.initial_len,
                self.config.geometric.growth,
            )?),
            Algorithm::FixedPrice { price } => Box::new(FixedPricePolicy::new(price.clone(), &m.config)?),
            Algorithm::Oracle => Box::new(FixedPricePolicy::new(self.oracle.price.clone(), &m.config)?),
        })
    }

    /// Runs `horizon` rounds: the policy posts a price, a consumer type is
    /// drawn, it buys its demand, the policy observes it and the ledger
    /// charges the expected-revenue gap of the posted price.
    pub fn run_trial(&self, horizon: u64, seed: u64, options: TrialOptions) -> Result<TrialOutcome> {
        let market = &self.market;
        let mut policy = self.policy(horizon)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ledger = if options.keep_trajectory || options.decomposition {
            RegretLedger::new(self.oracle.revenue)
        } else {
            RegretLedger::summary(self.oracle.revenue)
        };

        let mut last: Option<(Vec<f64>, f64)> = None;
        let mut estimate: Option<(Vec<f64>, Vec<f64>, f64)> = None;
        let mut price = Vec::new();
        for t in 1..=horizon {
            price = policy.next_price()?;
            let i = sample_type(&market.population, &mut rng);
            let quantities = demand(&market.population.types()[i], &price, &market.config)?;
            policy.observe(i, &quantities)?;

            let revenue = match &last {
                Some((p, r)) if *p == price => *r,
                _ => {
                    let r = market.expected_revenue(&price)?;
                    last = Some((price.clone(), r));
                    r
                }
            };
            let decomposition = if options.decomposition {
                self.decompose(&*policy, &price, &mut estimate)?
            } else {
                None
            };
            ledger.record_evaluated(t, &price, revenue, decomposition)?;
        }

        let final_tv = policy
            .latest_estimate()
            .map(|w| tv_distance(market.population.weights(), w))
            .transpose()?;
        Ok(TrialOutcome {
            horizon,
            seed,
            ledger,
            completed_steps: policy.completed_steps(),
            final_tv,
            final_price: price,
        })
    }

    fn decompose(
        &self,
        policy: &dyn PricingPolicy,
        price: &[f64],
        cache: &mut Option<(Vec<f64>, Vec<f64>, f64)>,
    ) -> Result<Option<Decomposition>> {
        let Some(w) = policy.latest_estimate() else {
            return Ok(None);
        };
        if cache.as_ref().is_none_or(|(cw, _, _)| cw.as_slice() != w) {
            let m = &self.market;
            let target = maximize_for_weights(m.population.types(), w, &m.config, ORACLE_TOLERANCE)?;
            let tv = tv_distance(m.population.weights(), w)?;
            *cache = Some((w.to_vec(), target.price, tv));
        }
        let (_, target, tv) = cache.as_ref().unwrap();
        let price_distance = price
            .iter()
            .zip(target)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        Ok(Some(Decomposition {
            price_distance,
            tv: *tv,
        }))
    }
}
