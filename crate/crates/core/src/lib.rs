//! Online posted-price revenue maximization with concave consumer utilities.
//!
//! Consumers of `n` types arrive i.i.d. and buy, for each of `m` products,
//! the quantity at which their marginal utility equals the posted price.
//! The seller observes only the arriving type and the quantities bought and
//! learns a price vector in the box `[c, c + 1]^m`.
//!
//! * [`utility`]: utility families, inverse marginal demand, regularity checks.
//! * [`market`]: population, sampling, demand and revenue.
//! * [`estimation`]: empirical type distribution and total-variation distance.
//! * [`pricing`]: oracle solver, one-time and geometric learning policies.
//! * [`regret`]: expected-revenue regret ledger.
//! * [`experiment`]: trials, sweeps, exponent fits and CSV output.

pub mod error;
pub mod estimation;
pub mod experiment;
pub mod market;
pub mod models;
pub mod pricing;
pub mod regret;
pub mod utility;

pub use error::{Error, Result};
pub use estimation::{tv_distance, TypeCounts};
pub use market::{
    demand, expected_revenue, realized_revenue, sample_type, ConsumerType, Market, MarketConfig,
    Population,
};
pub use pricing::{
    oracle_optimal_price, FixedPricePolicy, GeometricPolicy, OneTimePolicy, OracleSolution,
    PricingPolicy,
};
pub use regret::RegretLedger;
pub use utility::{
    check_regularity, inverse_marginal, marginal_utility, RegularityReport, UtilityFamily,
    UtilitySpec,
};
