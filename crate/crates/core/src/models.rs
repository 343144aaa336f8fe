//! Ready-made markets.

use rand::Rng;

use crate::market::{ConsumerType, Market, MarketConfig, Population};
use crate::utility::{UtilityFamily, UtilitySpec};

/// Two types, one product at cost 0.1: 10% `ln(1 + k)`, 90% `1 - exp(-k)`.
pub fn two_type_example() -> Market {
    two_type_example_with_weights([0.1, 0.9])
}

pub fn two_type_example_with_weights(weights: [f64; 2]) -> Market {
    let types = vec![
        ConsumerType::new(vec![UtilitySpec::log_like(1.0, 1.0).unwrap()]),
        ConsumerType::new(vec![UtilitySpec::exp_like(1.0, 1.0).unwrap()]),
    ];
    Market::new(
        Population::new(types, weights.to_vec()).unwrap(),
        MarketConfig::new(vec![0.1]).unwrap(),
    )
    .unwrap()
}

/// A random model that passes every regularity check and in which every
/// type buys a positive quantity at every feasible price, so the expected
/// revenue is concave on the whole box.
pub fn random_regular<R: Rng + ?Sized>(rng: &mut R, types: usize, products: usize) -> Market {
    let costs: Vec<f64> = (0..products).map(|_| rng.gen_range(0.05..0.5)).collect();
    let types: Vec<ConsumerType> = (0..types)
        .map(|_| {
            ConsumerType::new(
                costs
                    .iter()
                    .map(|&c| {
                        let family = if rng.gen_bool(0.5) {
                            UtilityFamily::LogLike
                        } else {
                            UtilityFamily::ExpLike
                        };
                        // third-order bound: LogLike 2ab^3 <= 2, ExpLike ab^3 <= 2
                        let cap = match family {
                            UtilityFamily::LogLike => 1.0,
                            UtilityFamily::ExpLike => 2.0,
                        };
                        let beta = rng.gen_range(0.3..0.75);
                        let choke = rng.gen_range((c + 1.0)..(cap / (beta * beta)));
                        UtilitySpec::new(family, choke / beta, beta).unwrap()
                    })
                    .collect(),
            )
        })
        .collect();
    let weights: Vec<f64> = (0..types.len()).map(|_| rng.gen_range(0.2..1.0)).collect();
    Market::new(
        Population::normalized(types, weights).unwrap(),
        MarketConfig::new(costs).unwrap(),
    )
    .unwrap()
}
