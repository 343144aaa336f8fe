//! Concave single-product utilities and their derivatives.
//!
//! Two closed-form families are supported:
//!
//! * `LogLike`: `v(k) = alpha * ln(1 + beta * k)`
//! * `ExpLike`: `v(k) = alpha * (1 - exp(-beta * k))`
//!
//! Both are strictly increasing and strictly concave on `k >= 0` with
//! `v'(k) -> 0`, so a consumer facing price `p` buys the unique quantity where
//! marginal utility equals the price, or nothing when `p >= v'(0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityFamily {
    LogLike,
    ExpLike,
}

/// Utility of one consumer type for one product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawUtilitySpec", into = "RawUtilitySpec")]
pub struct UtilitySpec {
    family: UtilityFamily,
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawUtilitySpec {
    family: UtilityFamily,
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawUtilitySpec> for UtilitySpec {
    type Error = Error;

    fn try_from(raw: RawUtilitySpec) -> Result<Self> {
        UtilitySpec::new(raw.family, raw.alpha, raw.beta)
    }
}

impl From<UtilitySpec> for RawUtilitySpec {
    fn from(s: UtilitySpec) -> Self {
        RawUtilitySpec {
            family: s.family,
            alpha: s.alpha,
            beta: s.beta,
        }
    }
}

impl UtilitySpec {
    pub fn new(family: UtilityFamily, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        Ok(UtilitySpec {
            family,
            alpha,
            beta,
        })
    }

    pub fn log_like(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(UtilityFamily::LogLike, alpha, beta)
    }

    pub fn exp_like(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(UtilityFamily::ExpLike, alpha, beta)
    }

    pub fn family(&self) -> UtilityFamily {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `v(k)`. Callers guarantee `k >= 0`.
    pub fn value(&self, k: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        match self.family {
            UtilityFamily::LogLike => a * (b * k).ln_1p(),
            UtilityFamily::ExpLike => -a * (-b * k).exp_m1(),
        }
    }

    pub(crate) fn first(&self, k: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        match self.family {
            UtilityFamily::LogLike => a * b / (1.0 + b * k),
            UtilityFamily::ExpLike => a * b * (-b * k).exp(),
        }
    }

    pub fn second_derivative(&self, k: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        match self.family {
            UtilityFamily::LogLike => -a * b * b / (1.0 + b * k).powi(2),
            UtilityFamily::ExpLike => -a * b * b * (-b * k).exp(),
        }
    }

    pub fn third_derivative(&self, k: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        match self.family {
            UtilityFamily::LogLike => 2.0 * a * b.powi(3) / (1.0 + b * k).powi(3),
            UtilityFamily::ExpLike => a * b.powi(3) * (-b * k).exp(),
        }
    }

    /// `v'(0)`: the price at and above which nothing is bought.
    pub fn choke_price(&self) -> f64 {
        self.alpha * self.beta
    }

    /// Demand at price `p`, without the `p > 0` check.
    pub(crate) fn quantity_at(&self, p: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if p >= a * b {
            return 0.0;
        }
        match self.family {
            UtilityFamily::LogLike => a / p - 1.0 / b,
            UtilityFamily::ExpLike => (a * b / p).ln() / b,
        }
    }
}

/// `v'(k)`.
pub fn marginal_utility(spec: &UtilitySpec, k: f64) -> Result<f64> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::Domain(format!("quantity must be nonnegative, got {k}")));
    }
    Ok(spec.first(k))
}

/// Quantity `k` with `v'(k) = p`, or 0 when `p >= v'(0)`.
pub fn inverse_marginal(spec: &UtilitySpec, p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!("price must be positive, got {p}")));
    }
    Ok(spec.quantity_at(p))
}

/// Certificates that the single-product revenue `k(p) (p - c)` is concave
/// over the standardized price range `[c, c + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    /// Sup of `v'''` over quantities reachable at feasible prices.
    pub third_derivative_sup: f64,
    /// `third_derivative_sup <= 2`.
    pub third_order_ok: bool,
    /// Infimum of `-v''(k(p))` over feasible prices.
    pub epsilon_margin: f64,
    /// `epsilon_margin > 0`.
    pub second_order_ok: bool,
    pub feasible_price_range: [f64; 2],
}

impl RegularityReport {
    pub fn passes(&self) -> bool {
        self.third_order_ok && self.second_order_ok
    }
}

pub const THIRD_ORDER_BOUND: f64 = 2.0;

pub fn check_regularity(spec: &UtilitySpec, cost: f64) -> Result<RegularityReport> {
    if !cost.is_finite() || cost <= 0.0 {
        return Err(Error::Domain(format!("cost must be positive, got {cost}")));
    }
    // Both families have v''' > 0 decreasing in k and -v''(k(p)) nondecreasing
    // in p, so the sup sits at k = 0 and the inf at the lowest price p = c.
    let third_derivative_sup = spec.third_derivative(0.0);
    let epsilon_margin = -spec.second_derivative(spec.quantity_at(cost));
    Ok(RegularityReport {
        third_derivative_sup,
        third_order_ok: third_derivative_sup <= THIRD_ORDER_BOUND,
        epsilon_margin,
        second_order_ok: epsilon_margin > 0.0,
        feasible_price_range: [cost, cost + 1.0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn log11() -> UtilitySpec {
        UtilitySpec::log_like(1.0, 1.0).unwrap()
    }

    fn exp11() -> UtilitySpec {
        UtilitySpec::exp_like(1.0, 1.0).unwrap()
    }

    #[test]
    fn marginal_examples() {
        assert_eq!(marginal_utility(&log11(), 0.0).unwrap(), 1.0);
        assert_eq!(marginal_utility(&log11(), 1.0).unwrap(), 0.5);
        assert_eq!(marginal_utility(&exp11(), 0.0).unwrap(), 1.0);
        assert!(matches!(marginal_utility(&log11(), -1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_examples() {
        let k = inverse_marginal(&log11(), 0.438).unwrap();
        assert!((k - 1.28311).abs() < 1e-5, "{k}");
        assert_eq!(inverse_marginal(&exp11(), 1.0).unwrap(), 0.0);
        for s in [log11(), exp11(), UtilitySpec::log_like(0.7, 1.3).unwrap()] {
            assert_eq!(inverse_marginal(&s, s.choke_price()).unwrap(), 0.0);
            assert_eq!(inverse_marginal(&s, 5.0 * s.choke_price()).unwrap(), 0.0);
        }
        assert!(matches!(inverse_marginal(&log11(), 0.0), Err(Error::Domain(_))));
        assert!(matches!(inverse_marginal(&log11(), -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(UtilitySpec::log_like(0.0, 1.0).is_err());
        assert!(UtilitySpec::exp_like(1.0, -1.0).is_err());
        assert!(UtilitySpec::exp_like(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn regularity_examples() {
        let r = check_regularity(&log11(), 0.1).unwrap();
        assert!((r.third_derivative_sup - 2.0).abs() < 1e-15);
        assert!(r.third_order_ok);
        assert!((r.epsilon_margin - 0.01).abs() < 1e-12);
        assert!(r.second_order_ok);
        assert_eq!(r.feasible_price_range, [0.1, 1.1]);

        let r = check_regularity(&exp11(), 0.1).unwrap();
        assert!((r.third_derivative_sup - 1.0).abs() < 1e-15);
        assert!(r.third_order_ok);

        let r = check_regularity(&UtilitySpec::log_like(4.0, 1.0).unwrap(), 0.1).unwrap();
        assert_eq!(r.third_derivative_sup, 8.0);
        assert!(!r.third_order_ok);
        assert!(!r.passes());

        assert!(check_regularity(&log11(), 0.0).is_err());
    }

    // Brute-force epsilon: minimize -v''(k(p)) over a dense price grid.
    #[test]
    fn epsilon_matches_grid_minimum() {
        for (spec, c) in [
            (log11(), 0.1),
            (exp11(), 0.1),
            (UtilitySpec::log_like(0.5, 0.9).unwrap(), 0.3),
            (UtilitySpec::exp_like(2.0, 0.6).unwrap(), 0.05),
        ] {
            let grid_min = (0..=100_000)
                .map(|i| c + i as f64 / 100_000.0)
                .map(|p| -spec.second_derivative(spec.quantity_at(p)))
                .fold(f64::INFINITY, f64::min);
            let r = check_regularity(&spec, c).unwrap();
            assert!((r.epsilon_margin - grid_min).abs() < 1e-12, "{spec:?}");
        }
    }

    fn arb_spec() -> impl Strategy<Value = UtilitySpec> {
        (prop::bool::ANY, 0.05f64..5.0, 0.05f64..5.0).prop_map(|(log, a, b)| {
            let family = if log {
                UtilityFamily::LogLike
            } else {
                UtilityFamily::ExpLike
            };
            UtilitySpec::new(family, a, b).unwrap()
        })
    }

    /// Specs with sup v''' <= 2 and a cost strictly below the choke price.
    fn arb_regular() -> impl Strategy<Value = (UtilitySpec, f64)> {
        (prop::bool::ANY, 0.1f64..1.5, 0.01f64..1.0, 0.01f64..0.99).prop_map(|(log, b, frac, cfrac)| {
            let (family, lead) = if log {
                (UtilityFamily::LogLike, 2.0)
            } else {
                (UtilityFamily::ExpLike, 1.0)
            };
            let a = frac * (2.0 / (lead * b.powi(3))).min(5.0);
            let spec = UtilitySpec::new(family, a, b).unwrap();
            (spec, cfrac * spec.choke_price())
        })
    }

    const H: f64 = 1e-5;

    proptest! {
        #[test]
        fn inverse_round_trip(spec in arb_spec(), frac in 0.001f64..0.999) {
            let p = frac * spec.choke_price();
            let k = inverse_marginal(&spec, p).unwrap();
            prop_assert!(k > 0.0);
            let back = marginal_utility(&spec, k).unwrap();
            prop_assert!((back - p).abs() <= 1e-12 * p.max(1.0), "{} vs {}", back, p);
        }

        #[test]
        fn inverse_is_nonincreasing(spec in arb_spec(), mut ps in prop::collection::vec(0.01f64..10.0, 2..40)) {
            ps.sort_by(f64::total_cmp);
            let ks: Vec<f64> = ps.iter().map(|&p| inverse_marginal(&spec, p).unwrap()).collect();
            for w in ks.windows(2) {
                prop_assert!(w[1] <= w[0]);
            }
        }

        #[test]
        fn derivatives_match_finite_differences(spec in arb_spec(), k in 0.01f64..5.0) {
            let scale = spec.alpha() * spec.beta().powi(4).max(1.0);
            let d1 = (spec.value(k + H) - spec.value(k - H)) / (2.0 * H);
            prop_assert!((d1 - spec.first(k)).abs() <= 10.0 * scale * H * H + 1e-9 * scale);
            let d2 = (spec.first(k + H) - spec.first(k - H)) / (2.0 * H);
            prop_assert!((d2 - spec.second_derivative(k)).abs() <= 10.0 * scale * spec.beta() * H * H + 1e-9 * scale);
            let d3 = (spec.second_derivative(k + H) - spec.second_derivative(k - H)) / (2.0 * H);
            prop_assert!((d3 - spec.third_derivative(k)).abs() <= 10.0 * scale * spec.beta().powi(2) * H * H + 1e-9 * scale);
        }

        #[test]
        fn regular_specs_give_concave_revenue((spec, c) in arb_regular()) {
            let report = check_regularity(&spec, c).unwrap();
            prop_assert!(report.passes());
            // Concavity holds where the consumer buys; past v'(0) revenue is flat zero.
            let hi = (c + 1.0).min(spec.choke_price());
            prop_assume!(hi > c);
            let r = |p: f64| spec.quantity_at(p) * (p - c);
            let n = 1000;
            let step = (hi - c) / (n - 1) as f64;
            for i in 1..n - 1 {
                let p = c + i as f64 * step;
                let second = r(p - step) - 2.0 * r(p) + r(p + step);
                prop_assert!(second <= 1e-8, "second difference {} at p={}", second, p);
            }
        }
    }
}
