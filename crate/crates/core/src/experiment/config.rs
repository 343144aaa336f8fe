use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{ConsumerType, Market, MarketConfig, Population};

/// Market description as it appears in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub weights: Vec<f64>,
    pub costs: Vec<f64>,
    pub types: Vec<ConsumerType>,
}

impl ModelConfig {
    pub fn build(&self) -> Result<Market> {
        if self.types.is_empty() {
            return Err(Error::Config("model has no consumer types".into()));
        }
        Market::new(
            Population::new(self.types.clone(), self.weights.clone())?,
            MarketConfig::new(self.costs.clone())?,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_market(market: &Market) -> Self {
        ModelConfig {
            weights: market.population.weights().to_vec(),
            costs: market.config.costs().to_vec(),
            types: market.population.types().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Algorithm {
    OneTime,
    Geometric,
    FixedPrice { price: Vec<f64> },
    Oracle,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::OneTime => "one_time",
            Algorithm::Geometric => "geometric",
            Algorithm::FixedPrice { .. } => "fixed_price",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricParams {
    /// Length L of the initial exploration period.
    #[serde(default = "default_initial_len")]
    pub initial_len: u64,
    /// Integer growth ratio S of the periods.
    #[serde(default = "default_growth")]
    pub growth: u64,
}

fn default_initial_len() -> u64 {
    100
}

fn default_growth() -> u64 {
    2
}

impl Default for GeometricParams {
    fn default() -> Self {
        GeometricParams {
            initial_len: default_initial_len(),
            growth: default_growth(),
        }
    }
}

fn default_trials() -> usize {
    1
}

/// One experiment: a model, a policy and the horizons to run it on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub horizons: Vec<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub geometric: GeometricParams,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub allow_irregular: bool,
}

impl ExperimentConfig {
    pub fn new(model: ModelConfig, algorithm: Algorithm) -> Self {
        ExperimentConfig {
            model,
            algorithm,
            horizons: Vec::new(),
            trials: 1,
            seed: 0,
            geometric: GeometricParams::default(),
            output: None,
            allow_irregular: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks everything except the regularity gate.
    pub fn validate(&self) -> Result<Market> {
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.horizons.contains(&0) {
            return Err(Error::Config("horizons must be positive".into()));
        }
        if self.horizons.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("horizons must be strictly increasing".into()));
        }
        let market = self.model.build()?;
        if let Algorithm::FixedPrice { price } = &self.algorithm {
            market.config.check_price(price).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(market)
    }
}
