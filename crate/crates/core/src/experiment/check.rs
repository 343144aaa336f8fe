use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::utility::{check_regularity, RegularityReport, UtilityFamily};

use super::config::ModelConfig;

/// Regularity of one (type, product) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityRow {
    pub type_index: usize,
    pub product: usize,
    pub family: UtilityFamily,
    pub alpha: f64,
    pub beta: f64,
    pub cost: f64,
    pub report: RegularityReport,
}

impl RegularityRow {
    pub fn failed_conditions(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.report.third_order_ok {
            out.push("third-order");
        }
        if !self.report.second_order_ok {
            out.push("second-order");
        }
        out
    }
}

/// Regularity table for every type and product of the model.
pub fn check_model(model: &ModelConfig) -> Result<Vec<RegularityRow>> {
    let market = model.build()?;
    let mut rows = Vec::new();
    for (i, t) in market.population.types().iter().enumerate() {
        for (j, (u, &c)) in t.utilities.iter().zip(market.config.costs()).enumerate() {
            rows.push(RegularityRow {
                type_index: i,
                product: j,
                family: u.family(),
                alpha: u.alpha(),
                beta: u.beta(),
                cost: c,
                report: check_regularity(u, c)?,
            });
        }
    }
    Ok(rows)
}
