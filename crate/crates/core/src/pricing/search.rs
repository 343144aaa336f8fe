//! Per-product dichotomous price search driven by demand observations.
//!
//! The search keeps an interval of width `w` centered at the candidate and
//! tests the prices `candidate ± w/4`. Once every consumer type has been
//! observed at every required price, the estimated revenue
//! `sum_i w_i k_i(p) (p - c)` of the lower test, the candidate and the upper
//! test are compared, the winner becomes the new candidate (ties go to the
//! lower price) and the interval halves around it. Comparing the candidate
//! too keeps the optimum of a unimodal revenue inside the interval.
//!
//! Quantities at the winning price are kept, so from the second step on the
//! candidate needs no new observations and a step completes once the two
//! test prices have been seen by all types.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Center,
    Upper,
}

/// Emission order within a step.
const ROTATION: [Side; 3] = [Side::Lower, Side::Upper, Side::Center];

fn slot(side: Side) -> usize {
    match side {
        Side::Lower => 0,
        Side::Center => 1,
        Side::Upper => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    cost: f64,
    center: f64,
    width: f64,
    initial_width: f64,
    steps: u32,
    /// Per-type quantities at `center`, when known.
    center_quantities: Option<Vec<f64>>,
    /// Pending observations indexed by [`slot`] then type.
    cells: [Vec<Option<f64>>; 3],
    cursor: usize,
    emitted: Option<Side>,
}

impl SearchState {
    /// Search over the full box `[cost, cost + 1]`.
    pub fn new(cost: f64, types: usize) -> Self {
        SearchState {
            cost,
            center: cost + 0.5,
            width: 1.0,
            initial_width: 1.0,
            steps: 0,
            center_quantities: None,
            cells: std::array::from_fn(|_| vec![None; types]),
            cursor: 0,
            emitted: None,
        }
    }

    /// Restarts around the current candidate with twice the final width,
    /// capped at the box and shifted to stay inside it.
    pub fn warm_restart(&mut self) {
        let width = (2.0 * self.width).min(1.0);
        let half = 0.5 * width;
        let center = self.center.clamp(self.cost + half, self.cost + 1.0 - half);
        if center != self.center {
            self.center_quantities = None;
        }
        self.center = center;
        self.width = width;
        self.initial_width = width;
        self.steps = 0;
        self.clear_cells();
    }

    fn clear_cells(&mut self) {
        for side in &mut self.cells {
            side.iter_mut().for_each(|c| *c = None);
        }
        self.cursor = 0;
        self.emitted = None;
    }

    pub fn candidate(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn initial_width(&self) -> f64 {
        self.initial_width
    }

    /// Completed steps since the last (re)start.
    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.center - 0.5 * self.width, self.center + 0.5 * self.width)
    }

    pub fn test_price(&self, side: Side) -> f64 {
        let p = match side {
            Side::Lower => self.center - 0.25 * self.width,
            Side::Center => self.center,
            Side::Upper => self.center + 0.25 * self.width,
        };
        p.clamp(self.cost, self.cost + 1.0)
    }

    fn needs(&self, side: Side) -> bool {
        if side == Side::Center && self.center_quantities.is_some() {
            return false;
        }
        self.cells[slot(side)].iter().any(Option::is_none)
    }

    /// Picks the side to post this round and returns its price.
    pub fn emit(&mut self) -> f64 {
        let side = (0..ROTATION.len())
            .map(|k| (self.cursor + k) % ROTATION.len())
            .find(|&k| self.needs(ROTATION[k]))
            .map(|k| {
                self.cursor = (k + 1) % ROTATION.len();
                ROTATION[k]
            })
            .expect("a step completes as soon as no side needs observations");
        self.emitted = Some(side);
        self.test_price(side)
    }

    /// Records the quantity bought by type `i` at the last emitted price.
    /// Completes a step when all cells are filled, using `weights` as the
    /// type distribution. Returns whether a step completed.
    pub fn observe(&mut self, i: usize, quantity: f64, weights: &[f64]) -> bool {
        let Some(side) = self.emitted.take() else {
            return false;
        };
        let cell = &mut self.cells[slot(side)][i];
        if cell.is_none() {
            *cell = Some(quantity);
        }
        if ROTATION.iter().any(|&s| self.needs(s)) {
            return false;
        }
        self.complete_step(weights);
        true
    }

    fn table(&self, side: Side) -> Vec<f64> {
        match (side, &self.center_quantities) {
            (Side::Center, Some(q)) => q.clone(),
            _ => self.cells[slot(side)].iter().map(|c| c.unwrap()).collect(),
        }
    }

    fn estimated_revenue(&self, side: Side, weights: &[f64]) -> f64 {
        let p = self.test_price(side);
        let demand: f64 = self
            .table(side)
            .iter()
            .zip(weights)
            .map(|(k, w)| w * k)
            .sum();
        demand * (p - self.cost)
    }

    fn complete_step(&mut self, weights: &[f64]) {
        let mut best = Side::Lower;
        let mut best_value = self.estimated_revenue(Side::Lower, weights);
        for side in [Side::Center, Side::Upper] {
            let v = self.estimated_revenue(side, weights);
            if v > best_value {
                best = side;
                best_value = v;
            }
        }
        let quantities = self.table(best);
        self.center = self.test_price(best);
        self.width *= 0.5;
        self.steps += 1;
        self.center_quantities = Some(quantities);
        self.clear_cells();
    }
}
