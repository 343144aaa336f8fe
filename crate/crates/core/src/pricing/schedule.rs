//! Phase schedules for the learning policies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Price at cost and record arriving types.
    Explore,
    /// Post test prices; `period` is 0 for the one-time policy.
    Search { period: u32 },
    Exploit { period: u32 },
}

/// `floor(T^{2/3} (ln T)^{1/3})`.
pub fn one_time_phase_len(horizon: u64) -> u64 {
    let t = horizon as f64;
    (t.powf(2.0 / 3.0) * t.ln().cbrt()).floor() as u64
}

/// `floor(sqrt(T ln T))`.
pub fn perturbation_len(horizon: u64) -> u64 {
    let t = horizon as f64;
    (t * t.ln()).sqrt().floor() as u64
}

/// Explore on `[1, E]`, search on `(E, 2E]`, exploit on `(2E, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneTimeSchedule {
    pub horizon: u64,
    pub explore_len: u64,
}

impl OneTimeSchedule {
    pub fn new(horizon: u64, types: usize) -> Result<Self> {
        if horizon < 2 {
            return Err(Error::Config(format!("horizon {horizon} too short")));
        }
        let explore_len = one_time_phase_len(horizon);
        if explore_len < 1 {
            return Err(Error::Config("exploration phase is empty".into()));
        }
        if explore_len < 2 * types as u64 {
            return Err(Error::Config(format!(
                "search phase of {explore_len} rounds cannot observe {types} types at two prices"
            )));
        }
        if 2 * explore_len > horizon {
            return Err(Error::Config(format!(
                "horizon {horizon} shorter than exploration plus search ({})",
                2 * explore_len
            )));
        }
        Ok(OneTimeSchedule {
            horizon,
            explore_len,
        })
    }

    pub fn search_len(&self) -> u64 {
        self.explore_len
    }

    pub fn exploit_start(&self) -> u64 {
        2 * self.explore_len + 1
    }

    /// Phase of round `t` (1-based).
    pub fn phase(&self, t: u64) -> Phase {
        if t <= self.explore_len {
            Phase::Explore
        } else if t <= 2 * self.explore_len {
            Phase::Search { period: 0 }
        } else {
            Phase::Exploit { period: 0 }
        }
    }
}

/// Explore on `[1, L]`; period `q` covers `(S^q L, S^{q+1} L]` and starts
/// with `floor(sqrt(T ln T))` search rounds followed by exploitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricSchedule {
    pub horizon: u64,
    pub initial_len: u64,
    pub growth: u64,
    pub perturbation_len: u64,
}

impl GeometricSchedule {
    pub fn new(horizon: u64, initial_len: u64, growth: u64, types: usize) -> Result<Self> {
        if horizon < 2 {
            return Err(Error::Config(format!("horizon {horizon} too short")));
        }
        if initial_len < 1 || initial_len >= horizon {
            return Err(Error::Config(format!(
                "initial period length {initial_len} must lie in [1, {horizon})"
            )));
        }
        if growth < 2 {
            return Err(Error::Config(format!("growth ratio {growth} must be at least 2")));
        }
        let perturbation_len = perturbation_len(horizon);
        if perturbation_len < 2 * types as u64 {
            return Err(Error::Config(format!(
                "perturbation length {perturbation_len} cannot observe {types} types at two prices"
            )));
        }
        Ok(GeometricSchedule {
            horizon,
            initial_len,
            growth,
            perturbation_len,
        })
    }

    /// `S^q L`, the last round before period `q`.
    pub fn period_start(&self, q: u32) -> u64 {
        self.initial_len
            .saturating_mul(self.growth.saturating_pow(q))
    }

    /// Last rounds of the exploration phase and of each period, capped at T.
    pub fn boundaries(&self) -> Vec<u64> {
        let mut out = vec![self.initial_len];
        let mut q = 0;
        while *out.last().unwrap() < self.horizon {
            q += 1;
            out.push(self.period_start(q).min(self.horizon));
        }
        out
    }

    pub fn period_of(&self, t: u64) -> Option<u32> {
        if t <= self.initial_len {
            return None;
        }
        let mut q = 0;
        while self.period_start(q + 1) < t {
            q += 1;
        }
        Some(q)
    }

    pub fn phase(&self, t: u64) -> Phase {
        match self.period_of(t) {
            None => Phase::Explore,
            Some(q) => {
                if t - self.period_start(q) <= self.perturbation_len {
                    Phase::Search { period: q }
                } else {
                    Phase::Exploit { period: q }
                }
            }
        }
    }
}
