//! Ground-truth dynamics on networks: coupled phase oscillators,
//! evolutionary games, and discrete epidemic processes.

mod epidemic;
mod game;
mod kuramoto;

pub use epidemic::{simulate_cp, simulate_sis};
pub use game::{eg_payoffs, simulate_eg};
pub use kuramoto::{kuramoto_rhs, simulate_kuramoto, simulate_kuramoto_ensemble, KuramotoVariant};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real-valued node states, one row per node, one column per sample.
///
/// `deriv`, when present, holds derivative values aligned with `values`;
/// `deriv_valid` marks the samples whose derivative entries are usable
/// (`None` means every sample). `segment_starts` partitions the sample axis
/// into independently recorded stretches so that nothing — derivative
/// estimation in particular — straddles a recording boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub values: Array2<f64>,
    pub dt: f64,
    pub deriv: Option<Array2<f64>>,
    pub deriv_valid: Option<Vec<bool>>,
    pub segment_starts: Vec<usize>,
}

impl TimeSeries {
    pub fn new(values: Array2<f64>, dt: f64) -> Result<Self> {
        let ts = TimeSeries {
            values,
            dt,
            deriv: None,
            deriv_valid: None,
            segment_starts: vec![0],
        };
        ts.validate()?;
        Ok(ts)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive and finite, got {}",
                self.dt
            )));
        }
        if self.values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "time series contains non-finite values".into(),
            ));
        }
        if let Some(d) = &self.deriv {
            if d.dim() != self.values.dim() {
                return Err(Error::ShapeMismatch(
                    "derivative matrix shape differs from values".into(),
                ));
            }
            if d.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(
                    "derivative matrix contains non-finite values".into(),
                ));
            }
        }
        if let Some(mask) = &self.deriv_valid {
            if mask.len() != self.n_samples() {
                return Err(Error::ShapeMismatch(
                    "deriv_valid length differs from sample count".into(),
                ));
            }
        }
        if self.segment_starts.first() != Some(&0)
            || self.segment_starts.windows(2).any(|w| w[0] >= w[1])
            || self.segment_starts.last().copied().unwrap_or(0) >= self.n_samples().max(1)
        {
            return Err(Error::InvalidParameter(
                "segment starts must begin at 0, increase strictly, and stay in range".into(),
            ));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.values.ncols()
    }

    /// Sample ranges of the recording segments.
    pub fn segments(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.segment_starts.len());
        for (k, &start) in self.segment_starts.iter().enumerate() {
            let end = self
                .segment_starts
                .get(k + 1)
                .copied()
                .unwrap_or(self.n_samples());
            out.push(start..end);
        }
        out
    }
}

/// {0, 1} epidemic states with a per-node missingness mask. Missing nodes
/// keep their rows (shape is preserved) but contribute no observations to
/// inference.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryTimeSeries {
    pub states: Array2<u8>,
    pub missing: Vec<bool>,
}

impl BinaryTimeSeries {
    pub fn new(states: Array2<u8>) -> Result<Self> {
        let missing = vec![false; states.nrows()];
        let bts = BinaryTimeSeries { states, missing };
        bts.validate()?;
        Ok(bts)
    }

    pub fn validate(&self) -> Result<()> {
        if self.states.iter().any(|&s| s > 1) {
            return Err(Error::InvalidParameter(
                "binary states must be 0 or 1".into(),
            ));
        }
        if self.missing.len() != self.states.nrows() {
            return Err(Error::ShapeMismatch(
                "missing mask length differs from node count".into(),
            ));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.states.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.states.ncols()
    }

    pub fn infected_count(&self, t: usize) -> usize {
        self.states.column(t).iter().filter(|&&s| s == 1).count()
    }
}

/// Two-strategy payoff structure. Strategies are encoded C = 1, D = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "snake_case")]
pub enum Game {
    /// Prisoner's dilemma: cooperating against a cooperator pays 1,
    /// defecting against a cooperator pays `b` (temptation, b > 1).
    Pdg { b: f64 },
    /// Snowdrift: P(C,C) = 1, P(C,D) = 1 - r, P(D,C) = 1 + r, P(D,D) = 0.
    Sg { r: f64 },
}

pub const COOPERATE: u8 = 1;
pub const DEFECT: u8 = 0;

impl Game {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Game::Pdg { b } => {
                if !(b > 1.0) || !b.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "PDG temptation b must exceed 1, got {b}"
                    )));
                }
            }
            Game::Sg { r } => {
                if !(0.0..1.0).contains(&r) {
                    return Err(Error::InvalidParameter(format!(
                        "SG cost-to-benefit r must lie in [0, 1), got {r}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Payoff to `focal` when meeting `opponent`.
    pub fn payoff(&self, focal: u8, opponent: u8) -> f64 {
        match *self {
            Game::Pdg { b } => match (focal, opponent) {
                (COOPERATE, COOPERATE) => 1.0,
                (DEFECT, COOPERATE) => b,
                _ => 0.0,
            },
            Game::Sg { r } => match (focal, opponent) {
                (COOPERATE, COOPERATE) => 1.0,
                (COOPERATE, DEFECT) => 1.0 - r,
                (DEFECT, COOPERATE) => 1.0 + r,
                _ => 0.0,
            },
        }
    }
}

/// Recorded evolutionary-game history: one strategy and one scalar payoff
/// per node per round, concatenated over repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct EgRecord {
    pub strategies: Array2<u8>,
    pub payoffs: Array2<f64>,
    pub game: Game,
}

impl EgRecord {
    pub fn n_nodes(&self) -> usize {
        self.strategies.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.strategies.ncols()
    }

    pub fn validate(&self) -> Result<()> {
        if self.strategies.dim() != self.payoffs.dim() {
            return Err(Error::ShapeMismatch(
                "strategies and payoffs must have identical shape".into(),
            ));
        }
        if self.strategies.iter().any(|&s| s > 1) {
            return Err(Error::InvalidParameter("strategies must be 0 or 1".into()));
        }
        self.game.validate()
    }
}
