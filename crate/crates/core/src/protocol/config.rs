use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::ModeSet;

/// How the worst-case interval propagator norm is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorstStrategy {
    /// Exponential of the largest block-generator norm. Always dominates.
    #[default]
    Bound,
    /// Search over switch patterns on a time grid. Tighter, not a bound.
    GridDp,
}

/// Quantizer and channel parameters shared by encoder and decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub tau: f64,
    /// Cells per dimension.
    pub levels: u64,
    pub state_dim: usize,
    pub modes: usize,
    pub e0: f64,
    pub xstar0: Vec<f64>,
    pub worst_strategy: WorstStrategy,
    pub grid_points: usize,
    pub max_switches: usize,
    /// Relative slack added to every radius update to absorb rounding.
    pub rounding_margin: f64,
}

pub const DEFAULT_GRID_POINTS: usize = 20;
pub const DEFAULT_MAX_SWITCHES: usize = 4;
pub const DEFAULT_ROUNDING_MARGIN: f64 = 1e-9;

impl ProtocolConfig {
    pub fn new(tau: f64, levels: u64, state_dim: usize, modes: usize, e0: f64) -> Self {
        Self {
            tau,
            levels,
            state_dim,
            modes,
            e0,
            xstar0: vec![0.0; state_dim],
            worst_strategy: WorstStrategy::Bound,
            grid_points: DEFAULT_GRID_POINTS,
            max_switches: DEFAULT_MAX_SWITCHES,
            rounding_margin: DEFAULT_ROUNDING_MARGIN,
        }
    }

    /// `N^n`, the number of in-range boxes.
    pub fn box_count(&self) -> Result<u64> {
        let n = u32::try_from(self.state_dim)
            .map_err(|_| Error::InvalidParameter("state dimension too large".into()))?;
        self.levels
            .checked_pow(n)
            .filter(|c| *c < u64::MAX)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("N^n overflows for N = {}", self.levels))
            })
    }

    /// Checks the scalar fields and the data-rate condition against `systems`.
    pub fn validate(&self, systems: &ModeSet) -> Result<()> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::InvalidParameter(format!("tau = {}", self.tau)));
        }
        if self.levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "N = {} leaves no room for the data-rate condition; need N >= 2",
                self.levels
            )));
        }
        if !(self.e0 > 0.0) || !self.e0.is_finite() {
            return Err(Error::InvalidParameter(format!("E0 = {}", self.e0)));
        }
        if self.xstar0.len() != self.state_dim || self.xstar0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "xstar0 must hold {} finite entries",
                self.state_dim
            )));
        }
        if self.state_dim != systems.state_dim() || self.modes != systems.len() {
            return Err(Error::Dimension(format!(
                "protocol is set up for n = {}, M = {} but the mode set has n = {}, M = {}",
                self.state_dim,
                self.modes,
                systems.state_dim(),
                systems.len()
            )));
        }
        if (self.tau - systems.tau()).abs() > 0.0 {
            return Err(Error::InvalidParameter(
                "mode set was sampled at a different tau".into(),
            ));
        }
        if self.worst_strategy == WorstStrategy::GridDp && self.grid_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid_points = {} (need >= 2)",
                self.grid_points
            )));
        }
        if !(self.rounding_margin >= 0.0) {
            return Err(Error::InvalidParameter(
                "rounding_margin must be >= 0".into(),
            ));
        }
        self.box_count()?;
        systems.check_data_rate(self.levels)
    }
}

/// `(log2(N^n + 1) + log2 M) / tau` in bits per second.
pub fn data_rate(levels: u64, state_dim: usize, modes: usize, tau: f64) -> f64 {
    let boxes = (levels as f64).powi(state_dim as i32);
    ((boxes + 1.0).log2() + (modes as f64).log2()) / tau
}

impl ProtocolConfig {
    pub fn data_rate(&self) -> f64 {
        data_rate(self.levels, self.state_dim, self.modes, self.tau)
    }
}
