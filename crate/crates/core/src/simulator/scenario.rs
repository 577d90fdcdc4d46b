use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{transition_estimates, ProtocolConfig, TransitionEstimates};
use crate::switching::SwitchingLaw;
use crate::system::ModeSet;

/// How the closed loop is integrated between samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Integrator {
    /// One block exponential per constant-mode piece.
    EventExact,
    /// Explicit Euler with step `dt`; `tau / dt` must be an integer.
    FixedStep { dt: f64 },
}

pub const DEFAULT_RECORD_PER_INTERVAL: usize = 10;

/// A fully specified closed-loop experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub systems: ModeSet,
    pub law: SwitchingLaw,
    pub protocol: ProtocolConfig,
    pub x0: Vec<f64>,
    pub horizon: f64,
    pub integrator: Integrator,
    pub seed: u64,
    /// Zero-based mode at `t = 0`.
    pub initial_mode: usize,
    /// Trajectory points recorded per sampling interval (including the sample).
    pub record_per_interval: usize,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.protocol.validate(&self.systems)?;
        if self.law.modes() != self.systems.len() {
            return Err(Error::Dimension(format!(
                "law has {} modes, system has {}",
                self.law.modes(),
                self.systems.len()
            )));
        }
        if self.x0.len() != self.systems.state_dim() || self.x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "x0 must hold {} finite entries",
                self.systems.state_dim()
            )));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon = {}",
                self.horizon
            )));
        }
        if self.initial_mode >= self.systems.len() {
            return Err(Error::InvalidParameter(format!(
                "initial mode {} outside 1..={}",
                self.initial_mode + 1,
                self.systems.len()
            )));
        }
        if self.record_per_interval == 0 {
            return Err(Error::InvalidParameter(
                "record_per_interval must be >= 1".into(),
            ));
        }
        if let Integrator::FixedStep { dt } = self.integrator {
            let tau = self.protocol.tau;
            let ratio = tau / dt;
            if !(dt > 0.0) || dt > tau || (ratio - ratio.round()).abs() > 1e-6 * ratio {
                return Err(Error::InvalidParameter(format!(
                    "fixed step dt = {dt} must divide tau = {tau}"
                )));
            }
        }
        Ok(())
    }

    /// Validates and computes the per-mode interval estimates.
    pub fn prepare(&self) -> Result<Prepared<'_>> {
        self.validate()?;
        let estimates = transition_estimates(&self.systems, &self.law, &self.protocol)?;
        Ok(Prepared {
            scenario: self,
            estimates,
        })
    }

    /// Number of samples `floor(horizon / tau) + 1`.
    pub fn sample_count(&self) -> usize {
        (self.horizon / self.protocol.tau + 1e-9).floor() as usize + 1
    }
}

/// A scenario with its precomputed interval estimates.
#[derive(Debug, Clone)]
pub struct Prepared<'a> {
    pub scenario: &'a Scenario,
    pub estimates: Vec<TransitionEstimates>,
}
