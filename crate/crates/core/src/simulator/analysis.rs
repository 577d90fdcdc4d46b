use serde::Serialize;

use super::run::Trajectory;
use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::mathkit::vec_inf_norm;

/// Finite-horizon growth rate `(1/T) ln(||x(T)|| / ||x(0)||)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    pub initial_norm: f64,
    pub final_norm: f64,
    pub time: f64,
    /// `||x(T)||` underflowed and was clamped to the smallest positive normal.
    pub underflow: bool,
    /// The run was frozen early; `time` is the freeze time.
    pub diverged: bool,
}

impl LyapunovEstimate {
    pub fn is_negative(&self) -> bool {
        self.exponent < 0.0
    }
}

pub fn lyapunov_exponent(traj: &Trajectory) -> Result<LyapunovEstimate> {
    let initial_norm = vec_inf_norm(&traj.x0);
    if !(initial_norm > 0.0) {
        return Err(Error::InvalidParameter(
            "growth rate is undefined for x0 = 0".into(),
        ));
    }
    if !(traj.final_time > 0.0) {
        return Err(Error::InvalidParameter("run has zero length".into()));
    }
    let raw = vec_inf_norm(&traj.final_state);
    let underflow = raw < f64::MIN_POSITIVE;
    let final_norm = if raw.is_finite() {
        raw.max(f64::MIN_POSITIVE)
    } else {
        f64::MAX
    };
    Ok(LyapunovEstimate {
        exponent: (final_norm / initial_norm).ln() / traj.final_time,
        initial_norm,
        final_norm,
        time: traj.final_time,
        underflow,
        diverged: traj.diverged,
    })
}

/// Result of checking `||x(t)|| <= max_q exp(||A_{p,q}|| tau) (||x_k|| + ||c_k||)`
/// at every recorded point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntersampleCheck {
    pub checked: usize,
    pub violations: usize,
    /// Largest `||x(t)|| / bound` seen.
    pub max_ratio: f64,
}

impl IntersampleCheck {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

pub fn intersample_bound_check(sc: &Scenario, traj: &Trajectory) -> IntersampleCheck {
    let tau = sc.protocol.tau;
    let m = sc.systems.len();
    let growth: Vec<f64> = (0..m)
        .map(|p| {
            (0..m)
                .map(|q| (sc.systems.block(p, q).inf_norm() * tau).exp())
                .fold(0.0, f64::max)
        })
        .collect();
    let mut check = IntersampleCheck {
        checked: 0,
        violations: 0,
        max_ratio: 0.0,
    };
    for s in &traj.samples {
        let Some(q) = traj.quantizer_log.get(s.k) else {
            continue;
        };
        let bound = growth[q.symbol.mode] * (vec_inf_norm(&q.x) + vec_inf_norm(&q.center));
        let norm = vec_inf_norm(&s.x);
        let ratio = if bound > 0.0 {
            norm / bound
        } else if norm == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        check.checked += 1;
        check.max_ratio = check.max_ratio.max(ratio);
        if norm > bound * (1.0 + 1e-12) {
            check.violations += 1;
        }
    }
    check
}
