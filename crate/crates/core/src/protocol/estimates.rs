use serde::Serialize;

use super::config::{ProtocolConfig, WorstStrategy};
use super::quantizer::QuantizerState;
use crate::error::{Error, Result};
use crate::mathkit::{mat_exp, vec_inf_norm, Matrix};
use crate::switching::SwitchingLaw;
use crate::system::ModeSet;

/// Interval propagator estimates for one controller mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionEstimates {
    /// Expected-switching propagator, `n x 2n`.
    #[serde(skip)]
    pub s_tilde: Matrix,
    /// Worst-case propagator norm.
    pub s_check_norm: f64,
    /// Norm of the gap between expected and worst propagators.
    pub s_diff_norm: f64,
    pub chi: f64,
    pub psi: f64,
}

impl TransitionEstimates {
    pub fn new(s_tilde: Matrix, s_check_norm: f64, s_diff_norm: f64, levels: u64) -> Self {
        let chi = 2.0 * s_check_norm + s_diff_norm;
        let psi = psi_for(s_check_norm, s_diff_norm, levels as f64);
        Self {
            s_tilde,
            s_check_norm,
            s_diff_norm,
            chi,
            psi,
        }
    }

    /// Radius gain when the previous center was resolved to `levels` cells
    /// per dimension (1 after an overflow symbol, where `c = x*`).
    pub fn psi_with(&self, levels: f64) -> f64 {
        psi_for(self.s_check_norm, self.s_diff_norm, levels)
    }
}

fn psi_for(sc: f64, sd: f64, n: f64) -> f64 {
    ((n - 1.0) * sd + (2.0 * n - 1.0) * sc) / n
}

fn top_rows(z: &Matrix, n: usize) -> Matrix {
    z.block(0, 0, n, z.cols())
}

/// Mode visiting order for the expected propagator: `p` first, then the
/// remaining modes ascending.
pub fn visiting_order(p: usize, modes: usize) -> Vec<usize> {
    std::iter::once(p)
        .chain((0..modes).filter(|&q| q != p))
        .collect()
}

/// Expected-switching propagator: one visit to every mode, each for a
/// share of `tau` proportional to its mean sojourn, composed as a left
/// product and truncated to the plant rows.
pub fn expected_transition(p: usize, systems: &ModeSet, law: &SwitchingLaw) -> Result<Matrix> {
    let m = systems.len();
    if law.modes() != m {
        return Err(Error::Dimension(format!(
            "law has {} modes, system has {m}",
            law.modes()
        )));
    }
    let tau = systems.tau();
    let n = systems.state_dim();
    if m == 1 {
        return Ok(top_rows(&mat_exp(&systems.block(p, p), tau)?, n));
    }
    let means = law.mean_sojourns();
    let total: f64 = means.iter().sum();
    let mut z = Matrix::identity(2 * n);
    for q in visiting_order(p, m) {
        let h = tau * means[q] / total;
        z = mat_exp(&systems.block(p, q), h)?.matmul(&z);
    }
    Ok(top_rows(&z, n))
}

/// Segment lengths used by [`expected_transition`], in visiting order.
pub fn expected_segments(p: usize, tau: f64, law: &SwitchingLaw) -> Vec<(usize, f64)> {
    let m = law.modes();
    if m == 1 {
        return vec![(p, tau)];
    }
    let means = law.mean_sojourns();
    let total: f64 = means.iter().sum();
    visiting_order(p, m)
        .into_iter()
        .map(|q| (q, tau * means[q] / total))
        .collect()
}

/// Worst-case propagator norm and its gap to `s_tilde`.
///
/// `bound` returns `exp(max_q ||A_{p,q}|| tau)` and the triangle bound
/// `||S~|| + that`. `grid_dp` searches switch patterns whose switch times
/// are multiples of `tau / g` for some `g <= grid_points`, with at most
/// `max_switches` mode changes, keeping per `(mode, switches)` the partial
/// product of largest norm; it returns the best realized norm and
/// `||S~ - S^||` for the maximizing pattern.
pub fn worst_transition(
    p: usize,
    systems: &ModeSet,
    cfg: &ProtocolConfig,
    s_tilde: &Matrix,
) -> Result<(f64, f64)> {
    let tau = systems.tau();
    let m = systems.len();
    match cfg.worst_strategy {
        WorstStrategy::Bound => {
            let worst = (0..m)
                .map(|q| systems.block(p, q).inf_norm())
                .fold(0.0, f64::max);
            let sc = (worst * tau).exp();
            Ok((sc, s_tilde.inf_norm() + sc))
        }
        WorstStrategy::GridDp => {
            if cfg.grid_points < 2 {
                return Err(Error::InvalidParameter(format!(
                    "grid_points = {} (need >= 2)",
                    cfg.grid_points
                )));
            }
            let n = systems.state_dim();
            let no_switch = top_rows(&mat_exp(&systems.block(p, p), tau)?, n);
            let mut best = (no_switch.inf_norm(), no_switch);
            for g in 2..=cfg.grid_points {
                let (norm, s) = grid_search(p, systems, g, cfg.max_switches)?;
                if norm > best.0 {
                    best = (norm, s);
                }
            }
            let diff = (s_tilde - &best.1).inf_norm();
            Ok((best.0, diff))
        }
    }
}

fn grid_search(
    p: usize,
    systems: &ModeSet,
    g: usize,
    max_switches: usize,
) -> Result<(f64, Matrix)> {
    let m = systems.len();
    let n = systems.state_dim();
    let h = systems.tau() / g as f64;
    let steps: Vec<Matrix> = (0..m)
        .map(|q| mat_exp(&systems.block(p, q), h))
        .collect::<Result<_>>()?;
    let w_max = max_switches.min(g - 1);
    let score = |z: &Matrix| top_rows(z, n).inf_norm();
    // layer[q][w]: best partial product ending in mode q after w switches.
    let mut layer: Vec<Vec<Option<(f64, Matrix)>>> = vec![vec![None; w_max + 1]; m];
    layer[p][0] = Some((score(&steps[p]), steps[p].clone()));
    for _ in 1..g {
        let mut next: Vec<Vec<Option<(f64, Matrix)>>> = vec![vec![None; w_max + 1]; m];
        for q in 0..m {
            for w in 0..=w_max {
                let Some((_, z)) = &layer[q][w] else { continue };
                for r in 0..m {
                    let w2 = if r == q { w } else { w + 1 };
                    if w2 > w_max {
                        continue;
                    }
                    let cand = steps[r].matmul(z);
                    let s = score(&cand);
                    let slot = &mut next[r][w2];
                    if slot.as_ref().is_none_or(|(b, _)| s > *b) {
                        *slot = Some((s, cand));
                    }
                }
            }
        }
        layer = next;
    }
    let (norm, z) = layer
        .into_iter()
        .flatten()
        .flatten()
        .fold(None::<(f64, Matrix)>, |acc, cur| match acc {
            Some(a) if a.0 >= cur.0 => Some(a),
            _ => Some(cur),
        })
        .expect("the all-stay pattern is always present");
    Ok((norm, top_rows(&z, n)))
}

/// Estimates for every controller mode.
pub fn transition_estimates(
    systems: &ModeSet,
    law: &SwitchingLaw,
    cfg: &ProtocolConfig,
) -> Result<Vec<TransitionEstimates>> {
    (0..systems.len())
        .map(|p| {
            let s_tilde = expected_transition(p, systems, law)?;
            let (sc, sd) = worst_transition(p, systems, cfg, &s_tilde)?;
            Ok(TransitionEstimates::new(s_tilde, sc, sd, cfg.levels))
        })
        .collect()
}

/// Center/radius update for an interval without mode changes:
/// `x* <- exp((A_p + B_p K_p) tau) c`, `E <- (||exp(A_p tau)|| / N) E`.
pub fn update_no_switch(
    state: &QuantizerState,
    c: &[f64],
    systems: &ModeSet,
    levels: f64,
) -> QuantizerState {
    let s = systems.sampled(state.mode);
    QuantizerState {
        k: state.k + 1,
        xstar: s.closed.mul_vec(c),
        e: s.lambda / levels * state.e,
        mode: state.mode,
    }
}

/// Center/radius update for an interval with mode changes:
/// `x* <- S~ [c; c]`, `E <- chi ||x*_old|| + psi E`.
pub fn update_with_switch(
    state: &QuantizerState,
    c: &[f64],
    est: &TransitionEstimates,
    levels: f64,
) -> QuantizerState {
    let stacked: Vec<f64> = c.iter().chain(c).copied().collect();
    QuantizerState {
        k: state.k + 1,
        xstar: est.s_tilde.mul_vec(&stacked),
        e: est.chi * vec_inf_norm(&state.xstar) + est.psi_with(levels) * state.e,
        mode: state.mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::ModeLinearSystem;

    fn scalar(a: f64, b: f64, k: f64) -> ModeLinearSystem {
        let m = |v: f64| Matrix::from_rows(&[[v]]).unwrap();
        ModeLinearSystem::new(m(a), m(b), m(k)).unwrap()
    }

    #[test]
    fn frozen_dynamics_bound_is_one() {
        let set = ModeSet::new(vec![scalar(0.0, 0.0, 0.0)], 0.1).unwrap();
        let cfg = ProtocolConfig::new(0.1, 3, 1, 1, 1.0);
        let est = transition_estimates(&set, &SwitchingLaw::Fixed, &cfg).unwrap();
        assert_eq!(est[0].s_check_norm, 1.0);
        assert_eq!(est[0].s_tilde, Matrix::from_rows(&[[1.0, 0.0]]).unwrap());
    }

    #[test]
    fn no_switch_update_with_identity_propagator() {
        let set = ModeSet::new(vec![scalar(0.0, 0.0, 0.0)], 0.1).unwrap();
        let st = QuantizerState {
            k: 0,
            xstar: vec![0.0],
            e: 1.0,
            mode: 0,
        };
        let next = update_no_switch(&st, &[0.4], &set, 10.0);
        assert_eq!(next.xstar, vec![0.4]);
        assert!((next.e - 0.1).abs() < 1e-16);
        assert_eq!(next.k, 1);
    }

    #[test]
    fn switch_update_from_origin_scales_by_psi() {
        let est = TransitionEstimates::new(Matrix::from_rows(&[[1.0, 0.5]]).unwrap(), 2.0, 3.0, 10);
        let st = QuantizerState {
            k: 4,
            xstar: vec![0.0],
            e: 0.5,
            mode: 0,
        };
        let next = update_with_switch(&st, &[0.0], &est, 10.0);
        assert_eq!(next.xstar, vec![0.0]);
        assert!((next.e - est.psi * 0.5).abs() < 1e-15);
        assert_eq!(est.chi, 7.0);
        assert!((est.psi - (9.0 * 3.0 + 19.0 * 2.0) / 10.0).abs() < 1e-15);
    }
}
