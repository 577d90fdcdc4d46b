use super::gains::{compute_gains, CertificateParams, GainInputs, ModeGains};
use super::report::CertificateReport;
use serde::{Deserialize, Serialize};

use super::weights::{weights_with, ProbabilityWeights, WeightThresholds};
use crate::error::{Error, Result};
use crate::mathkit::{solve_discrete_lyapunov, Matrix};
use crate::protocol::{transition_estimates, ProtocolConfig};
use crate::switching::SwitchingLaw;
use crate::system::ModeSet;

/// `sum_p pi_p p_mu ln mu_p + sum_{stab} pi_p p_nu ln nu_p
///  + sum_{unstab} pi_p p_upsilon ln upsilon_p`.
pub fn condition_value(
    gains: &ModeGains,
    weights: &ProbabilityWeights,
    stationary: &[f64],
    stabilizable: &[bool],
) -> Result<f64> {
    let m = stationary.len();
    if gains.mu.len() != m || weights.p_mu.len() != m || stabilizable.len() != m {
        return Err(Error::Dimension(
            "gains, weights and pi disagree on M".into(),
        ));
    }
    let mut value = 0.0;
    for p in 0..m {
        let stay = if stabilizable[p] {
            gains.nu[p]
        } else {
            gains.upsilon[p]
        }
        .ok_or_else(|| Error::InvalidParameter(format!("mode {} lacks its gain", p + 1)))?;
        let (mu, w_stay) = (
            gains.mu[p],
            if stabilizable[p] {
                weights.p_nu[p]
            } else {
                weights.p_upsilon[p]
            },
        );
        if !(stay > 0.0) || !(mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gains of mode {} must be positive (stay {stay}, switch {mu})",
                p + 1
            )));
        }
        if weights.p_mu[p] > 0.0 {
            value += stationary[p] * weights.p_mu[p] * mu.ln();
        }
        if w_stay > 0.0 {
            value += stationary[p] * w_stay * stay.ln();
        }
    }
    Ok(value)
}

/// `P_p` from `S_p^T P S_p - P = -I` for stabilizable modes (so `Q_p = I`),
/// `P_p = I` otherwise.
pub fn lyapunov_matrices(systems: &ModeSet) -> Result<(Vec<Matrix>, Vec<Option<Matrix>>)> {
    let n = systems.state_dim();
    let mut ps = Vec::with_capacity(systems.len());
    let mut qs = Vec::with_capacity(systems.len());
    for p in 0..systems.len() {
        let s = systems.sampled(p);
        if s.stabilizable {
            let q = Matrix::identity(n);
            ps.push(solve_discrete_lyapunov(&s.closed, &q)?);
            qs.push(Some(q));
        } else {
            ps.push(Matrix::identity(n));
            qs.push(None);
        }
    }
    Ok((ps, qs))
}

/// Search over the free scalars in log10 coordinates.
///
/// Layout of `z`: `rho` (M), the per-mode scalar (`alpha_p` or `beta_p`,
/// M), `alpha_pq` (M*M), `beta_pq` (M*M).
struct Search<'a> {
    inputs: &'a GainInputs,
    weights: &'a ProbabilityWeights,
    stationary: &'a [f64],
    m: usize,
    evaluations: usize,
    budget: usize,
}

const GRID_LO: i32 = -3;
const GRID_HI: i32 = 3;
const INNER_LOG_LIMIT: f64 = 12.0;

/// Minimizer over `a > 0` of `max(u0 + u1 a, w0 + w1 / a)` for `u1, w1 >= 0`,
/// returned in log10 and clamped to `[-12, 12]`.
fn balance(u0: f64, u1: f64, w0: f64, w1: f64) -> f64 {
    let a = if u1 <= 0.0 {
        f64::INFINITY
    } else if w1 <= 0.0 {
        0.0
    } else {
        let d = u0 - w0;
        // Positive root of u1 a^2 + d a - w1, written to avoid cancellation.
        let disc = (d * d + 4.0 * u1 * w1).sqrt();
        if d >= 0.0 {
            2.0 * w1 / (d + disc)
        } else {
            (disc - d) / (2.0 * u1)
        }
    };
    a.log10().clamp(-INNER_LOG_LIMIT, INNER_LOG_LIMIT)
}

impl<'a> Search<'a> {
    fn dim(&self) -> usize {
        2 * self.m + 2 * self.m * self.m
    }

    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    fn value(&mut self, z: &[f64]) -> f64 {
        self.evaluations += 1;
        let params = self.params(z);
        let gains = compute_gains(&params, self.inputs);
        let stab = &self.inputs.stabilizable;
        condition_value(&gains, self.weights, self.stationary, stab).unwrap_or(f64::INFINITY)
    }

    fn params(&self, z: &[f64]) -> CertificateParams {
        let m = self.m;
        let e = |v: f64| 10f64.powf(v);
        let mut alpha = vec![1.0; m];
        let mut beta = vec![1.0; m];
        for p in 0..m {
            if self.inputs.stabilizable[p] {
                alpha[p] = e(z[m + p]);
            } else {
                beta[p] = e(z[m + p]);
            }
        }
        let pair = |off: usize| -> Vec<Vec<f64>> {
            (0..m)
                .map(|p| (0..m).map(|q| e(z[off + p * m + q])).collect())
                .collect()
        };
        CertificateParams {
            rho: z[..m].iter().map(|v| e(*v)).collect(),
            alpha,
            beta,
            alpha_pq: pair(2 * m),
            beta_pq: pair(2 * m + m * m),
            p: Vec::new(),
            q: Vec::new(),
        }
    }

    /// Cyclic coordinate descent: each coordinate is scanned over the
    /// values `10^-3 .. 10^3`, then nudged by a factor `sqrt(10)` either
    /// way; cycles repeat until a full pass brings no improvement.
    fn coordinate_descent(&mut self, z: &mut [f64], best: &mut f64) {
        loop {
            let mut improved = false;
            for i in 0..self.dim() {
                let anchor = z[i];
                let mut best_i = anchor;
                let candidates = (GRID_LO..=GRID_HI).map(f64::from).collect::<Vec<_>>();
                for c in candidates {
                    if self.exhausted() {
                        return;
                    }
                    z[i] = c;
                    let v = self.value(z);
                    if v < *best {
                        *best = v;
                        best_i = c;
                        improved = true;
                    }
                }
                for d in [0.5, -0.5] {
                    if self.exhausted() {
                        z[i] = best_i;
                        return;
                    }
                    z[i] = best_i + d;
                    let v = self.value(z);
                    if v < *best {
                        *best = v;
                        best_i += d;
                        improved = true;
                    }
                }
                z[i] = best_i;
            }
            if !improved {
                return;
            }
        }
    }

    /// For fixed `rho`, every other scalar enters exactly one gain, each a
    /// maximum of a term increasing and a term decreasing in it, so the
    /// minimizers have closed forms. For `mu_pq`, writing
    /// `alpha3 = K1 + A beta + B alpha` and `beta3 / rho_p = K2 + C / beta + D / alpha`,
    /// stationarity gives `alpha = s sqrt(D / B)`, `beta = s sqrt(C / A)` with
    /// `s` the positive root of `G s^2 + (K1 - K2) s - G`, `G = sqrt(AC) + sqrt(BD)`.
    fn fill_inner(&self, z: &mut [f64]) {
        let m = self.m;
        let inp = self.inputs;
        let rho: Vec<f64> = z[..m].iter().map(|v| 10f64.powf(*v)).collect();
        let shrink = ((inp.levels - 1.0) / inp.levels).powi(2);
        for p in 0..m {
            let floor = (inp.lambda[p] / inp.levels).powi(2);
            z[m + p] = if inp.stabilizable[p] {
                let u1 = inp.sqs_max[p] / inp.p_min[p];
                let u0 = 1.0 - inp.q_min[p] / inp.p_max[p];
                let w1 = inp.n * inp.sqs_max[p] * shrink / rho[p];
                balance(u0, u1, floor + w1, w1)
            } else {
                let k0 = inp.sps_max[p] / inp.p_min[p];
                let w1 = inp.n * inp.sps_max[p] * shrink / rho[p];
                balance(k0, k0, floor + w1, w1)
            };
            for q in 0..m {
                let t = inp.tilde_max[p][q];
                let lp = inp.p_min[p];
                let a = 2.0 * t / lp;
                let b = rho[q] * inp.chi[p] * inp.chi[p] / lp;
                let c = 2.0 * inp.n * t * shrink / rho[p];
                let d = rho[q] * inp.psi[p] * inp.psi[p] / rho[p];
                let (k1, k2) = (a + b, c + d);
                let g = (a * c).sqrt() + (b * d).sqrt();
                let s = if g > 0.0 {
                    let diff = k1 - k2;
                    let disc = (diff * diff + 4.0 * g * g).sqrt();
                    if diff >= 0.0 {
                        2.0 * g / (diff + disc)
                    } else {
                        (disc - diff) / (2.0 * g)
                    }
                } else {
                    1.0
                };
                let lim = |v: f64| v.log10().clamp(-INNER_LOG_LIMIT, INNER_LOG_LIMIT);
                z[2 * m + p * m + q] = if b > 0.0 {
                    lim(s * (d / b).sqrt())
                } else {
                    0.0
                };
                z[2 * m + m * m + p * m + q] = if a > 0.0 && c > 0.0 {
                    lim(s * (c / a).sqrt())
                } else {
                    0.0
                };
            }
        }
    }

    fn reduced(&mut self, z: &mut [f64]) -> f64 {
        self.fill_inner(z);
        self.value(z)
    }

    /// Compass search over `log10 rho` on the reduced objective, with an
    /// extra direction that scales every `rho` together.
    fn compass(&mut self, z: &mut [f64], best: &mut f64) {
        let m = self.m;
        let mut dirs: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        dirs.push(vec![1.0; m]);
        let mut step = 1.0;
        while step > 1e-6 && !self.exhausted() {
            let mut moved = false;
            for d in &dirs {
                for sign in [1.0, -1.0] {
                    if self.exhausted() {
                        return;
                    }
                    let mut trial = z.to_vec();
                    for (t, di) in trial[..m].iter_mut().zip(d) {
                        *t += sign * step * di;
                    }
                    let v = self.reduced(&mut trial);
                    if v < *best {
                        *best = v;
                        z.copy_from_slice(&trial);
                        moved = true;
                    }
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
    }
}

/// Outcome of the parameter search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub params: CertificateParams,
    pub condition_value: f64,
    pub initial_value: f64,
    pub evaluations: usize,
}

/// Searches the free scalars to minimize the condition value, starting
/// from all ones. Returns the best point seen, so the result is never
/// worse than the start.
///
/// Stage one is cyclic log-grid coordinate descent over every scalar.
/// Stage two fixes the per-mode and per-pair scalars at their exact
/// minimizers for given `rho` and runs a compass search over `rho` from
/// the stage-one point and from uniform starts `rho = 10^k`. `budget`
/// caps the number of full condition evaluations; the golden-section
/// searches inside stage two evaluate single gains and are not counted.
pub fn search_params(
    inputs: &GainInputs,
    weights: &ProbabilityWeights,
    stationary: &[f64],
    p_mats: Vec<Matrix>,
    q_mats: Vec<Option<Matrix>>,
    budget: usize,
) -> Result<SearchOutcome> {
    if budget < 1 {
        return Err(Error::InvalidParameter(
            "optimizer budget must be >= 1".into(),
        ));
    }
    let m = inputs.modes();
    let mut s = Search {
        inputs,
        weights,
        stationary,
        m,
        evaluations: 0,
        budget,
    };
    let mut z = vec![0.0; s.dim()];
    let initial_value = s.value(&z);
    let mut best = initial_value;
    s.coordinate_descent(&mut z, &mut best);

    let mut starts = vec![z[..m].to_vec()];
    starts.extend((-1..=5).map(|k| vec![f64::from(k); m]));
    for start in starts {
        if s.exhausted() {
            break;
        }
        let mut trial = z.clone();
        trial[..m].copy_from_slice(&start);
        let mut v = s.reduced(&mut trial);
        s.compass(&mut trial, &mut v);
        if v < best {
            best = v;
            z = trial;
        }
    }

    let mut params = s.params(&z);
    params.p = p_mats;
    params.q = q_mats;
    Ok(SearchOutcome {
        params,
        condition_value: best,
        initial_value,
        evaluations: s.evaluations,
    })
}

/// Default number of condition evaluations for [`optimize_params`].
pub const DEFAULT_BUDGET: usize = 20_000;

/// Knobs of the certificate search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertificateSettings {
    pub budget: usize,
    pub weight_thresholds: WeightThresholds,
}

impl Default for CertificateSettings {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            weight_thresholds: WeightThresholds::Staggered,
        }
    }
}

/// [`optimize_with`] with the default weight thresholds.
pub fn optimize_params(
    systems: &ModeSet,
    law: &SwitchingLaw,
    cfg: &ProtocolConfig,
    budget: usize,
) -> Result<CertificateReport> {
    let settings = CertificateSettings {
        budget,
        ..CertificateSettings::default()
    };
    optimize_with(systems, law, cfg, &settings)
}

/// Full certificate pipeline: classify modes, pick `P_p`, estimate the
/// interval propagators with `cfg.worst_strategy`, compute weights and
/// the stationary distribution, and search the free scalars.
pub fn optimize_with(
    systems: &ModeSet,
    law: &SwitchingLaw,
    cfg: &ProtocolConfig,
    settings: &CertificateSettings,
) -> Result<CertificateReport> {
    let budget = settings.budget;
    cfg.validate(systems)?;
    if law.modes() != systems.len() {
        return Err(Error::Dimension(format!(
            "law has {} modes, system has {}",
            law.modes(),
            systems.len()
        )));
    }
    let estimates = transition_estimates(systems, law, cfg)?;
    let w = weights_with(law, cfg.tau, settings.weight_thresholds)?;
    let pi = law.stationary()?;
    let (ps, qs) = lyapunov_matrices(systems)?;
    let inputs = GainInputs::new(systems, &estimates, cfg.levels, &ps, &qs)?;
    let outcome = search_params(&inputs, &w, &pi, ps, qs, budget)?;
    let gains = compute_gains(&outcome.params, &inputs);
    let value = condition_value(&gains, &w, &pi, &inputs.stabilizable)?;
    Ok(CertificateReport {
        tau: cfg.tau,
        levels: cfg.levels,
        strategy: cfg.worst_strategy,
        stabilizable: inputs.stabilizable.clone(),
        lambda: inputs.lambda.clone(),
        estimates,
        gains,
        weights: w,
        stationary: pi,
        condition_value: value,
        initial_value: outcome.initial_value,
        passes: value < 0.0,
        data_rate: cfg.data_rate(),
        params: outcome.params,
        evaluations: outcome.evaluations,
    })
}
