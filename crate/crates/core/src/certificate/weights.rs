use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::switching::{sojourn_cdf_mass, MarkovLaw, SemiMarkovLaw, SwitchingLaw};

/// Per-mode probabilities that a sojourn outlasts `2 tau` (`p_nu`),
/// outlasts `tau` (`p_upsilon`), or ends within `2 tau` (`p_mu`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityWeights {
    pub p_nu: Vec<f64>,
    pub p_upsilon: Vec<f64>,
    pub p_mu: Vec<f64>,
}

/// Horizons at which the sojourn probabilities are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightThresholds {
    /// `2 tau` for `p_nu` and `p_mu`, `tau` for `p_upsilon`.
    #[default]
    Staggered,
    /// `tau` for all three.
    Single,
}

impl WeightThresholds {
    fn long(self, tau: f64) -> f64 {
        match self {
            WeightThresholds::Staggered => 2.0 * tau,
            WeightThresholds::Single => tau,
        }
    }
}

pub fn weights_markov(law: &MarkovLaw, tau: f64) -> ProbabilityWeights {
    weights_markov_with(law, tau, WeightThresholds::Staggered)
}

pub fn weights_markov_with(law: &MarkovLaw, tau: f64, th: WeightThresholds) -> ProbabilityWeights {
    let long = th.long(tau);
    let m = law.modes();
    let mut w = ProbabilityWeights {
        p_nu: Vec::with_capacity(m),
        p_upsilon: Vec::with_capacity(m),
        p_mu: Vec::with_capacity(m),
    };
    for p in 0..m {
        let g = law.exit_rate(p);
        w.p_nu.push((-g * long).exp());
        w.p_upsilon.push((-g * tau).exp());
        w.p_mu.push(-(-g * long).exp_m1());
    }
    w
}

pub fn weights_semimarkov(law: &SemiMarkovLaw, tau: f64) -> Result<ProbabilityWeights> {
    weights_semimarkov_with(law, tau, WeightThresholds::Staggered)
}

pub fn weights_semimarkov_with(
    law: &SemiMarkovLaw,
    tau: f64,
    th: WeightThresholds,
) -> Result<ProbabilityWeights> {
    let long = th.long(tau);
    let m = law.modes();
    let mut w = ProbabilityWeights {
        p_nu: vec![0.0; m],
        p_upsilon: vec![0.0; m],
        p_mu: vec![0.0; m],
    };
    for p in 0..m {
        for (_, lam, dist) in law.exits(p) {
            w.p_mu[p] += lam * sojourn_cdf_mass(dist, 0.0, long)?;
            w.p_nu[p] += lam * sojourn_cdf_mass(dist, long, f64::INFINITY)?;
            w.p_upsilon[p] += lam * sojourn_cdf_mass(dist, tau, f64::INFINITY)?;
        }
    }
    Ok(w)
}

pub fn weights(law: &SwitchingLaw, tau: f64) -> Result<ProbabilityWeights> {
    weights_with(law, tau, WeightThresholds::Staggered)
}

pub fn weights_with(
    law: &SwitchingLaw,
    tau: f64,
    th: WeightThresholds,
) -> Result<ProbabilityWeights> {
    match law {
        SwitchingLaw::Markov(l) => Ok(weights_markov_with(l, tau, th)),
        SwitchingLaw::SemiMarkov(l) => weights_semimarkov_with(l, tau, th),
        // No switch can ever happen.
        SwitchingLaw::Fixed => Ok(ProbabilityWeights {
            p_nu: vec![1.0],
            p_upsilon: vec![1.0],
            p_mu: vec![0.0],
        }),
    }
}
