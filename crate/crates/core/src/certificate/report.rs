use std::fmt::Write;

use serde::Serialize;

use super::gains::{CertificateParams, ModeGains};
use super::weights::ProbabilityWeights;
use crate::protocol::{TransitionEstimates, WorstStrategy};

/// Everything the certificate computation produced.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub tau: f64,
    pub levels: u64,
    pub strategy: WorstStrategy,
    pub stabilizable: Vec<bool>,
    pub lambda: Vec<f64>,
    pub estimates: Vec<TransitionEstimates>,
    pub gains: ModeGains,
    pub weights: ProbabilityWeights,
    pub stationary: Vec<f64>,
    pub condition_value: f64,
    /// Condition value at the all-ones starting point.
    pub initial_value: f64,
    pub passes: bool,
    pub data_rate: f64,
    pub params: CertificateParams,
    pub evaluations: usize,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.17e}"))
}

impl CertificateReport {
    pub fn modes(&self) -> usize {
        self.stationary.len()
    }

    /// `key = value` lines, one quantity per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let strategy = match self.strategy {
            WorstStrategy::Bound => "bound",
            WorstStrategy::GridDp => "grid_dp",
        };
        let _ = writeln!(s, "passes = {}", self.passes);
        let _ = writeln!(s, "condition_value = {:.10e}", self.condition_value);
        let _ = writeln!(s, "initial_condition_value = {:.10e}", self.initial_value);
        let _ = writeln!(s, "tau = {}", self.tau);
        let _ = writeln!(s, "N = {}", self.levels);
        let _ = writeln!(s, "worst_strategy = {strategy}");
        let _ = writeln!(s, "data_rate_bits_per_second = {:.10}", self.data_rate);
        let _ = writeln!(s, "evaluations = {}", self.evaluations);
        for p in 0..self.modes() {
            let k = p + 1;
            let class = if self.stabilizable[p] {
                "stabilizable"
            } else {
                "unstabilizable"
            };
            let _ = writeln!(s, "mode.{k}.class = {class}");
            let _ = writeln!(s, "mode.{k}.pi = {:.10}", self.stationary[p]);
            let _ = writeln!(s, "mode.{k}.Lambda = {:.10}", self.lambda[p]);
            if let Some(nu) = self.gains.nu[p] {
                let _ = writeln!(s, "mode.{k}.nu = {nu:.10}");
            }
            if let Some(up) = self.gains.upsilon[p] {
                let _ = writeln!(s, "mode.{k}.upsilon = {up:.10}");
            }
            let _ = writeln!(s, "mode.{k}.mu = {:.10}", self.gains.mu[p]);
            for q in 0..self.modes() {
                let _ = writeln!(
                    s,
                    "mode.{k}.mu_pair.{} = {:.10}",
                    q + 1,
                    self.gains.mu_pq[p][q]
                );
            }
            let _ = writeln!(s, "mode.{k}.p_nu = {:.12}", self.weights.p_nu[p]);
            let _ = writeln!(s, "mode.{k}.p_upsilon = {:.12}", self.weights.p_upsilon[p]);
            let _ = writeln!(s, "mode.{k}.p_mu = {:.12}", self.weights.p_mu[p]);
            let e = &self.estimates[p];
            let _ = writeln!(s, "mode.{k}.worst_norm = {:.10}", e.s_check_norm);
            let _ = writeln!(s, "mode.{k}.gap_norm = {:.10}", e.s_diff_norm);
            let _ = writeln!(s, "mode.{k}.chi = {:.10}", e.chi);
            let _ = writeln!(s, "mode.{k}.psi = {:.10}", e.psi);
            let _ = writeln!(s, "mode.{k}.rho = {:.6e}", self.params.rho[p]);
            if self.stabilizable[p] {
                let _ = writeln!(s, "mode.{k}.alpha = {:.6e}", self.params.alpha[p]);
            } else {
                let _ = writeln!(s, "mode.{k}.beta = {:.6e}", self.params.beta[p]);
            }
        }
        s
    }

    /// One row per mode.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("mode,class,pi,nu,upsilon,mu,p_nu,p_upsilon,p_mu,chi,psi\n");
        for p in 0..self.modes() {
            let _ = writeln!(
                s,
                "{},{},{:.17e},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                p + 1,
                if self.stabilizable[p] { "s" } else { "u" },
                self.stationary[p],
                opt(self.gains.nu[p]),
                opt(self.gains.upsilon[p]),
                self.gains.mu[p],
                self.weights.p_nu[p],
                self.weights.p_upsilon[p],
                self.weights.p_mu[p],
                self.estimates[p].chi,
                self.estimates[p].psi,
            );
        }
        s
    }
}
