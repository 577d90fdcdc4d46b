use serde::Serialize;

use crate::error::{Error, Result};
use crate::mathkit::{is_positive_definite, sym_eig_extremes, Matrix};
use crate::protocol::TransitionEstimates;
use crate::system::ModeSet;

/// Free parameters of the stabilization condition. Per-mode vectors have
/// one entry per mode; `alpha[p]` is used for stabilizable modes and
/// `beta[p]` for the others, the unused entry is carried but ignored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateParams {
    pub rho: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha_pq: Vec<Vec<f64>>,
    pub beta_pq: Vec<Vec<f64>>,
    #[serde(skip)]
    pub p: Vec<Matrix>,
    #[serde(skip)]
    pub q: Vec<Option<Matrix>>,
}

impl CertificateParams {
    /// All scalars at 1 with the given Lyapunov matrices.
    pub fn ones(p: Vec<Matrix>, q: Vec<Option<Matrix>>) -> Self {
        let m = p.len();
        Self {
            rho: vec![1.0; m],
            alpha: vec![1.0; m],
            beta: vec![1.0; m],
            alpha_pq: vec![vec![1.0; m]; m],
            beta_pq: vec![vec![1.0; m]; m],
            p,
            q,
        }
    }

    pub fn modes(&self) -> usize {
        self.rho.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.modes();
        let scalars = self
            .rho
            .iter()
            .chain(&self.alpha)
            .chain(&self.beta)
            .chain(self.alpha_pq.iter().flatten())
            .chain(self.beta_pq.iter().flatten());
        if self.alpha.len() != m
            || self.beta.len() != m
            || self.alpha_pq.len() != m
            || self.beta_pq.len() != m
            || self
                .alpha_pq
                .iter()
                .chain(&self.beta_pq)
                .any(|r| r.len() != m)
            || self.p.len() != m
            || self.q.len() != m
        {
            return Err(Error::Dimension(
                "certificate parameter shapes disagree".into(),
            ));
        }
        for v in scalars {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "certificate scalars must be positive and finite, got {v}"
                )));
            }
        }
        for p in &self.p {
            if !is_positive_definite(p) {
                return Err(Error::NotPositiveDefinite);
            }
        }
        for q in self.q.iter().flatten() {
            if !is_positive_definite(q) {
                return Err(Error::NotPositiveDefinite);
            }
        }
        Ok(())
    }
}

/// Eigenvalue constants the gain formulas need, computed once per choice
/// of `P_p`, `Q_p` and estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct GainInputs {
    pub n: f64,
    pub levels: f64,
    pub stabilizable: Vec<bool>,
    pub lambda: Vec<f64>,
    pub p_min: Vec<f64>,
    pub p_max: Vec<f64>,
    pub q_min: Vec<f64>,
    /// `lambda_max(S^T Q S)` (stabilizable modes).
    pub sqs_max: Vec<f64>,
    /// `lambda_max(S^T P S)`.
    pub sps_max: Vec<f64>,
    /// `lambda_max(S~_p^T P_q S~_p)`.
    pub tilde_max: Vec<Vec<f64>>,
    pub chi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl GainInputs {
    pub fn new(
        systems: &ModeSet,
        estimates: &[TransitionEstimates],
        levels: u64,
        p_mats: &[Matrix],
        q_mats: &[Option<Matrix>],
    ) -> Result<Self> {
        let m = systems.len();
        let n = systems.state_dim();
        if estimates.len() != m || p_mats.len() != m || q_mats.len() != m {
            return Err(Error::Dimension("one estimate, P and Q per mode".into()));
        }
        let mut out = Self {
            n: n as f64,
            levels: levels as f64,
            stabilizable: systems.stabilizable(),
            lambda: Vec::with_capacity(m),
            p_min: Vec::with_capacity(m),
            p_max: Vec::with_capacity(m),
            q_min: vec![0.0; m],
            sqs_max: vec![0.0; m],
            sps_max: Vec::with_capacity(m),
            tilde_max: vec![vec![0.0; m]; m],
            chi: estimates.iter().map(|e| e.chi).collect(),
            psi: estimates.iter().map(|e| e.psi).collect(),
        };
        for p in 0..m {
            let s = &systems.sampled(p).closed;
            let pm = &p_mats[p];
            if pm.rows() != n || !is_positive_definite(pm) {
                return Err(Error::NotPositiveDefinite);
            }
            let pe = sym_eig_extremes(pm)?;
            out.lambda.push(systems.sampled(p).lambda);
            out.p_min.push(pe.lambda_min);
            out.p_max.push(pe.lambda_max);
            out.sps_max
                .push(sym_eig_extremes(&s.congruence(pm))?.lambda_max);
            if out.stabilizable[p] {
                let q = q_mats[p].as_ref().ok_or_else(|| {
                    Error::InvalidParameter(format!("stabilizable mode {} needs Q", p + 1))
                })?;
                out.q_min[p] = sym_eig_extremes(q)?.lambda_min;
                out.sqs_max[p] = sym_eig_extremes(&s.congruence(q))?.lambda_max;
            }
            for q in 0..m {
                let st = &estimates[p].s_tilde;
                if st.rows() != n || st.cols() != 2 * n {
                    return Err(Error::Dimension(format!(
                        "expected propagator of mode {} is {}x{}",
                        p + 1,
                        st.rows(),
                        st.cols()
                    )));
                }
                out.tilde_max[p][q] = sym_eig_extremes(&st.congruence(&p_mats[q]))?.lambda_max;
            }
        }
        Ok(out)
    }

    pub fn modes(&self) -> usize {
        self.lambda.len()
    }

    fn shrink(&self) -> f64 {
        let r = (self.levels - 1.0) / self.levels;
        r * r
    }

    fn floor_term(&self, p: usize) -> f64 {
        let r = self.lambda[p] / self.levels;
        r * r
    }

    /// `(alpha1, beta1, nu)` for a stabilizable mode.
    pub fn nu_parts(&self, p: usize, rho: f64, alpha: f64) -> (f64, f64, f64) {
        let a1 = self.q_min[p] / self.p_max[p] - alpha * self.sqs_max[p] / self.p_min[p];
        let b1 = (1.0 + 1.0 / alpha) * self.n * self.sqs_max[p] * self.shrink();
        (a1, b1, (1.0 - a1).max(b1 / rho + self.floor_term(p)))
    }

    /// `(alpha2, beta2, upsilon)` for an unstabilizable mode.
    pub fn upsilon_parts(&self, p: usize, rho: f64, beta: f64) -> (f64, f64, f64) {
        let a2 = (1.0 + beta) * self.sps_max[p] / self.p_min[p];
        let b2 = (1.0 + 1.0 / beta) * self.n * self.sps_max[p] * self.shrink();
        (a2, b2, a2.max(b2 / rho + self.floor_term(p)))
    }

    /// `(alpha3, beta3, mu)` for the pair `(p, q)`.
    pub fn mu_parts(
        &self,
        p: usize,
        q: usize,
        rho_p: f64,
        rho_q: f64,
        alpha_pq: f64,
        beta_pq: f64,
    ) -> (f64, f64, f64) {
        let t = self.tilde_max[p][q];
        let lp = self.p_min[p];
        let a3 = 2.0 * (1.0 + beta_pq) * t / lp
            + rho_q * self.chi[p] * self.chi[p] * (1.0 + alpha_pq) / lp;
        let b3 = 2.0 * (1.0 + 1.0 / beta_pq) * self.n * t * self.shrink()
            + rho_q * self.psi[p] * self.psi[p] * (1.0 + 1.0 / alpha_pq);
        (a3, b3, a3.max(b3 / rho_p))
    }
}

/// Per-mode and per-pair gains of the stabilization condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeGains {
    pub nu: Vec<Option<f64>>,
    pub upsilon: Vec<Option<f64>>,
    pub mu_pq: Vec<Vec<f64>>,
    pub mu: Vec<f64>,
    pub alpha1: Vec<Option<f64>>,
    pub beta1: Vec<Option<f64>>,
    pub alpha2: Vec<Option<f64>>,
    pub beta2: Vec<Option<f64>>,
    pub alpha3: Vec<Vec<f64>>,
    pub beta3: Vec<Vec<f64>>,
}

impl ModeGains {
    /// The gain entering the non-switching term: `nu_p` or `upsilon_p`.
    pub fn stay_gain(&self, p: usize) -> f64 {
        self.nu[p]
            .or(self.upsilon[p])
            .expect("each mode has one stay gain")
    }
}

pub fn mode_gain_nu(p: usize, params: &CertificateParams, inputs: &GainInputs) -> Result<f64> {
    if !inputs.stabilizable[p] {
        return Err(Error::InvalidParameter(format!(
            "mode {} is not stabilizable",
            p + 1
        )));
    }
    Ok(inputs.nu_parts(p, params.rho[p], params.alpha[p]).2)
}

pub fn mode_gain_upsilon(p: usize, params: &CertificateParams, inputs: &GainInputs) -> Result<f64> {
    if inputs.stabilizable[p] {
        return Err(Error::InvalidParameter(format!(
            "mode {} is stabilizable",
            p + 1
        )));
    }
    Ok(inputs.upsilon_parts(p, params.rho[p], params.beta[p]).2)
}

pub fn pair_gain_mu(p: usize, q: usize, params: &CertificateParams, inputs: &GainInputs) -> f64 {
    inputs
        .mu_parts(
            p,
            q,
            params.rho[p],
            params.rho[q],
            params.alpha_pq[p][q],
            params.beta_pq[p][q],
        )
        .2
}

pub fn compute_gains(params: &CertificateParams, inputs: &GainInputs) -> ModeGains {
    let m = inputs.modes();
    let mut g = ModeGains {
        nu: vec![None; m],
        upsilon: vec![None; m],
        mu_pq: vec![vec![0.0; m]; m],
        mu: vec![0.0; m],
        alpha1: vec![None; m],
        beta1: vec![None; m],
        alpha2: vec![None; m],
        beta2: vec![None; m],
        alpha3: vec![vec![0.0; m]; m],
        beta3: vec![vec![0.0; m]; m],
    };
    for p in 0..m {
        if inputs.stabilizable[p] {
            let (a, b, v) = inputs.nu_parts(p, params.rho[p], params.alpha[p]);
            (g.alpha1[p], g.beta1[p], g.nu[p]) = (Some(a), Some(b), Some(v));
        } else {
            let (a, b, v) = inputs.upsilon_parts(p, params.rho[p], params.beta[p]);
            (g.alpha2[p], g.beta2[p], g.upsilon[p]) = (Some(a), Some(b), Some(v));
        }
        for q in 0..m {
            let (a, b, v) = inputs.mu_parts(
                p,
                q,
                params.rho[p],
                params.rho[q],
                params.alpha_pq[p][q],
                params.beta_pq[p][q],
            );
            g.alpha3[p][q] = a;
            g.beta3[p][q] = b;
            g.mu_pq[p][q] = v;
        }
        g.mu[p] = g.mu_pq[p].iter().copied().fold(0.0, f64::max);
    }
    g
}
