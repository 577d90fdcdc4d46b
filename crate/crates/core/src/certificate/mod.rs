//! The almost-sure stabilization condition: per-mode gains, sojourn
//! probability weights, the condition value and a search over its free
//! parameters.

mod gains;
mod optimize;
mod report;
mod weights;

pub use gains::{
    compute_gains, mode_gain_nu, mode_gain_upsilon, pair_gain_mu, CertificateParams, GainInputs,
    ModeGains,
};
pub use optimize::{
    condition_value, lyapunov_matrices, optimize_params, optimize_with, search_params,
    CertificateSettings, SearchOutcome, DEFAULT_BUDGET,
};
pub use report::CertificateReport;
pub use weights::{
    weights, weights_markov, weights_markov_with, weights_semimarkov, weights_semimarkov_with,
    weights_with, ProbabilityWeights, WeightThresholds,
};
