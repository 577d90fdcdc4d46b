//! Closed-loop simulation of the switched plant under the quantized link,
//! growth-rate estimates and seeded Monte Carlo batches.

mod analysis;
mod export;
mod montecarlo;
mod run;
mod scenario;

pub use analysis::{
    intersample_bound_check, lyapunov_exponent, IntersampleCheck, LyapunovEstimate,
};
pub use export::{quantizer_csv, trajectory_csv};
pub use montecarlo::{monte_carlo, summarize, MonteCarloSummary, RunSummary};
pub use run::{
    simulate, simulate_on_path, simulate_prepared, QuantizerRecord, SampleRecord, Trajectory,
};
pub use scenario::{Integrator, Prepared, Scenario, DEFAULT_RECORD_PER_INTERVAL};
