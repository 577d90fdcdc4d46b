//! Numerical tolerances used across the crate, collected in one place.

/// Off-diagonal Frobenius norm (relative to the matrix norm) at which cyclic
/// Jacobi stops.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;
/// Maximum number of Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Accepted asymmetry `max |P - P^T|`, relative to `max(1, max |P|)`.
pub const SYMMETRY: f64 = 1e-10;
/// Cholesky pivots must exceed this to count as positive definite.
pub const CHOLESKY_PIVOT: f64 = 1e-12;

/// The Lyapunov series stops once a term's infinity norm drops below this
/// (relative to `max(1, ||P||)`).
pub const LYAPUNOV_TERM: f64 = 1e-14;
/// Maximum number of Lyapunov series terms before declaring divergence.
pub const LYAPUNOV_MAX_TERMS: usize = 100_000;
/// Term norm past which the Lyapunov series is declared divergent early.
pub const LYAPUNOV_BLOWUP: f64 = 1e200;

/// Row sums of stochastic matrices and generators.
pub const ROW_SUM: f64 = 1e-12;
/// Residual target of the stationary-distribution solve.
pub const STATIONARY_RESIDUAL: f64 = 1e-12;
/// Power-iteration budget of the stationary-distribution fallback.
pub const STATIONARY_POWER_ITERS: usize = 100_000;
/// Pivot magnitude below which LU declares a matrix singular.
pub const LU_PIVOT: f64 = 1e-13;

/// State norm past which a simulation run is frozen as divergent.
pub const BLOWUP_NORM: f64 = 1e300;

/// Default relative rounding margin added to the quantizer radius.
pub const RADIUS_ROUNDING_MARGIN: f64 = 1e-9;
