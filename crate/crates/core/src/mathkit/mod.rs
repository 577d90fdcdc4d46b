//! Dense small-matrix numerics: infinity norms, matrix exponentials,
//! symmetric eigenvalue extremes, positive definiteness, discrete Lyapunov
//! equations and stationary distributions.

mod expm;
mod linalg;
mod lyapunov;
mod matrix;
mod stationary;
mod symmetric;

pub use expm::mat_exp;
pub use linalg::lu_solve;
pub use lyapunov::{is_schur, lyapunov_residual, solve_discrete_lyapunov};
pub use matrix::{vec_inf_dist, vec_inf_norm, Matrix};
pub use stationary::{
    check_irreducible, check_row_stochastic, stationary_distribution, stationary_residual,
};
pub use symmetric::{is_positive_definite, sym_eig_extremes, sym_eigenvalues, SymEigExtremes};

/// Induced infinity norm (max absolute row sum; max absolute entry for a column).
pub fn inf_norm(a: &Matrix) -> f64 {
    a.inf_norm()
}
