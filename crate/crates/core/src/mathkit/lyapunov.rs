use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::tol;

/// Solves `S^T P S - P = -Q` by summing `P = sum_k (S^T)^k Q S^k`.
///
/// The series converges exactly when the spectral radius of `S` is below
/// one; failure to converge is reported as [`Error::Divergence`].
pub fn solve_discrete_lyapunov(s: &Matrix, q: &Matrix) -> Result<Matrix> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    if q.rows() != s.rows() || q.cols() != s.cols() {
        return Err(Error::Dimension(format!(
            "Q is {}x{}, S is {}x{}",
            q.rows(),
            q.cols(),
            s.rows(),
            s.cols()
        )));
    }
    let st = s.transpose();
    let mut p = q.clone();
    let mut term = q.clone();
    for k in 1..=tol::LYAPUNOV_MAX_TERMS {
        term = st.matmul(&term.matmul(s));
        let size = term.inf_norm();
        if !size.is_finite() || size > tol::LYAPUNOV_BLOWUP {
            return Err(Error::Divergence { terms: k });
        }
        p = &p + &term;
        if size < tol::LYAPUNOV_TERM * p.inf_norm().max(1.0) {
            return Ok(p.symmetrize());
        }
    }
    Err(Error::Divergence {
        terms: tol::LYAPUNOV_MAX_TERMS,
    })
}

/// Spectral radius of `S` below one, decided by convergence of the
/// Lyapunov series with `Q = I`.
pub fn is_schur(s: &Matrix) -> bool {
    s.is_square() && solve_discrete_lyapunov(s, &Matrix::identity(s.rows())).is_ok()
}

/// `||S^T P S - P + Q||_inf`.
pub fn lyapunov_residual(s: &Matrix, p: &Matrix, q: &Matrix) -> f64 {
    (&(&s.congruence(p) - p) + q).inf_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::mat_exp;

    #[test]
    fn zero_s_gives_q() {
        let p = solve_discrete_lyapunov(&Matrix::zeros(2, 2), &Matrix::identity(2)).unwrap();
        assert_eq!(p, Matrix::identity(2));
    }

    #[test]
    fn geometric_series() {
        let s = Matrix::identity(2).scale(0.5);
        let p = solve_discrete_lyapunov(&s, &Matrix::identity(2)).unwrap();
        assert!((p[(0, 0)] - 4.0 / 3.0).abs() < 1e-13);
        assert!((p[(1, 1)] - 4.0 / 3.0).abs() < 1e-13);
        assert!(p[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn sampled_closed_loop_of_mode_one() {
        // A + B K = -I for the first mode of the three-mode example.
        let s = mat_exp(&Matrix::diag(&[-1.0, -1.0]), 0.1).unwrap();
        let p = solve_discrete_lyapunov(&s, &Matrix::identity(2)).unwrap();
        let expected = 1.0 / (1.0 - (-0.2f64).exp());
        assert!((p[(0, 0)] - expected).abs() < 1e-10);
        assert!((p[(0, 0)] - 5.5167).abs() < 1e-4);
        assert!(lyapunov_residual(&s, &p, &Matrix::identity(2)) < 1e-10);
    }

    #[test]
    fn schur_examples() {
        assert!(is_schur(&Matrix::identity(2).scale(0.9)));
        assert!(!is_schur(&Matrix::identity(2)));
        let s = mat_exp(&Matrix::diag(&[1.0, -1.0]), 0.1).unwrap();
        assert!(!is_schur(&s));
    }

    #[test]
    fn divergence_is_an_error() {
        assert!(matches!(
            solve_discrete_lyapunov(&Matrix::identity(1).scale(1.5), &Matrix::identity(1)),
            Err(Error::Divergence { .. })
        ));
    }
}
