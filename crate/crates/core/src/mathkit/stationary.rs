use super::linalg::lu_solve;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::tol;

/// Checks that `l` is square, nonnegative and has unit row sums.
pub fn check_row_stochastic(l: &Matrix) -> Result<()> {
    if !l.is_square() {
        return Err(Error::NotSquare {
            rows: l.rows(),
            cols: l.cols(),
        });
    }
    for i in 0..l.rows() {
        let row = l.row(i);
        if let Some(j) = row.iter().position(|v| *v < 0.0) {
            return Err(Error::NotStochastic(format!(
                "entry ({i}, {j}) = {} is negative",
                row[j]
            )));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > tol::ROW_SUM {
            return Err(Error::NotStochastic(format!("row {i} sums to {sum}")));
        }
    }
    Ok(())
}

/// Verifies every mode reaches every other along positive entries of `l`.
pub fn check_irreducible(l: &Matrix) -> Result<()> {
    let m = l.rows();
    for from in 0..m {
        let mut seen = vec![false; m];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(i) = stack.pop() {
            for (j, v) in l.row(i).iter().enumerate() {
                if *v > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if let Some(to) = seen.iter().position(|s| !s) {
            return Err(Error::Reducible { from, to });
        }
    }
    Ok(())
}

/// `max_j |(pi L)_j - pi_j|`.
pub fn stationary_residual(l: &Matrix, pi: &[f64]) -> f64 {
    l.vec_mul(pi)
        .iter()
        .zip(pi)
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// Stationary distribution `pi L = pi`, `sum pi = 1` of an irreducible
/// row-stochastic matrix. Solved directly with the normalization row
/// replacing one balance equation; power iteration on the lazy chain
/// `(L + I) / 2` polishes the result if the direct residual is too large.
pub fn stationary_distribution(l: &Matrix) -> Result<Vec<f64>> {
    check_row_stochastic(l)?;
    check_irreducible(l)?;
    let m = l.rows();
    let mut a = &l.transpose() - &Matrix::identity(m);
    for j in 0..m {
        a[(m - 1, j)] = 1.0;
    }
    let mut rhs = Matrix::zeros(m, 1);
    rhs[(m - 1, 0)] = 1.0;
    let sol = lu_solve(&a, &rhs).map_err(|_| Error::Reducible { from: 0, to: 0 })?;
    let mut pi = normalize(sol.as_slice().to_vec());

    if stationary_residual(l, &pi) > tol::STATIONARY_RESIDUAL {
        for _ in 0..tol::STATIONARY_POWER_ITERS {
            let step = l.vec_mul(&pi);
            pi = normalize(pi.iter().zip(&step).map(|(a, b)| 0.5 * (a + b)).collect());
            if stationary_residual(l, &pi) <= tol::STATIONARY_RESIDUAL {
                break;
            }
        }
    }
    Ok(pi)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}
