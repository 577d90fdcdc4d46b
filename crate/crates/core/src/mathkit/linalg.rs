use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::tol;

/// Solves `A X = B` by LU with partial pivoting.
pub fn lu_solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if b.rows() != n {
        return Err(Error::Dimension(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let m = b.cols();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for col in 0..n {
        let (pivot_row, pivot_abs) =
            (col..n)
                .map(|r| (r, lu[(r, col)].abs()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs <= tol::LU_PIVOT * scale {
            return Err(Error::Singular);
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
            for j in 0..m {
                let tmp = x[(col, j)];
                x[(col, j)] = x[(pivot_row, j)];
                x[(pivot_row, j)] = tmp;
            }
        }
        let pivot = lu[(col, col)];
        for r in col + 1..n {
            let factor = lu[(r, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            lu[(r, col)] = 0.0;
            for j in col + 1..n {
                lu[(r, j)] -= factor * lu[(col, j)];
            }
            for j in 0..m {
                x[(r, j)] -= factor * x[(col, j)];
            }
        }
    }
    for col in (0..n).rev() {
        let pivot = lu[(col, col)];
        for j in 0..m {
            let mut s = x[(col, j)];
            for k in col + 1..n {
                s -= lu[(col, k)] * x[(k, j)];
            }
            x[(col, j)] = s / pivot;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_with_pivoting() {
        let a = Matrix::from_rows(&[[0.0, 2.0], [3.0, 1.0]]).unwrap();
        let b = Matrix::column(&[4.0, 5.0]);
        let x = lu_solve(&a, &b).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(
            lu_solve(&a, &Matrix::identity(2)),
            Err(Error::Singular)
        ));
    }
}
