use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::tol;

/// Smallest and largest eigenvalue of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymEigExtremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

fn check_symmetric(p: &Matrix) -> Result<()> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let asym = (p - &p.transpose()).max_abs();
    if asym > tol::SYMMETRY * p.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn sym_eigenvalues(p: &Matrix) -> Result<Vec<f64>> {
    check_symmetric(p)?;
    let n = p.rows();
    let mut a = p.symmetrize();
    let scale = a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = tol::JACOBI_OFF_DIAGONAL * scale.max(f64::MIN_POSITIVE);

    for _ in 0..tol::JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p_ in 0..n {
            for q in p_ + 1..n {
                let apq = a[(p_, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p_, p_)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p_)];
                    let akq = a[(k, q)];
                    a[(k, p_)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p_, k)];
                    let aqk = a[(q, k)];
                    a[(p_, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

pub fn sym_eig_extremes(p: &Matrix) -> Result<SymEigExtremes> {
    let eig = sym_eigenvalues(p)?;
    Ok(SymEigExtremes {
        lambda_min: eig[0],
        lambda_max: eig[eig.len() - 1],
    })
}

/// Cholesky-based test: every pivot must exceed the pivot tolerance.
pub fn is_positive_definite(p: &Matrix) -> bool {
    if check_symmetric(p).is_err() {
        return false;
    }
    let n = p.rows();
    let a = p.symmetrize();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.is_nan() || d <= tol::CHOLESKY_PIVOT {
            return false;
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_examples() {
        let e = sym_eig_extremes(&Matrix::identity(3)).unwrap();
        assert_eq!((e.lambda_min, e.lambda_max), (1.0, 1.0));
        let e = sym_eig_extremes(&Matrix::diag(&[2.0, -1.0, 5.0])).unwrap();
        assert_eq!((e.lambda_min, e.lambda_max), (-1.0, 5.0));
        let e = sym_eig_extremes(&Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        assert!((e.lambda_min - 1.0).abs() < 1e-12);
        assert!((e.lambda_max - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric() {
        let p = Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            sym_eig_extremes(&p),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_averaged() {
        let p = Matrix::from_rows(&[[2.0, 1.0 + 1e-13], [1.0, 2.0]]).unwrap();
        let e = sym_eig_extremes(&p).unwrap();
        assert!((e.lambda_max - 3.0).abs() < 1e-12);
    }

    #[test]
    fn positive_definite_examples() {
        assert!(is_positive_definite(&Matrix::identity(3)));
        assert!(!is_positive_definite(&Matrix::diag(&[1.0, 0.0])));
        assert!(is_positive_definite(
            &Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()
        ));
        assert!(!is_positive_definite(
            &Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap()
        ));
    }
}
