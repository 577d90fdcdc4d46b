//! Matrix exponential by scaling and squaring with a fixed degree-13 Padé
//! approximant (Higham's coefficients).

use super::linalg::lu_solve;
use super::matrix::Matrix;
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// Largest norm for which the degree-13 approximant alone is accurate to unit roundoff.
const THETA13: f64 = 5.371920351148152;

/// `exp(A t)`.
pub fn mat_exp(a: &Matrix, t: f64) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "exponent time {t} is not finite"
        )));
    }
    let at = a.scale(t);
    let norm = at.inf_norm();
    if norm == 0.0 {
        return Ok(Matrix::identity(a.rows()));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = at.scale(2f64.powi(-squarings));
    let mut result = pade13(&scaled)?;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}

fn pade13(a: &Matrix) -> Result<Matrix> {
    let b = &PADE13;
    let n = a.rows();
    let ident = Matrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let inner_u = &(&a6.scale(b[13]) + &a4.scale(b[11])) + &a2.scale(b[9]);
    let tail_u = &(&(&a6.scale(b[7]) + &a4.scale(b[5])) + &a2.scale(b[3])) + &ident.scale(b[1]);
    let u = a.matmul(&(&a6.matmul(&inner_u) + &tail_u));

    let inner_v = &(&a6.scale(b[12]) + &a4.scale(b[10])) + &a2.scale(b[8]);
    let tail_v = &(&(&a6.scale(b[6]) + &a4.scale(b[4])) + &a2.scale(b[2])) + &ident.scale(b[0]);
    let v = &a6.matmul(&inner_v) + &tail_v;

    let numer = &v + &u;
    let denom = &v - &u;
    lu_solve(&denom, &numer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_gives_identity() {
        let e = mat_exp(&Matrix::zeros(2, 2), 1.0).unwrap();
        assert_eq!(e, Matrix::identity(2));
    }

    #[test]
    fn diagonal_exponential() {
        let e = mat_exp(&Matrix::diag(&[1.0, -1.0]), 0.1).unwrap();
        assert!((e[(0, 0)] - 0.1f64.exp()).abs() < 1e-15);
        assert!((e[(1, 1)] - (-0.1f64).exp()).abs() < 1e-15);
        assert_eq!(e[(0, 1)], 0.0);
        assert!((e[(0, 0)] - 1.105171).abs() < 1e-6);
        assert!((e[(1, 1)] - 0.904837).abs() < 1e-6);
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, w], [-w, 0]] t) is a rotation by w t.
        let w = 3.0;
        let a = Matrix::from_rows(&[[0.0, w], [-w, 0.0]]).unwrap();
        let e = mat_exp(&a, 2.0).unwrap();
        let th = w * 2.0;
        assert!((e[(0, 0)] - th.cos()).abs() < 1e-13);
        assert!((e[(0, 1)] - th.sin()).abs() < 1e-13);
        assert!((e[(1, 0)] + th.sin()).abs() < 1e-13);
    }

    #[test]
    fn large_norm_scalar() {
        let e = mat_exp(&Matrix::diag(&[-30.0, 20.0]), 2.0).unwrap();
        assert!(((e[(0, 0)] - (-60f64).exp()) / (-60f64).exp()).abs() < 1e-12);
        assert!(((e[(1, 1)] - 40f64.exp()) / 40f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            mat_exp(&Matrix::zeros(2, 3), 1.0),
            Err(Error::NotSquare { .. })
        ));
    }
}
