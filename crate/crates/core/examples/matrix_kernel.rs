//! The numerical kernel on the example's first mode.

use mjls::mathkit::{
    inf_norm, lyapunov_residual, mat_exp, solve_discrete_lyapunov, stationary_distribution,
    sym_eig_extremes, Matrix,
};
use mjls::switching::embedded_chain;

fn main() {
    let a_cl = Matrix::from_rows(&[[-1.0, 0.0], [0.0, -1.0]]).unwrap();
    let s = mat_exp(&a_cl, 0.1).unwrap();
    let q = Matrix::identity(2);
    let p = solve_discrete_lyapunov(&s, &q).unwrap();
    let eig = sym_eig_extremes(&p).unwrap();
    println!("exp((A+BK) tau) = {:?}", s.to_rows());
    println!("P = {:?}", p.to_rows());
    println!(
        "lambda(P) in [{:.6}, {:.6}]",
        eig.lambda_min, eig.lambda_max
    );
    println!("residual {:.2e}", lyapunov_residual(&s, &p, &q));

    let rot = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
    let r = mat_exp(&rot, std::f64::consts::FRAC_PI_2).unwrap();
    println!(
        "exp(J pi/2) = {:?}  (norm {:.3})",
        r.to_rows(),
        inf_norm(&r)
    );

    let gamma = Matrix::from_rows(&[
        [-0.05, 0.01, 0.04],
        [0.075, -0.15, 0.075],
        [0.039375, 0.005625, -0.045],
    ])
    .unwrap();
    let l = embedded_chain(&gamma).unwrap();
    println!("embedded chain {:?}", l.to_rows());
    println!("stationary {:?}", stationary_distribution(&l).unwrap());
}
