#![allow(dead_code)]

use mjls::mathkit::{vec_inf_norm, Matrix};
use mjls::protocol::ProtocolConfig;
use mjls::simulator::{Integrator, Scenario, DEFAULT_RECORD_PER_INTERVAL};
use mjls::switching::{MarkovLaw, SemiMarkovLaw, SojournDistribution, SwitchingLaw};
use mjls::system::{ModeLinearSystem, ModeSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn m<const C: usize>(rows: &[[f64; C]]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

pub fn example_modes() -> Vec<ModeLinearSystem> {
    vec![
        ModeLinearSystem::new(
            m(&[[1.0, 0.0], [0.0, -1.0]]),
            Matrix::column(&[1.0, 0.0]),
            m(&[[-2.0, 0.0]]),
        )
        .unwrap(),
        ModeLinearSystem::new(
            m(&[[1.0, 0.0], [0.0, -1.0]]),
            Matrix::column(&[0.0, 1.0]),
            m(&[[0.0, 0.0]]),
        )
        .unwrap(),
        ModeLinearSystem::new(
            m(&[[0.0, 1.0], [-1.0, 0.0]]),
            Matrix::column(&[0.0, 1.0]),
            m(&[[0.0, -4.0]]),
        )
        .unwrap(),
    ]
}

pub fn example_generator() -> Matrix {
    m(&[
        [-0.05, 0.01, 0.04],
        [0.075, -0.15, 0.075],
        [0.039375, 0.005625, -0.045],
    ])
}

pub fn example_law() -> SwitchingLaw {
    SwitchingLaw::Markov(MarkovLaw::new(example_generator()).unwrap())
}

pub fn example_set() -> ModeSet {
    ModeSet::new(example_modes(), 0.1).unwrap()
}

pub fn example_protocol() -> ProtocolConfig {
    ProtocolConfig::new(0.1, 10, 2, 3, 10.0)
}

pub fn max_sample_gap(a: &mjls::simulator::Trajectory, b: &mjls::simulator::Trajectory) -> f64 {
    a.quantizer_log
        .iter()
        .zip(&b.quantizer_log)
        .map(|(r, s)| {
            r.x.iter()
                .zip(&s.x)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(lo..hi)).collect();
    Matrix::from_row_major(rows, cols, data).unwrap()
}

/// Random generator with off-diagonal rates in `[lo, hi)`.
pub fn random_generator(rng: &mut ChaCha8Rng, modes: usize, lo: f64, hi: f64) -> Matrix {
    let mut g = Matrix::zeros(modes, modes);
    for i in 0..modes {
        let mut total = 0.0;
        for j in 0..modes {
            if i != j {
                let r = rng.random_range(lo..hi);
                g[(i, j)] = r;
                total += r;
            }
        }
        g[(i, i)] = -total;
    }
    g
}

/// Random closed-loop scenario for the containment suite.
///
/// Every mode has `B` square and invertible. A stabilizable mode gets the
/// gain that places `A + B K` at a random Hurwitz matrix; an unstable mode
/// keeps `K = 0` and an `A` with a positive eigenvalue. The data-rate
/// condition is enforced by redrawing.
pub fn random_scenario(seed: u64, horizon: f64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
    loop {
        let n = rng.random_range(1..=3usize);
        let modes = rng.random_range(1..=3usize);
        let tau = [0.05, 0.1, 0.2][rng.random_range(0..3usize)];
        let levels = rng.random_range(3..=12u64);
        let mut systems = Vec::with_capacity(modes);
        for _ in 0..modes {
            let a = uniform_matrix(&mut rng, n, n, -2.0, 2.0);
            let b = &Matrix::identity(n) + &uniform_matrix(&mut rng, n, n, -0.3, 0.3);
            let k = if rng.random_bool(0.6) {
                let skew = uniform_matrix(&mut rng, n, n, -1.0, 1.0);
                let target = &(&skew - &skew.transpose())
                    - &Matrix::identity(n).scale(rng.random_range(0.5..3.0));
                let binv = mjls::mathkit::lu_solve(&b, &Matrix::identity(n)).unwrap();
                binv.matmul(&(&target - &a))
            } else {
                Matrix::zeros(n, n)
            };
            let a = if k.max_abs() == 0.0 {
                &a + &Matrix::identity(n).scale(rng.random_range(0.1..1.0))
            } else {
                a
            };
            systems.push(ModeLinearSystem::new(a, b, k).unwrap());
        }
        let Ok(set) = ModeSet::new(systems, tau) else {
            continue;
        };
        if set.check_data_rate(levels).is_err() {
            continue;
        }
        let law = if modes == 1 {
            SwitchingLaw::Fixed
        } else {
            SwitchingLaw::Markov(
                MarkovLaw::new(random_generator(&mut rng, modes, 0.1, 5.0)).unwrap(),
            )
        };
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let e0 = vec_inf_norm(&x0) * rng.random_range(1.0..2.0) + 0.1;
        let protocol = ProtocolConfig::new(tau, levels, n, modes, e0);
        return Scenario {
            systems: set,
            law,
            protocol,
            x0,
            horizon,
            integrator: Integrator::EventExact,
            seed,
            initial_mode: rng.random_range(0..modes),
            record_per_interval: DEFAULT_RECORD_PER_INTERVAL,
        };
    }
}

/// exp(A t) by a 60-term Taylor series on `A t / 2^10`, squared back up.
pub fn taylor_oracle(a: &Matrix, t: f64) -> Matrix {
    let n = a.rows();
    let x = a.scale(t / 1024.0);
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=60 {
        term = term.matmul(&x).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..10 {
        sum = sum.matmul(&sum);
    }
    sum
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Matrix {
    let data = (0..n * n).map(|_| rng.random_range(lo..hi)).collect();
    Matrix::from_row_major(n, n, data).unwrap()
}

pub fn rel_err(got: &Matrix, want: &Matrix) -> f64 {
    (got - want).inf_norm() / want.inf_norm().max(f64::MIN_POSITIVE)
}

pub fn closed_form_2x2(p: &Matrix) -> (f64, f64) {
    let (a, b, d) = (p[(0, 0)], p[(0, 1)], p[(1, 1)]);
    let mid = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mid - r, mid + r)
}

/// Trigonometric solution of the characteristic cubic of a symmetric 3x3.
pub fn closed_form_3x3(a: &Matrix) -> (f64, f64) {
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = (a[(0, 0)] + a[(1, 1)] + a[(2, 2)]) / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return (q, q);
    }
    let b = (a - &Matrix::identity(3).scale(q)).scale(1.0 / p);
    let det = b[(0, 0)] * (b[(1, 1)] * b[(2, 2)] - b[(1, 2)] * b[(2, 1)])
        - b[(0, 1)] * (b[(1, 0)] * b[(2, 2)] - b[(1, 2)] * b[(2, 0)])
        + b[(0, 2)] * (b[(1, 0)] * b[(2, 1)] - b[(1, 1)] * b[(2, 0)]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    (lo, hi)
}

pub fn exponential_twin(law: &MarkovLaw) -> SemiMarkovLaw {
    let m = law.modes();
    let table = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (law.embedded_chain()[(i, j)] > 0.0).then_some(
                        SojournDistribution::Exponential {
                            rate: law.exit_rate(i),
                        },
                    )
                })
                .collect()
        })
        .collect();
    SemiMarkovLaw::new(law.embedded_chain().clone(), table).unwrap()
}
