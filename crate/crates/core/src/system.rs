//! Per-mode plant and controller matrices and their sampled-time forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mathkit::{is_schur, mat_exp, Matrix};

/// One mode's plant `(A, B)` and feedback gain `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeLinearSystem {
    pub a: Matrix,
    pub b: Matrix,
    pub k: Matrix,
}

impl ModeLinearSystem {
    pub fn new(a: Matrix, b: Matrix, k: Matrix) -> Result<Self> {
        let sys = Self { a, b, k };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.a.rows();
        if !self.a.is_square() {
            return Err(Error::NotSquare {
                rows: n,
                cols: self.a.cols(),
            });
        }
        if self.b.rows() != n {
            return Err(Error::Dimension(format!(
                "B has {} rows, A is {n}x{n}",
                self.b.rows()
            )));
        }
        if self.k.rows() != self.b.cols() || self.k.cols() != n {
            return Err(Error::Dimension(format!(
                "K is {}x{}, expected {}x{n}",
                self.k.rows(),
                self.k.cols(),
                self.b.cols()
            )));
        }
        Ok(())
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.cols()
    }

    /// `A + B K`.
    pub fn closed_loop(&self) -> Matrix {
        &self.a + &self.b.matmul(&self.k)
    }
}

/// Sampled-time quantities of one mode at a fixed period.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMode {
    /// `exp(A tau)`.
    pub open: Matrix,
    /// `exp((A + B K) tau)`.
    pub closed: Matrix,
    /// `||exp(A tau)||_inf`.
    pub lambda: f64,
    pub stabilizable: bool,
}

/// The full mode family at a sampling period, with unstabilizable gains
/// forced to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    modes: Vec<ModeLinearSystem>,
    sampled: Vec<SampledMode>,
    tau: f64,
}

impl ModeSet {
    pub fn new(modes: Vec<ModeLinearSystem>, tau: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one mode is required".into(),
            ));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!("sampling period {tau}")));
        }
        let n = modes[0].state_dim();
        let m = modes[0].input_dim();
        let mut modes = modes;
        let mut sampled = Vec::with_capacity(modes.len());
        for (p, sys) in modes.iter_mut().enumerate() {
            sys.validate()?;
            if sys.state_dim() != n || sys.input_dim() != m {
                return Err(Error::Dimension(format!(
                    "mode {} has state/input dims ({}, {}), mode 1 has ({n}, {m})",
                    p + 1,
                    sys.state_dim(),
                    sys.input_dim()
                )));
            }
            let open = mat_exp(&sys.a, tau)?;
            let mut closed = mat_exp(&sys.closed_loop(), tau)?;
            let stabilizable = is_schur(&closed);
            if !stabilizable {
                if sys.k.max_abs() > 0.0 {
                    log::warn!(
                        "mode {} is not stabilized by its gain; using K = 0 for it",
                        p + 1
                    );
                }
                sys.k = Matrix::zeros(m, n);
                closed = open.clone();
            }
            let lambda = open.inf_norm();
            sampled.push(SampledMode {
                open,
                closed,
                lambda,
                stabilizable,
            });
        }
        Ok(Self {
            modes,
            sampled,
            tau,
        })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn state_dim(&self) -> usize {
        self.modes[0].state_dim()
    }

    pub fn input_dim(&self) -> usize {
        self.modes[0].input_dim()
    }

    pub fn mode(&self, p: usize) -> &ModeLinearSystem {
        &self.modes[p]
    }

    pub fn modes(&self) -> &[ModeLinearSystem] {
        &self.modes
    }

    pub fn sampled(&self, p: usize) -> &SampledMode {
        &self.sampled[p]
    }

    pub fn stabilizable(&self) -> Vec<bool> {
        self.sampled.iter().map(|s| s.stabilizable).collect()
    }

    /// Coupled plant/auxiliary generator with the controller held in mode
    /// `p` while the plant runs in mode `q`:
    /// `[[A_q, B_q K_p], [0, A_p + B_p K_p]]`.
    pub fn block(&self, p: usize, q: usize) -> Matrix {
        let (sp, sq) = (&self.modes[p], &self.modes[q]);
        let n = self.state_dim();
        Matrix::from_blocks(
            &sq.a,
            &sq.b.matmul(&sp.k),
            &Matrix::zeros(n, n),
            &sp.closed_loop(),
        )
    }

    /// Checks `||exp(A_p tau)||_inf < N` for every mode.
    pub fn check_data_rate(&self, levels: u64) -> Result<()> {
        for (p, s) in self.sampled.iter().enumerate() {
            if !(s.lambda < levels as f64) {
                return Err(Error::DataRate {
                    mode: p + 1,
                    lambda: s.lambda,
                    levels,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_modes() -> Vec<ModeLinearSystem> {
        let m = |r: &[[f64; 2]]| Matrix::from_rows(r).unwrap();
        vec![
            ModeLinearSystem::new(
                m(&[[1.0, 0.0], [0.0, -1.0]]),
                Matrix::column(&[1.0, 0.0]),
                Matrix::from_rows(&[[-2.0, 0.0]]).unwrap(),
            )
            .unwrap(),
            ModeLinearSystem::new(
                m(&[[1.0, 0.0], [0.0, -1.0]]),
                Matrix::column(&[0.0, 1.0]),
                Matrix::from_rows(&[[0.0, 0.0]]).unwrap(),
            )
            .unwrap(),
            ModeLinearSystem::new(
                m(&[[0.0, 1.0], [-1.0, 0.0]]),
                Matrix::column(&[0.0, 1.0]),
                Matrix::from_rows(&[[0.0, -4.0]]).unwrap(),
            )
            .unwrap(),
        ]
    }

    #[test]
    fn classification_of_example() {
        let set = ModeSet::new(example_modes(), 0.1).unwrap();
        assert_eq!(set.stabilizable(), vec![true, false, true]);
        assert!((set.sampled(0).lambda - 0.1f64.exp()).abs() < 1e-14);
        set.check_data_rate(10).unwrap();
        assert!(set.check_data_rate(1).is_err());
    }

    #[test]
    fn block_structure() {
        let set = ModeSet::new(example_modes(), 0.1).unwrap();
        let b = set.block(0, 2);
        assert_eq!(b.block(0, 0, 2, 2), set.mode(2).a);
        assert_eq!(b.block(2, 0, 2, 2), Matrix::zeros(2, 2));
        assert_eq!(b.block(2, 2, 2, 2), Matrix::diag(&[-1.0, -1.0]));
    }

    #[test]
    fn frozen_mode_is_unstabilizable() {
        let sys = ModeLinearSystem::new(
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
        )
        .unwrap();
        let set = ModeSet::new(vec![sys], 0.1).unwrap();
        assert_eq!(set.stabilizable(), vec![false]);
    }

    #[test]
    fn unstabilizable_gain_is_zeroed() {
        let sys = ModeLinearSystem::new(
            Matrix::from_rows(&[[1.0]]).unwrap(),
            Matrix::from_rows(&[[1.0]]).unwrap(),
            Matrix::from_rows(&[[0.5]]).unwrap(),
        )
        .unwrap();
        let set = ModeSet::new(vec![sys], 0.1).unwrap();
        assert_eq!(set.mode(0).k, Matrix::zeros(1, 1));
        assert_eq!(set.sampled(0).closed, set.sampled(0).open);
    }
}
