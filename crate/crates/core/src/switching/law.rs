use crate::error::{Error, Result};
use crate::mathkit::{check_irreducible, check_row_stochastic, stationary_distribution, Matrix};
use crate::tol;

use super::sojourn::SojournDistribution;

/// Embedded jump chain `lambda_ij = -gamma_ij / gamma_ii` of a generator.
pub fn embedded_chain(generator: &Matrix) -> Result<Matrix> {
    if !generator.is_square() {
        return Err(Error::NotSquare {
            rows: generator.rows(),
            cols: generator.cols(),
        });
    }
    let m = generator.rows();
    let mut l = Matrix::zeros(m, m);
    for i in 0..m {
        let gii = generator[(i, i)];
        if gii >= 0.0 {
            return Err(Error::InvalidGenerator(format!(
                "mode {} has exit rate {} (absorbing)",
                i + 1,
                -gii
            )));
        }
        for j in 0..m {
            if i != j {
                l[(i, j)] = -generator[(i, j)] / gii;
            }
        }
    }
    Ok(l)
}

/// Continuous-time Markov switching with generator `Gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovLaw {
    generator: Matrix,
    embedded: Matrix,
}

impl MarkovLaw {
    pub fn new(generator: Matrix) -> Result<Self> {
        if !generator.is_square() {
            return Err(Error::NotSquare {
                rows: generator.rows(),
                cols: generator.cols(),
            });
        }
        let m = generator.rows();
        if m < 2 {
            return Err(Error::InvalidGenerator(
                "a Markov law needs at least two modes; use a fixed-mode law instead".into(),
            ));
        }
        for i in 0..m {
            let row = generator.row(i);
            for (j, &g) in row.iter().enumerate() {
                if i != j && g < 0.0 {
                    return Err(Error::InvalidGenerator(format!(
                        "rate ({}, {}) = {g} is negative",
                        i + 1,
                        j + 1
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if sum.abs() > tol::ROW_SUM {
                return Err(Error::InvalidGenerator(format!(
                    "row {} sums to {sum:e}, not 0",
                    i + 1
                )));
            }
        }
        let embedded = embedded_chain(&generator)?;
        check_irreducible(&embedded)?;
        Ok(Self {
            generator,
            embedded,
        })
    }

    pub fn modes(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn embedded_chain(&self) -> &Matrix {
        &self.embedded
    }

    /// Exit rate `gamma_p = -gamma_pp`.
    pub fn exit_rate(&self, p: usize) -> f64 {
        -self.generator[(p, p)]
    }

    /// The equivalent semi-Markov law with exponential sojourns.
    pub fn to_semi_markov(&self) -> SemiMarkovLaw {
        let m = self.modes();
        let sojourn = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (i != j && self.embedded[(i, j)] > 0.0).then_some(
                            SojournDistribution::Exponential {
                                rate: self.exit_rate(i),
                            },
                        )
                    })
                    .collect()
            })
            .collect();
        SemiMarkovLaw::new(self.embedded.clone(), sojourn)
            .expect("a valid generator always yields a valid semi-Markov kernel")
    }
}

/// Semi-Markov switching: jump matrix plus a sojourn law for each allowed
/// transition `i -> j`. Entries with `lambda_ij = 0` carry no law.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiMarkovLaw {
    jump_matrix: Matrix,
    sojourn: Vec<Vec<Option<SojournDistribution>>>,
}

impl SemiMarkovLaw {
    pub fn new(
        jump_matrix: Matrix,
        sojourn: Vec<Vec<Option<SojournDistribution>>>,
    ) -> Result<Self> {
        check_row_stochastic(&jump_matrix)?;
        let m = jump_matrix.rows();
        if m < 2 {
            return Err(Error::InvalidLaw(
                "a semi-Markov law needs at least two modes".into(),
            ));
        }
        for i in 0..m {
            if jump_matrix[(i, i)] != 0.0 {
                return Err(Error::InvalidLaw(format!(
                    "jump matrix diagonal entry {} is nonzero",
                    i + 1
                )));
            }
        }
        check_irreducible(&jump_matrix)?;
        if sojourn.len() != m || sojourn.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("sojourn table must be {m}x{m}")));
        }
        for i in 0..m {
            for j in 0..m {
                match (&sojourn[i][j], jump_matrix[(i, j)] > 0.0) {
                    (Some(d), _) => d.validate()?,
                    (None, true) => {
                        return Err(Error::InvalidLaw(format!(
                            "transition {} -> {} has positive probability but no sojourn law",
                            i + 1,
                            j + 1
                        )))
                    }
                    (None, false) => {}
                }
            }
        }
        Ok(Self {
            jump_matrix,
            sojourn,
        })
    }

    pub fn modes(&self) -> usize {
        self.jump_matrix.rows()
    }

    pub fn jump_matrix(&self) -> &Matrix {
        &self.jump_matrix
    }

    pub fn sojourn(&self, i: usize, j: usize) -> Option<&SojournDistribution> {
        self.sojourn[i][j].as_ref()
    }

    pub fn sojourn_table(&self) -> &[Vec<Option<SojournDistribution>>] {
        &self.sojourn
    }

    /// Transitions `(j, lambda_ij, F_ij)` leaving mode `i` with positive probability.
    pub fn exits(&self, i: usize) -> impl Iterator<Item = (usize, f64, &SojournDistribution)> {
        (0..self.modes()).filter_map(move |j| {
            let w = self.jump_matrix[(i, j)];
            match (&self.sojourn[i][j], w > 0.0) {
                (Some(d), true) => Some((j, w, d)),
                _ => None,
            }
        })
    }

    /// Mean sojourn in mode `i`, `sum_j lambda_ij mean(F_ij)`.
    pub fn mean_sojourn(&self, i: usize) -> f64 {
        self.exits(i).map(|(_, w, d)| w * d.mean()).sum()
    }
}

/// The mode process driving the plant.
#[derive(Debug, Clone, PartialEq)]
pub enum SwitchingLaw {
    Markov(MarkovLaw),
    SemiMarkov(SemiMarkovLaw),
    /// A single mode that never switches.
    Fixed,
}

impl SwitchingLaw {
    pub fn modes(&self) -> usize {
        match self {
            Self::Markov(l) => l.modes(),
            Self::SemiMarkov(l) => l.modes(),
            Self::Fixed => 1,
        }
    }

    pub fn embedded_chain(&self) -> Matrix {
        match self {
            Self::Markov(l) => l.embedded_chain().clone(),
            Self::SemiMarkov(l) => l.jump_matrix().clone(),
            Self::Fixed => Matrix::identity(1),
        }
    }

    /// Stationary distribution of the embedded chain.
    pub fn stationary(&self) -> Result<Vec<f64>> {
        match self {
            Self::Fixed => Ok(vec![1.0]),
            _ => stationary_distribution(&self.embedded_chain()),
        }
    }

    /// Mean sojourn time of every mode (infinite for a fixed law).
    pub fn mean_sojourns(&self) -> Vec<f64> {
        match self {
            Self::Markov(l) => (0..l.modes()).map(|p| 1.0 / l.exit_rate(p)).collect(),
            Self::SemiMarkov(l) => (0..l.modes()).map(|p| l.mean_sojourn(p)).collect(),
            Self::Fixed => vec![f64::INFINITY],
        }
    }
}
