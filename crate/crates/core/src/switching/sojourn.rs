use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law of the time spent in a mode before a given jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum SojournDistribution {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl SojournDistribution {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Exponential { rate } => rate.is_finite() && rate > 0.0,
            Self::Weibull { shape, scale } => {
                shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0
            }
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDistribution(format!("{self:?}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Weibull { shape, scale } => scale * libm::tgamma(1.0 + 1.0 / shape),
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }

    /// Survival function `P{h > t}`.
    pub fn survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        if t == f64::INFINITY {
            return 0.0;
        }
        match *self {
            Self::Exponential { rate } => (-rate * t).exp(),
            Self::Weibull { shape, scale } => (-(t / scale).powf(shape)).exp(),
            Self::Uniform { lo, hi } => ((hi - t) / (hi - lo)).clamp(0.0, 1.0),
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        1.0 - self.survival(t)
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match *self {
            // -ln(1 - u) is finite because u < 1.
            Self::Exponential { rate } => -(-u).ln_1p() / rate,
            Self::Weibull { shape, scale } => scale * (-(-u).ln_1p()).powf(1.0 / shape),
            Self::Uniform { lo, hi } => lo + (hi - lo) * u,
        }
    }
}

/// Probability mass `int_a^b f(w) dw` of a sojourn law; `b` may be infinite.
pub fn sojourn_cdf_mass(dist: &SojournDistribution, a: f64, b: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() || a < 0.0 || b < a || a == f64::INFINITY {
        return Err(Error::InvalidInterval { lo: a, hi: b });
    }
    dist.validate()?;
    let mass = match *dist {
        SojournDistribution::Exponential { rate } => {
            // e^{-ra} (1 - e^{-r(b-a)}) keeps relative accuracy for short intervals.
            let width = b - a;
            (-rate * a).exp() * -(-rate * width).exp_m1()
        }
        SojournDistribution::Uniform { lo, hi } => {
            let overlap = (b.min(hi) - a.max(lo)).max(0.0);
            overlap / (hi - lo)
        }
        SojournDistribution::Weibull { .. } => dist.survival(a) - dist.survival(b),
    };
    Ok(mass.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_examples() {
        let e = SojournDistribution::Exponential { rate: 0.3 };
        assert_eq!(sojourn_cdf_mass(&e, 0.0, f64::INFINITY).unwrap(), 1.0);
        let e = SojournDistribution::Exponential { rate: 0.05 };
        let m = sojourn_cdf_mass(&e, 0.2, f64::INFINITY).unwrap();
        assert!((m - (-0.01f64).exp()).abs() < 1e-15);
        assert!((m - 0.990050).abs() < 1e-6);
        let u = SojournDistribution::Uniform { lo: 0.0, hi: 1.0 };
        assert!((sojourn_cdf_mass(&u, 0.25, 0.75).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_interval() {
        let u = SojournDistribution::Uniform { lo: 0.0, hi: 1.0 };
        assert!(sojourn_cdf_mass(&u, 0.5, 0.25).is_err());
        assert!(sojourn_cdf_mass(&u, -1.0, 0.25).is_err());
    }

    #[test]
    fn weibull_mean_closed_form() {
        let w = SojournDistribution::Weibull {
            shape: 2.0,
            scale: 1.0,
        };
        assert!((w.mean() - 0.886_226_925_452_758).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(SojournDistribution::Exponential { rate: 0.0 }
            .validate()
            .is_err());
        assert!(SojournDistribution::Uniform { lo: 1.0, hi: 1.0 }
            .validate()
            .is_err());
        assert!(SojournDistribution::Weibull {
            shape: 1.0,
            scale: -1.0
        }
        .validate()
        .is_err());
    }
}
