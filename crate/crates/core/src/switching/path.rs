use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::law::{MarkovLaw, SemiMarkovLaw, SwitchingLaw};

/// Generator used for every random draw in the crate. ChaCha with 8 rounds
/// is a counter-based stream cipher, so a seed fixes the stream on every
/// platform.
pub type SwitchRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SwitchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A realized mode signal on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingPath {
    jump_times: Vec<f64>,
    modes: Vec<usize>,
    horizon: f64,
}

impl SwitchingPath {
    /// Builds a path from explicit jumps. `jump_times[0]` must be 0.
    pub fn new(jump_times: Vec<f64>, modes: Vec<usize>, horizon: f64) -> Result<Self> {
        if jump_times.is_empty() || jump_times.len() != modes.len() {
            return Err(Error::InvalidLaw(
                "path needs one mode per jump time and at least one jump".into(),
            ));
        }
        if jump_times[0] != 0.0 {
            return Err(Error::InvalidLaw("first jump time must be 0".into()));
        }
        if !(horizon >= 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!("horizon {horizon}")));
        }
        for w in jump_times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidLaw(
                    "jump times must increase strictly".into(),
                ));
            }
        }
        if modes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLaw("consecutive modes must differ".into()));
        }
        if *jump_times.last().unwrap() > horizon {
            return Err(Error::InvalidLaw(
                "last jump lies beyond the horizon".into(),
            ));
        }
        Ok(Self {
            jump_times,
            modes,
            horizon,
        })
    }

    pub fn constant(mode: usize, horizon: f64) -> Self {
        Self {
            jump_times: vec![0.0],
            modes: vec![mode],
            horizon,
        }
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn jump_count(&self) -> usize {
        self.jump_times.len() - 1
    }

    fn index_at(&self, t: f64) -> usize {
        self.jump_times.partition_point(|&s| s <= t) - 1
    }

    /// Mode of the last jump at or before `t` (right-continuous).
    pub fn mode_at(&self, t: f64) -> Result<usize> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                horizon: self.horizon,
            });
        }
        Ok(self.modes[self.index_at(t)])
    }

    /// Constant-mode pieces `(start, end, mode)` covering `[t0, t1)`.
    pub fn segments(&self, t0: f64, t1: f64) -> Vec<(f64, f64, usize)> {
        let mut out = Vec::new();
        if t1 <= t0 {
            return out;
        }
        let mut i = self.index_at(t0.max(0.0));
        let mut start = t0;
        loop {
            let next = self.jump_times.get(i + 1).copied().unwrap_or(f64::INFINITY);
            let end = next.min(t1);
            out.push((start, end, self.modes[i]));
            if next >= t1 {
                break;
            }
            start = next;
            i += 1;
        }
        out
    }

    /// Number of jumps in the half-open window `(t0, t1]`.
    pub fn jumps_in(&self, t0: f64, t1: f64) -> usize {
        let lo = self.jump_times.partition_point(|&s| s <= t0);
        let hi = self.jump_times.partition_point(|&s| s <= t1);
        hi - lo
    }

    /// Sojourn durations ending in a jump, grouped by the mode being left.
    pub fn sojourns_by_mode(&self, modes: usize) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); modes];
        for (w, m) in self.jump_times.windows(2).zip(&self.modes) {
            out[*m].push(w[1] - w[0]);
        }
        out
    }
}

fn draw_index<R: Rng + ?Sized>(rng: &mut R, weights: impl Iterator<Item = (usize, f64)>) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (j, w) in weights {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = j;
        if u < acc {
            return j;
        }
    }
    // Rounding left the cumulative sum a hair below one.
    last
}

fn check_start(horizon: f64, initial: usize, modes: usize) -> Result<()> {
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidParameter(format!("horizon {horizon}")));
    }
    if initial >= modes {
        return Err(Error::InvalidParameter(format!(
            "initial mode {} outside 1..={modes}",
            initial + 1
        )));
    }
    Ok(())
}

/// Markov path: exponential holding time, then a draw from the embedded row.
pub fn sample_path_markov(
    law: &MarkovLaw,
    horizon: f64,
    seed: u64,
    initial: usize,
) -> Result<SwitchingPath> {
    check_start(horizon, initial, law.modes())?;
    let mut rng = rng_from_seed(seed);
    let chain = law.embedded_chain();
    let (mut times, mut modes) = (vec![0.0], vec![initial]);
    let (mut t, mut p) = (0.0, initial);
    loop {
        let u: f64 = rng.random();
        t += -(-u).ln_1p() / law.exit_rate(p);
        if t > horizon {
            break;
        }
        p = draw_index(&mut rng, chain.row(p).iter().copied().enumerate());
        times.push(t);
        modes.push(p);
    }
    Ok(SwitchingPath {
        jump_times: times,
        modes,
        horizon,
    })
}

/// Semi-Markov path: the next mode is drawn first, then the sojourn from
/// the law attached to the (current, next) pair.
pub fn sample_path_semimarkov(
    law: &SemiMarkovLaw,
    horizon: f64,
    seed: u64,
    initial: usize,
) -> Result<SwitchingPath> {
    check_start(horizon, initial, law.modes())?;
    let mut rng = rng_from_seed(seed);
    let (mut times, mut modes) = (vec![0.0], vec![initial]);
    let (mut t, mut p) = (0.0, initial);
    loop {
        let q = draw_index(
            &mut rng,
            law.jump_matrix().row(p).iter().copied().enumerate(),
        );
        let dist = law.sojourn(p, q).expect("validated support");
        let h = dist.sample(&mut rng);
        t += h;
        if t > horizon {
            break;
        }
        // A zero-length sojourn would break strict monotonicity; it has
        // probability zero for every supported family except Uniform(0, _).
        if h <= 0.0 {
            continue;
        }
        times.push(t);
        modes.push(q);
        p = q;
    }
    Ok(SwitchingPath {
        jump_times: times,
        modes,
        horizon,
    })
}

impl SwitchingLaw {
    pub fn sample_path(&self, horizon: f64, seed: u64, initial: usize) -> Result<SwitchingPath> {
        match self {
            Self::Markov(l) => sample_path_markov(l, horizon, seed, initial),
            Self::SemiMarkov(l) => sample_path_semimarkov(l, horizon, seed, initial),
            Self::Fixed => {
                check_start(horizon, initial, 1)?;
                Ok(SwitchingPath::constant(initial, horizon))
            }
        }
    }
}
