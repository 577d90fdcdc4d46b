use std::collections::HashMap;

use serde::Serialize;

use super::scenario::{Integrator, Prepared, Scenario};
use crate::error::{Error, Result};
use crate::mathkit::{mat_exp, vec_inf_norm, Matrix};
use crate::protocol::{ProtocolLink, SampleEvent, Symbol, WorstStrategy};
use crate::switching::SwitchingPath;
use crate::tol;

/// State snapshot along a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub t: f64,
    /// Index of the sampling interval the point belongs to.
    pub k: usize,
    pub x: Vec<f64>,
    pub xhat: Vec<f64>,
    /// Zero-based plant mode at `t`.
    pub mode: usize,
    pub u: Vec<f64>,
}

/// Channel activity at one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizerRecord {
    pub k: usize,
    pub t: f64,
    /// Center and radius the symbol was finally resolved against.
    pub xstar: Vec<f64>,
    pub e: f64,
    pub symbol: Symbol,
    /// A jump happened in `(t_{k-1}, t_k]`.
    pub switch_flag: bool,
    /// The radius update into this sample used the switch law.
    pub switched_update: bool,
    pub event: SampleEvent,
    /// `||x(t_k) - x*_k|| <= E_k` for the final `(x*_k, E_k)`.
    pub contained: bool,
    pub x: Vec<f64>,
    pub center: Vec<f64>,
}

/// Everything recorded over one closed-loop run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<SampleRecord>,
    pub quantizer_log: Vec<QuantizerRecord>,
    pub path: SwitchingPath,
    pub x0: Vec<f64>,
    /// Time and state at the end of the run (the freeze point if diverged).
    pub final_time: f64,
    pub final_state: Vec<f64>,
    pub diverged: bool,
}

impl Trajectory {
    pub fn containment_violations(&self) -> usize {
        self.quantizer_log
            .iter()
            .filter(|r| !r.contained || r.event == SampleEvent::Overflow)
            .count()
    }

    pub fn overflow_count(&self) -> usize {
        self.quantizer_log
            .iter()
            .filter(|r| r.event == SampleEvent::Overflow)
            .count()
    }

    pub fn resync_count(&self) -> usize {
        self.quantizer_log
            .iter()
            .filter(|r| r.event == SampleEvent::Resync)
            .count()
    }
}

struct Stepper<'a> {
    sc: &'a Scenario,
    n: usize,
    sub: f64,
    cache: HashMap<(usize, usize), Matrix>,
    blocks: HashMap<(usize, usize), Matrix>,
}

impl<'a> Stepper<'a> {
    fn new(sc: &'a Scenario) -> Self {
        Self {
            sc,
            n: sc.systems.state_dim(),
            sub: sc.protocol.tau / sc.record_per_interval as f64,
            cache: HashMap::new(),
            blocks: HashMap::new(),
        }
    }

    fn block(&mut self, p: usize, q: usize) -> &Matrix {
        let systems = &self.sc.systems;
        self.blocks
            .entry((p, q))
            .or_insert_with(|| systems.block(p, q))
    }

    /// Advances `z = [x; xhat]` by `h` with controller mode `p`, plant mode `q`.
    fn advance(&mut self, z: &[f64], p: usize, q: usize, h: f64) -> Result<Vec<f64>> {
        if h <= 0.0 {
            return Ok(z.to_vec());
        }
        match self.sc.integrator {
            Integrator::EventExact => {
                if (h - self.sub).abs() <= 1e-12 * self.sub {
                    if !self.cache.contains_key(&(p, q)) {
                        let sub = self.sub;
                        let e = mat_exp(self.block(p, q), sub)?;
                        self.cache.insert((p, q), e);
                    }
                    Ok(self.cache[&(p, q)].mul_vec(z))
                } else {
                    let b = self.block(p, q).clone();
                    Ok(mat_exp(&b, h)?.mul_vec(z))
                }
            }
            Integrator::FixedStep { dt } => {
                let steps = (h / dt).round().max(1.0) as usize;
                let step = h / steps as f64;
                let a = self.block(p, q).clone();
                let mut z = z.to_vec();
                for _ in 0..steps {
                    let dz = a.mul_vec(&z);
                    for (zi, di) in z.iter_mut().zip(dz) {
                        *zi += step * di;
                    }
                }
                Ok(z)
            }
        }
    }

    fn split<'z>(&self, z: &'z [f64]) -> (&'z [f64], &'z [f64]) {
        z.split_at(self.n)
    }
}

fn blown_up(x: &[f64]) -> bool {
    x.iter().any(|v| !v.is_finite()) || vec_inf_norm(x) > tol::BLOWUP_NORM
}

/// Samples a switching path from the scenario seed and runs the loop on it.
pub fn simulate(sc: &Scenario) -> Result<Trajectory> {
    let prepared = sc.prepare()?;
    simulate_prepared(&prepared, sc.seed)
}

/// Runs a prepared scenario with the given seed.
pub fn simulate_prepared(prepared: &Prepared<'_>, seed: u64) -> Result<Trajectory> {
    let sc = prepared.scenario;
    let path = sc.law.sample_path(sc.horizon, seed, sc.initial_mode)?;
    simulate_on_path(prepared, path)
}

/// Runs the closed loop along a given switching path.
///
/// Under [`WorstStrategy::Bound`] an overflow symbol means the radius
/// update failed to dominate the state and is reported as
/// [`Error::SoundnessBreach`]; under the grid strategy it is counted.
///
/// At every sample `t_k = k tau` the plant state is quantized against the
/// shared `(x*_k, E_k)`, the auxiliary state is reset to the decoded
/// center, and `[x; xhat]` is propagated to the next sample with the
/// controller held in `sigma(t_k)` while the plant follows the path.
pub fn simulate_on_path(prepared: &Prepared<'_>, path: SwitchingPath) -> Result<Trajectory> {
    let sc = prepared.scenario;
    let tau = sc.protocol.tau;
    let n = sc.systems.state_dim();
    if path.horizon() < sc.horizon {
        return Err(Error::InvalidParameter(format!(
            "path horizon {} shorter than the scenario horizon {}",
            path.horizon(),
            sc.horizon
        )));
    }
    let mut link = ProtocolLink::new(
        &sc.systems,
        &sc.protocol,
        &prepared.estimates,
        sc.initial_mode,
    );
    let mut stepper = Stepper::new(sc);
    let samples_total = sc.sample_count();
    let mut samples = Vec::with_capacity(samples_total * sc.record_per_interval);
    let mut log = Vec::with_capacity(samples_total);
    let mut x = sc.x0.clone();
    let mut diverged = false;
    let mut final_time = 0.0;

    let controller_output = |p: usize, xhat: &[f64]| sc.systems.mode(p).k.mul_vec(xhat);

    'outer: for k in 0..samples_total {
        let tk = k as f64 * tau;
        let mode = path.mode_at(tk)?;
        let switch_flag = k > 0 && path.jumps_in((k - 1) as f64 * tau, tk) > 0;
        link.begin_sample(mode);
        let sym = link.encode(&x);
        let (center, event) = link.absorb(&sym)?;
        if event == SampleEvent::Overflow && sc.protocol.worst_strategy == WorstStrategy::Bound {
            return Err(Error::SoundnessBreach { sample: k });
        }
        let st = link.state();
        log.push(QuantizerRecord {
            k,
            t: tk,
            xstar: st.xstar.clone(),
            e: st.e,
            symbol: sym,
            switch_flag,
            switched_update: link.switched(),
            event,
            contained: st.contains(&x),
            x: x.clone(),
            center: center.clone(),
        });
        let mut z: Vec<f64> = x.iter().chain(&center).copied().collect();
        samples.push(SampleRecord {
            t: tk,
            k,
            x: x.clone(),
            xhat: center.clone(),
            mode,
            u: controller_output(mode, &center),
        });
        final_time = tk;

        let t_end = if k + 1 < samples_total {
            (k + 1) as f64 * tau
        } else {
            sc.horizon
        };
        if t_end - tk <= 1e-12 * tau {
            break;
        }
        let marks: Vec<f64> = (1..sc.record_per_interval)
            .map(|j| tk + j as f64 * stepper.sub)
            .filter(|t| *t < t_end - 1e-12 * tau)
            .collect();
        let mut mark = marks.iter().peekable();
        for (a, b, q) in path.segments(tk, t_end) {
            let mut cur = a;
            while let Some(&&tm) = mark.peek() {
                if tm > b || (tm == b && b < t_end) {
                    break;
                }
                z = stepper.advance(&z, mode, q, tm - cur)?;
                cur = tm;
                mark.next();
                let (xs, xh) = stepper.split(&z);
                if blown_up(xs) {
                    diverged = true;
                    x = xs.to_vec();
                    final_time = tm;
                    break 'outer;
                }
                let plant_mode = path.mode_at(tm)?;
                samples.push(SampleRecord {
                    t: tm,
                    k,
                    x: xs.to_vec(),
                    xhat: xh.to_vec(),
                    mode: plant_mode,
                    u: controller_output(mode, xh),
                });
            }
            z = stepper.advance(&z, mode, q, b - cur)?;
        }
        x = z[..n].to_vec();
        final_time = t_end;
        if blown_up(&x) {
            diverged = true;
            break;
        }
    }

    Ok(Trajectory {
        samples,
        quantizer_log: log,
        path,
        x0: sc.x0.clone(),
        final_time,
        final_state: x,
        diverged,
    })
}
