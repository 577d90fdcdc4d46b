use rayon::prelude::*;
use serde::Serialize;

use super::analysis::lyapunov_exponent;
use super::run::simulate_prepared;
use super::scenario::Scenario;
use crate::error::Result;

/// Outcome of one Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub exponent: f64,
    pub diverged: bool,
    pub underflow: bool,
    pub jumps: usize,
    pub violations: usize,
    pub overflows: usize,
    pub resyncs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub runs: Vec<RunSummary>,
    pub fraction_negative: f64,
    pub min_exponent: f64,
    pub median_exponent: f64,
    pub max_exponent: f64,
    pub violations: usize,
    pub overflows: usize,
    pub resyncs: usize,
    pub diverged: usize,
}

/// Runs seeds `seed, seed + 1, ..., seed + runs - 1` in parallel.
///
/// Results are collected in seed order, so the summary does not depend on
/// the thread count.
pub fn monte_carlo(sc: &Scenario, runs: usize) -> Result<MonteCarloSummary> {
    let prepared = sc.prepare()?;
    let results: Vec<Result<RunSummary>> = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = sc.seed.wrapping_add(i);
            let traj = simulate_prepared(&prepared, seed)?;
            let est = lyapunov_exponent(&traj)?;
            Ok(RunSummary {
                seed,
                exponent: est.exponent,
                diverged: traj.diverged,
                underflow: est.underflow,
                jumps: traj.path.jumps_in(0.0, traj.final_time),
                violations: traj.containment_violations(),
                overflows: traj.overflow_count(),
                resyncs: traj.resync_count(),
            })
        })
        .collect();
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(summarize(runs))
}

pub fn summarize(runs: Vec<RunSummary>) -> MonteCarloSummary {
    let mut sorted: Vec<f64> = runs.iter().map(|r| r.exponent).collect();
    sorted.sort_by(f64::total_cmp);
    let count = sorted.len();
    let median = match count {
        0 => f64::NAN,
        c if c % 2 == 1 => sorted[c / 2],
        c => 0.5 * (sorted[c / 2 - 1] + sorted[c / 2]),
    };
    let negative = runs.iter().filter(|r| r.exponent < 0.0).count();
    MonteCarloSummary {
        fraction_negative: if count == 0 {
            0.0
        } else {
            negative as f64 / count as f64
        },
        min_exponent: sorted.first().copied().unwrap_or(f64::NAN),
        median_exponent: median,
        max_exponent: sorted.last().copied().unwrap_or(f64::NAN),
        violations: runs.iter().map(|r| r.violations).sum(),
        overflows: runs.iter().map(|r| r.overflows).sum(),
        resyncs: runs.iter().map(|r| r.resyncs).sum(),
        diverged: runs.iter().filter(|r| r.diverged).count(),
        runs,
    }
}

impl MonteCarloSummary {
    pub fn to_text(&self) -> String {
        format!(
            "runs = {}\nfraction_negative = {}\nmin_exponent = {:.6}\nmedian_exponent = {:.6}\nmax_exponent = {:.6}\ncontainment_violations = {}\noverflows = {}\nresyncs = {}\ndiverged = {}\n",
            self.runs.len(),
            self.fraction_negative,
            self.min_exponent,
            self.median_exponent,
            self.max_exponent,
            self.violations,
            self.overflows,
            self.resyncs,
            self.diverged
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("seed,exponent,diverged,underflow,jumps,violations,overflows,resyncs\n");
        for r in &self.runs {
            out.push_str(&format!(
                "{},{:.16e},{},{},{},{},{},{}\n",
                r.seed,
                r.exponent,
                r.diverged,
                r.underflow,
                r.jumps,
                r.violations,
                r.overflows,
                r.resyncs
            ));
        }
        out
    }
}
