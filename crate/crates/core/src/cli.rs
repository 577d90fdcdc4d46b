//! The `mjls` command line: argument parsing, the four commands and the
//! exit-code contract (0 pass, 1 fail, 2 config error, 3 I/O error).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::certificate::{optimize_with, CertificateReport};
use crate::config::{load_config, three_mode_example, LoadedConfig};
use crate::error::{Error, Result};
use crate::mathkit::vec_inf_norm;
use crate::plot::{histogram_svg, LinePlot, Series};
use crate::protocol::BitLayout;
use crate::simulator::{
    intersample_bound_check, lyapunov_exponent, monte_carlo, quantizer_csv, simulate,
    trajectory_csv, Trajectory,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Name that selects the bundled example when no such file exists.
pub const BUNDLED_EXAMPLE: &str = "three_mode";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Optimize and report the stabilization certificate.
    Certificate,
    /// Run one closed-loop realization.
    Simulate,
    /// Run a seeded batch and summarize the growth rates.
    Montecarlo,
    /// Print the data rate and the bits per sample.
    Rate,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "mjls",
    version,
    about = "Quantized feedback over finite-rate links for jump linear systems"
)]
pub struct Args {
    pub command: Command,
    /// Scenario file (TOML), or `three_mode` for the bundled one.
    pub config: PathBuf,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for CSV/SVG/report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render SVG plots into `--out`.
    #[arg(long)]
    pub svg: bool,
    /// Evaluate the certificate on `steps` periods spread over `[lo, hi]`.
    #[arg(long, value_name = "lo:hi:steps", value_parser = parse_sweep)]
    pub tau_sweep: Option<TauSweep>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSweep {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl TauSweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

pub fn parse_sweep(s: &str) -> std::result::Result<TauSweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return Err("expected lo:hi:steps".into());
    };
    let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
    let steps: usize = steps.parse().map_err(|e| format!("steps: {e}"))?;
    if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() || steps == 0 {
        return Err("need 0 < lo <= hi and steps >= 1".into());
    }
    Ok(TauSweep { lo, hi, steps })
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::Config { .. } | Error::Parse(_) | Error::DataRate { .. } => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, m: &log::Metadata) -> bool {
        m.level() <= log::Level::Warn
    }

    fn log(&self, r: &log::Record) {
        if self.enabled(r.metadata()) {
            eprintln!("{}: {}", r.level().as_str().to_lowercase(), r.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

/// Parses `argv` and runs the command, returning the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    if log::set_logger(&LOGGER).is_ok() {
        log::set_max_level(log::LevelFilter::Warn);
    }
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(&args, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Loads the scenario named on the command line and applies the overrides.
pub fn load(args: &Args) -> Result<LoadedConfig> {
    let base = if !args.config.exists() && args.config == Path::new(BUNDLED_EXAMPLE) {
        three_mode_example()
    } else {
        load_config(&args.config)?
    };
    let levels = base.scenario.protocol.levels;
    if levels % 2 == 0 {
        log::warn!("N = {levels} is even: the predicted center sits on a cell face and ties are settled by rounding");
    }
    if args.horizon.is_none() && args.seed.is_none() && args.runs.is_none() {
        return Ok(base);
    }
    base.with_overrides(args.horizon, args.seed, args.runs)
}

/// Runs one command, writing the human-readable output to `out`.
pub fn run(args: &Args, out: &mut dyn std::io::Write) -> Result<i32> {
    let cfg = load(args)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    match args.command {
        Command::Certificate => match args.tau_sweep {
            Some(sweep) => cmd_tau_sweep(&cfg, sweep, args, out),
            None => cmd_certificate(&cfg, args, out),
        },
        Command::Simulate => cmd_simulate(&cfg, args, out),
        Command::Montecarlo => cmd_montecarlo(&cfg, args, out),
        Command::Rate => cmd_rate(&cfg, out),
    }
}

fn emit(out: &mut dyn std::io::Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

pub fn certificate_report(cfg: &LoadedConfig) -> Result<CertificateReport> {
    let sc = &cfg.scenario;
    optimize_with(&sc.systems, &sc.law, &sc.protocol, &cfg.certificate)
}

pub fn cmd_certificate(
    cfg: &LoadedConfig,
    args: &Args,
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let report = certificate_report(cfg)?;
    let text = report.to_text();
    emit(out, &text)?;
    if let Some(dir) = &args.out {
        write_file(dir, "certificate.txt", &text)?;
        write_file(dir, "certificate.csv", &report.to_csv())?;
    }
    Ok(if report.passes { EXIT_PASS } else { EXIT_FAIL })
}

/// One row of a sampling-period sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub tau: f64,
    /// `None` when the data-rate condition fails at this period.
    pub condition_value: Option<f64>,
    pub passes: bool,
}

pub fn tau_sweep(cfg: &LoadedConfig, sweep: TauSweep) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(sweep.steps);
    for tau in sweep.values() {
        let row = match cfg.with_tau(tau) {
            Ok(c) => {
                let r = certificate_report(&c)?;
                SweepRow {
                    tau,
                    condition_value: Some(r.condition_value),
                    passes: r.passes,
                }
            }
            Err(e) if exit_code(&e) == EXIT_CONFIG => SweepRow {
                tau,
                condition_value: None,
                passes: false,
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(rows)
}

fn cmd_tau_sweep(
    cfg: &LoadedConfig,
    sweep: TauSweep,
    args: &Args,
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let rows = tau_sweep(cfg, sweep)?;
    let mut csv = String::from("tau,condition_value,passes\n");
    for r in &rows {
        let v = r
            .condition_value
            .map_or_else(|| "nan".into(), |v| format!("{v:.16e}"));
        let _ = writeln!(csv, "{:.16e},{v},{}", r.tau, r.passes);
    }
    let passing: Vec<f64> = rows.iter().filter(|r| r.passes).map(|r| r.tau).collect();
    let mut text = csv.clone();
    match (passing.first(), passing.last()) {
        (Some(lo), Some(hi)) => {
            let _ = writeln!(
                text,
                "passing_tau = [{lo}, {hi}] ({} of {})",
                passing.len(),
                rows.len()
            );
        }
        _ => {
            let _ = writeln!(text, "passing_tau = none");
        }
    }
    emit(out, &text)?;
    if let Some(dir) = &args.out {
        write_file(dir, "tau_sweep.csv", &csv)?;
        if args.svg {
            let mut plot = LinePlot::new(
                "Condition value over the sampling period",
                "tau [s]",
                "condition value",
            );
            plot.series.push(Series::line(
                "condition",
                rows.iter()
                    .filter_map(|r| r.condition_value.map(|v| (r.tau, v)))
                    .collect(),
            ));
            let zero = vec![(sweep.lo, 0.0), (sweep.hi, 0.0)];
            plot.series.push(Series {
                dashed: true,
                ..Series::line("zero", zero)
            });
            write_file(dir, "tau_sweep.svg", &plot.to_svg())?;
        }
    }
    Ok(if passing.is_empty() {
        EXIT_FAIL
    } else {
        EXIT_PASS
    })
}

pub fn cmd_simulate(cfg: &LoadedConfig, args: &Args, out: &mut dyn std::io::Write) -> Result<i32> {
    let sc = &cfg.scenario;
    let traj = simulate(sc)?;
    let est = lyapunov_exponent(&traj)?;
    let check = intersample_bound_check(sc, &traj);
    let mut text = String::new();
    let _ = writeln!(text, "seed = {}", sc.seed);
    let _ = writeln!(text, "horizon = {}", sc.horizon);
    let _ = writeln!(text, "jumps = {}", traj.path.jump_count());
    let _ = writeln!(text, "samples = {}", traj.quantizer_log.len());
    let _ = writeln!(text, "lyapunov_exponent = {:.10}", est.exponent);
    let _ = writeln!(text, "final_norm = {:.10e}", est.final_norm);
    let _ = writeln!(text, "underflow = {}", est.underflow);
    let _ = writeln!(text, "diverged = {}", traj.diverged);
    let _ = writeln!(
        text,
        "containment_violations = {}",
        traj.containment_violations()
    );
    let _ = writeln!(text, "overflows = {}", traj.overflow_count());
    let _ = writeln!(text, "resyncs = {}", traj.resync_count());
    let _ = writeln!(text, "intersample_violations = {}", check.violations);
    let _ = writeln!(text, "intersample_max_ratio = {:.6}", check.max_ratio);
    emit(out, &text)?;
    if let Some(dir) = &args.out {
        write_file(dir, "trajectory.csv", &trajectory_csv(&traj))?;
        write_file(dir, "quantizer.csv", &quantizer_csv(&traj))?;
        write_file(dir, "simulate.txt", &text)?;
        if args.svg {
            for (name, svg) in trajectory_plots(&traj) {
                write_file(dir, &name, &svg)?;
            }
        }
    }
    Ok(if est.exponent < 0.0 {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

/// `norm.svg`, `states.svg` and `radius.svg` for one run.
pub fn trajectory_plots(traj: &Trajectory) -> Vec<(String, String)> {
    let mut norm = LinePlot::new("State norm", "t [s]", "||x(t)||");
    norm.log_y = true;
    norm.series.push(Series::line(
        "||x||",
        traj.samples
            .iter()
            .map(|s| (s.t, vec_inf_norm(&s.x)))
            .collect(),
    ));

    let mut states = LinePlot::new("States and auxiliary states", "t [s]", "value");
    let n = traj.x0.len();
    for i in 0..n {
        states.series.push(Series::line(
            format!("x_{}", i + 1),
            traj.samples.iter().map(|s| (s.t, s.x[i])).collect(),
        ));
        states.series.push(Series {
            dashed: true,
            ..Series::line(
                format!("xhat_{}", i + 1),
                traj.samples.iter().map(|s| (s.t, s.xhat[i])).collect(),
            )
        });
    }

    let mut radius = LinePlot::new("Quantizer radius", "t [s]", "E_k");
    radius.log_y = true;
    radius.series.push(Series {
        step: true,
        ..Series::line(
            "E_k",
            traj.quantizer_log.iter().map(|r| (r.t, r.e)).collect(),
        )
    });

    vec![
        ("norm.svg".into(), norm.to_svg()),
        ("states.svg".into(), states.to_svg()),
        ("radius.svg".into(), radius.to_svg()),
    ]
}

pub fn cmd_montecarlo(
    cfg: &LoadedConfig,
    args: &Args,
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let summary = monte_carlo(&cfg.scenario, cfg.runs)?;
    let mut text = summary.to_text();
    let pass = summary.fraction_negative >= cfg.threshold;
    let _ = writeln!(text, "threshold = {}", cfg.threshold);
    let _ = writeln!(text, "passes = {pass}");
    emit(out, &text)?;
    if let Some(dir) = &args.out {
        write_file(dir, "montecarlo.csv", &summary.to_csv())?;
        write_file(dir, "montecarlo.txt", &text)?;
        if args.svg {
            let exps: Vec<f64> = summary.runs.iter().map(|r| r.exponent).collect();
            let bins = (exps.len() as f64).sqrt().ceil() as usize;
            write_file(
                dir,
                "exponents.svg",
                &histogram_svg("Lyapunov exponent estimates", "exponent [1/s]", &exps, bins),
            )?;
        }
    }
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

pub fn cmd_rate(cfg: &LoadedConfig, out: &mut dyn std::io::Write) -> Result<i32> {
    let p = &cfg.scenario.protocol;
    let layout = BitLayout::new(p)?;
    let mut text = String::new();
    let _ = writeln!(text, "data_rate_bits_per_second = {:.10}", p.data_rate());
    let _ = writeln!(text, "box_bits = {}", layout.box_bits);
    let _ = writeln!(text, "mode_bits = {}", layout.mode_bits);
    let _ = writeln!(text, "bits_per_sample = {}", layout.bits_per_sample());
    emit(out, &text)?;
    Ok(EXIT_PASS)
}
