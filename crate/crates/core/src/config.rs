//! TOML scenario files.
//!
//! ```toml
//! [[modes]]
//! a = [[1.0, 0.0], [0.0, -1.0]]
//! b = [[1.0], [0.0]]
//! k = [[-2.0, 0.0]]
//!
//! [law]
//! kind = "markov"            # or "semimarkov", "fixed"
//! generator = [[-1.0, 1.0], [1.0, -1.0]]
//!
//! [protocol]
//! tau = 0.1
//! N = 10
//! E0 = 10.0
//!
//! [experiment]
//! x0 = [-5.0, 8.9]
//! ```
//!
//! Unknown keys are rejected. Mode indices in the file are 1-based.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certificate::{CertificateSettings, WeightThresholds};
use crate::error::{Error, Result};
use crate::mathkit::Matrix;
use crate::protocol::{
    ProtocolConfig, WorstStrategy, DEFAULT_GRID_POINTS, DEFAULT_MAX_SWITCHES,
    DEFAULT_ROUNDING_MARGIN,
};
use crate::simulator::{Integrator, Scenario, DEFAULT_RECORD_PER_INTERVAL};
use crate::switching::{MarkovLaw, SemiMarkovLaw, SojournDistribution, SwitchingLaw};
use crate::system::{ModeLinearSystem, ModeSet};
use crate::tol;

/// Explicit-Euler step used when `integrator = "fixed_step"` omits `dt`.
pub const DEFAULT_FIXED_DT: f64 = 1e-4;
pub const DEFAULT_HORIZON: f64 = 10.0;
pub const DEFAULT_RUNS: usize = 20;
/// Monte Carlo passes when at least this fraction of exponents is negative.
pub const DEFAULT_THRESHOLD: f64 = 1.0;

/// The three-mode example shipped with the crate.
pub const THREE_MODE_EXAMPLE: &str = include_str!("../configs/three_mode.toml");

type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeDoc {
    pub a: Rows,
    pub b: Rows,
    pub k: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SojournDoc {
    pub from: usize,
    pub to: usize,
    pub distribution: SojournDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LawDoc {
    Markov {
        generator: Rows,
    },
    Semimarkov {
        jump_matrix: Rows,
        sojourn: Vec<SojournDoc>,
    },
    /// A single mode that never switches.
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolDoc {
    pub tau: f64,
    #[serde(rename = "N")]
    pub levels: u64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xstar0: Option<Vec<f64>>,
    #[serde(default)]
    pub worst_strategy: WorstStrategy,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_max_switches")]
    pub max_switches: usize,
    #[serde(default = "default_rounding_margin")]
    pub rounding_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorKind {
    #[default]
    EventExact,
    FixedStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDoc {
    pub x0: Vec<f64>,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub integrator: IntegratorKind,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// 1-based.
    #[serde(default = "default_initial_mode")]
    pub initial_mode: usize,
    #[serde(default = "default_record")]
    pub record_per_interval: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

/// A parsed scenario file before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub modes: Vec<ModeDoc>,
    pub law: LawDoc,
    pub protocol: ProtocolDoc,
    pub experiment: ExperimentDoc,
    #[serde(default)]
    pub certificate: CertificateSettings,
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}
fn default_max_switches() -> usize {
    DEFAULT_MAX_SWITCHES
}
fn default_rounding_margin() -> f64 {
    DEFAULT_ROUNDING_MARGIN
}
fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}
fn default_dt() -> f64 {
    DEFAULT_FIXED_DT
}
fn default_runs() -> usize {
    DEFAULT_RUNS
}
fn default_initial_mode() -> usize {
    1
}
fn default_record() -> usize {
    DEFAULT_RECORD_PER_INTERVAL
}
fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

/// A validated scenario plus the settings of the batch commands.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub scenario: Scenario,
    pub certificate: CertificateSettings,
    pub runs: usize,
    pub threshold: f64,
    /// The document with every default written out.
    pub document: ConfigDocument,
}

fn matrix(rows: &Rows, path: &str) -> Result<Matrix> {
    Matrix::from_rows(rows).map_err(|e| Error::config(path, e.to_string()))
}

fn at(path: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let path = path.into();
    move |e| match e {
        Error::Config { .. } => e,
        other => Error::config(path, other.to_string()),
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical TOML text; parsing it back gives the same document.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Copy with every optional field made explicit.
    pub fn normalized(&self) -> Self {
        let mut doc = self.clone();
        if doc.protocol.xstar0.is_none() {
            let n = doc.modes.first().map_or(0, |m| m.a.len());
            doc.protocol.xstar0 = Some(vec![0.0; n]);
        }
        doc
    }

    fn build_modes(&self) -> Result<ModeSet> {
        let tau = self.protocol.tau;
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::config(
                "protocol.tau",
                format!("{tau} is not a positive period"),
            ));
        }
        if self.modes.is_empty() {
            return Err(Error::config("modes", "at least one mode is required"));
        }
        let mut modes: Vec<ModeLinearSystem> = Vec::with_capacity(self.modes.len());
        for (i, m) in self.modes.iter().enumerate() {
            let path = format!("modes[{}]", i + 1);
            let sys = ModeLinearSystem::new(
                matrix(&m.a, &format!("{path}.a"))?,
                matrix(&m.b, &format!("{path}.b"))?,
                matrix(&m.k, &format!("{path}.k"))?,
            )
            .map_err(at(path.clone()))?;
            if let Some(first) = modes.first() {
                let want = (first.state_dim(), first.input_dim());
                let got = (sys.state_dim(), sys.input_dim());
                if got != want {
                    return Err(Error::config(
                        path,
                        format!("(n, m) = {got:?} differs from modes[1] {want:?}"),
                    ));
                }
            }
            modes.push(sys);
        }
        ModeSet::new(modes, self.protocol.tau).map_err(at("modes"))
    }

    fn build_law(&self, m: usize) -> Result<SwitchingLaw> {
        let law = match &self.law {
            LawDoc::Fixed => {
                if m != 1 {
                    return Err(Error::config(
                        "law.kind",
                        format!("a fixed law needs exactly one mode, found {m}"),
                    ));
                }
                SwitchingLaw::Fixed
            }
            LawDoc::Markov { generator } => {
                let g = matrix(generator, "law.generator")?;
                for (r, row) in generator.iter().enumerate() {
                    let sum: f64 = row.iter().sum();
                    let scale = row.iter().fold(1.0f64, |s, v| s.max(v.abs()));
                    if sum.abs() > tol::ROW_SUM * scale {
                        return Err(Error::config(
                            format!("law.generator[{}]", r + 1),
                            format!("row sums to {sum}, expected 0"),
                        ));
                    }
                }
                SwitchingLaw::Markov(MarkovLaw::new(g).map_err(at("law.generator"))?)
            }
            LawDoc::Semimarkov {
                jump_matrix,
                sojourn,
            } => {
                let l = matrix(jump_matrix, "law.jump_matrix")?;
                let size = l.rows();
                let mut table = vec![vec![None; size]; size];
                for (s, entry) in sojourn.iter().enumerate() {
                    let path = format!("law.sojourn[{}]", s + 1);
                    if !(1..=size).contains(&entry.from) || !(1..=size).contains(&entry.to) {
                        return Err(Error::config(
                            path,
                            format!(
                                "mode pair ({}, {}) outside 1..={size}",
                                entry.from, entry.to
                            ),
                        ));
                    }
                    entry
                        .distribution
                        .validate()
                        .map_err(at(format!("{path}.distribution")))?;
                    let cell = &mut table[entry.from - 1][entry.to - 1];
                    if cell.is_some() {
                        return Err(Error::config(path, "duplicate mode pair"));
                    }
                    *cell = Some(entry.distribution);
                }
                SwitchingLaw::SemiMarkov(SemiMarkovLaw::new(l, table).map_err(at("law"))?)
            }
        };
        if law.modes() != m {
            return Err(Error::config(
                "law",
                format!("law has {} modes, [[modes]] lists {m}", law.modes()),
            ));
        }
        Ok(law)
    }

    fn build_protocol(&self, systems: &ModeSet) -> Result<ProtocolConfig> {
        let p = &self.protocol;
        let mut cfg =
            ProtocolConfig::new(p.tau, p.levels, systems.state_dim(), systems.len(), p.e0);
        if let Some(x) = &p.xstar0 {
            cfg.xstar0 = x.clone();
        }
        cfg.worst_strategy = p.worst_strategy;
        cfg.grid_points = p.grid_points;
        cfg.max_switches = p.max_switches;
        cfg.rounding_margin = p.rounding_margin;
        cfg.validate(systems).map_err(|e| match e {
            Error::DataRate { .. } => Error::config("protocol.N", e.to_string()),
            other => Error::config("protocol", other.to_string()),
        })?;
        Ok(cfg)
    }

    /// Validates the document and assembles the scenario.
    pub fn build(&self) -> Result<LoadedConfig> {
        let doc = self.normalized();
        let systems = doc.build_modes()?;
        let law = doc.build_law(systems.len())?;
        let protocol = doc.build_protocol(&systems)?;
        let e = &doc.experiment;
        if e.initial_mode == 0 || e.initial_mode > systems.len() {
            return Err(Error::config(
                "experiment.initial_mode",
                format!("{} outside 1..={}", e.initial_mode, systems.len()),
            ));
        }
        if e.runs == 0 {
            return Err(Error::config("experiment.runs", "need at least one run"));
        }
        if !(0.0..=1.0).contains(&e.threshold) {
            return Err(Error::config("experiment.threshold", "must lie in [0, 1]"));
        }
        if doc.certificate.budget == 0 {
            return Err(Error::config("certificate.budget", "must be positive"));
        }
        let scenario = Scenario {
            systems,
            law,
            protocol,
            x0: e.x0.clone(),
            horizon: e.horizon,
            integrator: match e.integrator {
                IntegratorKind::EventExact => Integrator::EventExact,
                IntegratorKind::FixedStep => Integrator::FixedStep { dt: e.dt },
            },
            seed: e.seed,
            initial_mode: e.initial_mode - 1,
            record_per_interval: e.record_per_interval,
        };
        scenario.validate().map_err(at("experiment"))?;
        Ok(LoadedConfig {
            scenario,
            certificate: doc.certificate,
            runs: e.runs,
            threshold: e.threshold,
            document: doc,
        })
    }
}

impl LoadedConfig {
    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self> {
        ConfigDocument::parse(text)?.build()
    }

    /// Changes experiment fields and rebuilds, keeping the document in sync.
    pub fn with_overrides(
        &self,
        horizon: Option<f64>,
        seed: Option<u64>,
        runs: Option<usize>,
    ) -> Result<Self> {
        let mut doc = self.document.clone();
        if let Some(h) = horizon {
            doc.experiment.horizon = h;
        }
        if let Some(s) = seed {
            doc.experiment.seed = s;
        }
        if let Some(r) = runs {
            doc.experiment.runs = r;
        }
        doc.build()
    }

    /// The same document with a different sampling period.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        let mut doc = self.document.clone();
        doc.protocol.tau = tau;
        doc.build()
    }

    pub fn weight_thresholds(&self) -> WeightThresholds {
        self.certificate.weight_thresholds
    }
}

/// Reads and validates a scenario file.
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    LoadedConfig::from_str(&text)
}

/// The bundled three-mode example.
pub fn three_mode_example() -> LoadedConfig {
    LoadedConfig::from_str(THREE_MODE_EXAMPLE).expect("bundled example is valid")
}
