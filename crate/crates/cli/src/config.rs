//! JSON run configuration.
//!
//! ```json
//! {
//!   "domain": {"ellipse": {"a": 1.2, "b": 0.8333333333333334}},
//!   "resolution": {"n_rays": 256, "n_radial": 64, "grading": 0.85},
//!   "schedule": [0.2, 0.1, 0.05, 0.02],
//!   "checks": ["SHRINKING_HOLE", "ISOPERIMETRIC_M"],
//!   "output_dir": "out"
//! }
//! ```
//! Every key except `domain` is optional.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use steklov::experiments::{Check, ExperimentPlan, Resolution, Tolerances};
use steklov::geometry::{DomainSpec, OuterBoundary};
use steklov::shells::{CorrectorSpec, ShellSpec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config: parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("config: {} invalid setting(s):\n  - {}", .0.len(), .0.join("\n  - "))]
    Validation(Vec<String>),
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_eigen_count() -> usize {
    8
}

fn default_checks() -> BTreeSet<Check> {
    Check::ALL.into_iter().collect()
}

fn default_shell() -> ShellSpec {
    ShellSpec { n: 2, r: 0.5, outer: 1.0 }
}

fn default_corrector() -> Vec<CorrectorSpec> {
    let planar = [0.1, 0.05, 0.01].map(|eps| CorrectorSpec { n: 2, eps, rate: 2.0 });
    let spatial = [0.5, 0.3, 0.2].map(|eps| CorrectorSpec { n: 3, eps, rate: 4.0 });
    planar.into_iter().chain(spatial).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub domain: OuterBoundary,
    #[serde(default)]
    pub resolution: Resolution,
    /// Hole radii, strictly decreasing.
    #[serde(default)]
    pub schedule: Vec<f64>,
    #[serde(default = "default_checks")]
    pub checks: BTreeSet<Check>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Shell used by `shell` (its `n` and `R`) and by the shell validation ladder.
    #[serde(default = "default_shell")]
    pub shell: ShellSpec,
    #[serde(default = "default_eigen_count")]
    pub eigen_count: usize,
    #[serde(default = "default_corrector")]
    pub corrector: Vec<CorrectorSpec>,
}

impl Config {
    pub fn outer_domain(&self) -> DomainSpec {
        DomainSpec { outer: self.domain.clone(), hole_radius: 0.0 }
    }

    pub fn plan(&self) -> ExperimentPlan {
        let mut plan = ExperimentPlan::new(self.outer_domain(), self.schedule.clone(), self.checks.iter().copied());
        plan.resolution = self.resolution;
        plan.tolerances = self.tolerances;
        plan.eigen_count = self.eigen_count;
        plan.shell = self.shell;
        plan.corrector_schedule = self.corrector.clone();
        plan
    }

    /// Every violated invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.plan().violations();
        if ShellSpec::new(self.shell.n, self.shell.r, self.shell.outer).is_err() {
            out.push(format!("shell needs n >= 2 and 0 <= r < R, got {:?}", self.shell));
        }
        if self.output_dir.as_os_str().is_empty() {
            out.push("output_dir is empty".into());
        }
        out.dedup();
        out
    }

    /// Pretty JSON with every default written out.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let config: Config = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let v = config.violations();
    if v.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Validation(v))
    }
}
