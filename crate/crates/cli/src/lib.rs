//! Experiment runner for weighted continuous-time search.
//!
//! Every subcommand turns a [`RunConfig`] into a list of [`Artifact`]s;
//! [`run`] writes them and maps failures to exit codes.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ctsearch_core::SearchError;
use serde::{Deserialize, Serialize};

mod commands;
mod output;

pub use commands::{build_artifacts, RunOutput, DEMO_SCENARIO};
pub use output::{Artifact, ArtifactKind};

/// Tag mixed into the seed for each subcommand's random stream.
pub fn stream_tag(command: Command) -> String {
    format!("ctsearch/{}", command.name())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Verify,
    Estimate,
    Count,
    Sweep,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Estimate => "estimate",
            Command::Count => "count",
            Command::Sweep => "sweep",
            Command::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

impl Format {
    pub fn wants(self, kind: ArtifactKind) -> bool {
        matches!(
            (self, kind),
            (Format::Both, _)
                | (Format::Json, ArtifactKind::Json)
                | (Format::Csv, ArtifactKind::Csv)
        )
    }
}

/// Misplaced-confidence sweep parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub l: usize,
    pub n1: usize,
    pub n2: usize,
    pub n12: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            l: 1,
            n1: 2,
            n2: 1,
            n12: 0,
            alpha_min: 0.5,
            alpha_max: 0.999,
            points: 100,
        }
    }
}

impl SweepConfig {
    /// Evenly spaced grid, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![self.alpha_min];
        }
        let step = (self.alpha_max - self.alpha_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.alpha_max
                } else {
                    self.alpha_min + step * k as f64
                }
            })
            .collect()
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `None` selects the bundled demo scenario.
    pub scenario_path: Option<PathBuf>,
    /// `None` lets the subcommand choose.
    pub m_size: Option<usize>,
    pub n_samples: Option<usize>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub format: Format,
    /// Overrides the scenario's energy.
    pub energy: Option<f64>,
    pub sweep: SweepConfig,
}

impl RunConfig {
    pub fn new(command: Command, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            command,
            scenario_path: None,
            m_size: None,
            n_samples: None,
            seed: 0,
            output_dir: output_dir.into(),
            format: Format::Both,
            energy: None,
            sweep: SweepConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(m) = self.m_size {
            if m < 2 || !m.is_power_of_two() {
                return Err(SearchError::NotPowerOfTwo(m).into());
            }
        }
        if self.n_samples == Some(0) {
            return Err(SearchError::NoSamples.into());
        }
        if let Some(e) = self.energy {
            if !(e.is_finite() && e > 0.0) {
                return Err(SearchError::BadEnergy(e).into());
            }
        }
        if self.sweep.points == 0 {
            return Err(CliError::Config(
                "sweep needs at least one grid point".into(),
            ));
        }
        Ok(())
    }
}

/// Optional settings read from `--config`; command-line flags take
/// precedence over every field.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<PathBuf>,
    pub m_size: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub energy: Option<f64>,
    pub sweep: Option<SweepConfig>,
}

impl FileConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("output error: {0}")]
    Output(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    /// 1 for bad input, 2 when a computed result breaks an invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 2,
            _ => 1,
        }
    }
}

/// Builds, filters and writes the artifacts; returns the written paths.
/// A violated invariant is reported as an error after the files are written.
pub fn execute(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    config.validate()?;
    let RunOutput {
        artifacts,
        violation,
    } = build_artifacts(config)?;
    fs::create_dir_all(&config.output_dir).map_err(|source| CliError::Io {
        path: config.output_dir.clone(),
        source,
    })?;
    let mut written = Vec::new();
    for artifact in artifacts.iter().filter(|a| config.format.wants(a.kind)) {
        let path = config.output_dir.join(&artifact.name);
        fs::write(&path, &artifact.bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    match violation {
        Some(v) => Err(CliError::Invariant(v)),
        None => Ok(written),
    }
}

/// Runs one subcommand and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grid_hits_endpoints() {
        let g = SweepConfig::default().grid();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[99], 0.999);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn validation_errors() {
        let mut c = RunConfig::new(Command::Estimate, "out");
        assert!(c.validate().is_ok());
        c.m_size = Some(12);
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
        c.m_size = Some(16);
        c.n_samples = Some(0);
        assert!(c.validate().is_err());
        assert_eq!(CliError::Invariant("x".into()).exit_code(), 2);
    }

    #[test]
    fn format_filter() {
        assert!(Format::Both.wants(ArtifactKind::Csv));
        assert!(Format::Json.wants(ArtifactKind::Json));
        assert!(!Format::Json.wants(ArtifactKind::Csv));
        assert!(!Format::Csv.wants(ArtifactKind::Json));
    }

    #[test]
    fn demo_scenario_loads() {
        let s = ctsearch_core::SearchScenario::from_json_str(DEMO_SCENARIO).unwrap();
        assert_eq!(s.n_targets(), 5);
        assert_eq!(
            s.classify_confidence().unwrap().class,
            ctsearch_core::Confidence::Basic
        );
    }
}
