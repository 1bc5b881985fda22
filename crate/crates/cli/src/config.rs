//! Run configuration shared by the command-line flags and `--config` files.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{read_json, StateFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Assign,
    Evolve,
    Discriminate,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelName {
    PartialTrace,
    #[default]
    Bns,
    /// Only meaningful for `verify`, with a table file.
    Custom,
}

/// A preset name, a path to a matrix file, or an inline matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianSource {
    Named(String),
    Inline(StateFile),
}

impl Default for HamiltonianSource {
    fn default() -> Self {
        HamiltonianSource::Named("global-y".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            t_min: 0.0,
            t_max: TAU,
            steps: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerSettings {
    /// Monte-Carlo sample count; absent means the closed-form assignment.
    /// For `verify` it is the number of random round-trip states.
    pub samples: Option<u64>,
    pub seed: u64,
    pub chunk_size: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputPaths {
    /// Main artifact; standard output when absent.
    pub data: Option<PathBuf>,
    /// Discrimination summary; defaults to `<data>.summary.json`.
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub state: Option<PathBuf>,
    /// Second state for `discriminate`.
    #[serde(default)]
    pub chi: Option<PathBuf>,
    /// Channel table for `verify --channel custom`.
    #[serde(default)]
    pub table: Option<PathBuf>,
    #[serde(default)]
    pub channel: ChannelName,
    #[serde(default = "default_dim")]
    pub dim_s: usize,
    #[serde(default = "default_dim")]
    pub dim_e: usize,
    #[serde(default)]
    pub hamiltonian: HamiltonianSource,
    #[serde(default)]
    pub time_grid: GridConfig,
    #[serde(default)]
    pub sampler: SamplerSettings,
    #[serde(default)]
    pub output: OutputPaths,
    /// Overrides the hermiticity, trace and trace-preservation tolerances.
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default = "default_true")]
    pub validate: bool,
}

fn default_dim() -> usize {
    2
}

fn default_true() -> bool {
    true
}

impl RunConfig {
    pub fn new(command: CommandName) -> Self {
        Self {
            command,
            preset: None,
            state: None,
            chi: None,
            table: None,
            channel: ChannelName::default(),
            dim_s: default_dim(),
            dim_e: default_dim(),
            hamiltonian: HamiltonianSource::default(),
            time_grid: GridConfig::default(),
            sampler: SamplerSettings::default(),
            output: OutputPaths::default(),
            tolerance: None,
            validate: true,
        }
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: RunConfig = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut() {
                if q.is_relative() {
                    *q = base.join(&*q);
                }
            }
        };
        rebase(&mut cfg.state);
        rebase(&mut cfg.chi);
        rebase(&mut cfg.table);
        rebase(&mut cfg.output.data);
        rebase(&mut cfg.output.summary);
        if let HamiltonianSource::Named(name) = &mut cfg.hamiltonian {
            let p = Path::new(name.as_str());
            if cgq_core::HamiltonianSpec::preset(name).is_none() && p.is_relative() {
                *name = base.join(p).to_string_lossy().into_owned();
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        if self.time_grid.steps == 0 {
            return Err(CliError::Usage("steps must be at least 1".into()));
        }
        if self.sampler.samples == Some(0) {
            return Err(CliError::Usage("samples must be at least 1".into()));
        }
        if self.sampler.chunk_size == Some(0) {
            return Err(CliError::Usage("chunk size must be at least 1".into()));
        }
        if self.dim_s == 0 || self.dim_e == 0 {
            return Err(CliError::Usage("dimensions must be positive".into()));
        }
        if let Some(tol) = self.tolerance {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Usage(format!("tolerance {tol} must be positive")));
            }
        }
        Ok(())
    }

    /// Summary path for `discriminate`, if any.
    pub fn summary_path(&self) -> Option<PathBuf> {
        self.output.summary.clone().or_else(|| {
            self.output
                .data
                .as_ref()
                .map(|p| p.with_extension("summary.json"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"command":"discriminate","preset":"fig3"}"#).unwrap();
        assert_eq!(cfg.channel, ChannelName::Bns);
        assert_eq!(cfg.time_grid, GridConfig::default());
        assert_eq!(cfg.hamiltonian, HamiltonianSource::Named("global-y".into()));
        assert!(cfg.validate);
    }

    #[test]
    fn inline_hamiltonian() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"command":"evolve","channel":"partial-trace",
                "hamiltonian":{"dim":4,"re":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}}"#,
        )
        .unwrap();
        assert!(matches!(cfg.hamiltonian, HamiltonianSource::Inline(_)));
    }

    #[test]
    fn invariants() {
        let mut cfg = RunConfig::new(CommandName::Evolve);
        cfg.time_grid.steps = 0;
        assert!(cfg.check().is_err());
        let mut cfg = RunConfig::new(CommandName::Assign);
        cfg.sampler.samples = Some(0);
        assert!(cfg.check().is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"command":"assign","bogus":1}"#).is_err());
    }

    #[test]
    fn summary_path_follows_data_path() {
        let mut cfg = RunConfig::new(CommandName::Discriminate);
        assert_eq!(cfg.summary_path(), None);
        cfg.output.data = Some(PathBuf::from("out/fig3.csv"));
        assert_eq!(
            cfg.summary_path(),
            Some(PathBuf::from("out/fig3.summary.json"))
        );
    }
}
