//! Command-line flags, mapped onto [`RunConfig`].

use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ChannelName, CommandName, GridConfig, HamiltonianSource, RunConfig};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "cgq",
    version,
    about = "Coarse-grained quantum dynamics experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Assign a micro state to a macro state; writes the state and a report as JSON.
    Assign {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Effective evolution of a qubit state; writes CSV.
    Evolve {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        dynamics: Dynamics,
    },
    /// Trace distance between two effectively evolved states; writes CSV and a JSON summary.
    Discriminate {
        /// Built-in experiment: fig3 or partial-trace-local. Overrides states,
        /// channel, Hamiltonian and grid.
        #[arg(long, conflicts_with_all = ["state", "chi"])]
        preset: Option<String>,
        #[arg(long, required_unless_present = "preset")]
        state: Option<PathBuf>,
        #[arg(long, required_unless_present = "preset")]
        chi: Option<PathBuf>,
        /// Summary JSON path [default: <out>.summary.json, or stderr]
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        dynamics: Dynamics,
    },
    /// CPTP and left-inverse checks for a channel; exits 1 on failure.
    Verify {
        /// Channel table JSON, for --channel custom.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dim_s: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = ChannelName::Bns)]
    pub channel: ChannelName,
    #[arg(long, default_value_t = 2)]
    pub dim_e: usize,
    /// Monte-Carlo sample count (round-trip state count for verify).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, env = "CGQ_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub chunk_size: Option<u64>,
    /// Output path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Accept input states without density-matrix validation.
    #[arg(long)]
    pub no_validate: bool,
}

#[derive(Debug, Args)]
pub struct Dynamics {
    /// Preset (local-y, global-y) or matrix JSON file.
    #[arg(long, default_value = "global-y")]
    pub hamiltonian: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = TAU, allow_negative_numbers = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

impl Common {
    fn apply(self, cfg: &mut RunConfig) {
        cfg.channel = self.channel;
        cfg.dim_e = self.dim_e;
        cfg.sampler.samples = self.samples;
        cfg.sampler.seed = self.seed;
        cfg.sampler.chunk_size = self.chunk_size;
        cfg.output.data = self.out;
        cfg.tolerance = self.tol;
        cfg.validate = !self.no_validate;
    }
}

impl Dynamics {
    fn apply(self, cfg: &mut RunConfig) {
        cfg.hamiltonian = HamiltonianSource::Named(self.hamiltonian);
        cfg.time_grid = GridConfig {
            t_min: self.t_min,
            t_max: self.t_max,
            steps: self.steps,
        };
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let cfg = match self.command {
            Cmd::Assign { state, common } => {
                let mut cfg = RunConfig::new(CommandName::Assign);
                cfg.state = Some(state);
                common.apply(&mut cfg);
                cfg
            }
            Cmd::Evolve {
                state,
                common,
                dynamics,
            } => {
                let mut cfg = RunConfig::new(CommandName::Evolve);
                cfg.state = Some(state);
                common.apply(&mut cfg);
                dynamics.apply(&mut cfg);
                cfg
            }
            Cmd::Discriminate {
                preset,
                state,
                chi,
                summary,
                common,
                dynamics,
            } => {
                let mut cfg = RunConfig::new(CommandName::Discriminate);
                cfg.preset = preset;
                cfg.state = state;
                cfg.chi = chi;
                common.apply(&mut cfg);
                dynamics.apply(&mut cfg);
                cfg.output.summary = summary;
                cfg
            }
            Cmd::Verify {
                table,
                dim_s,
                common,
            } => {
                let mut cfg = RunConfig::new(CommandName::Verify);
                cfg.table = table;
                cfg.dim_s = dim_s;
                common.apply(&mut cfg);
                cfg
            }
            Cmd::Run { config } => return RunConfig::load(&config),
        };
        cfg.check()?;
        Ok(cfg)
    }
}
