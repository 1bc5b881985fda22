//! The four commands, producing artifacts in memory.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use cgq_core::assignment::{
    assign_bns, assign_partial_trace, mc_estimate_bns, mc_estimate_partial_trace, McEstimate,
};
use cgq_core::channel::{verify_cptp, CptpReport, CptpTolerances};
use cgq_core::discriminate::{helstrom_success, run_discrimination, DiscriminationExperiment};
use cgq_core::dynamics::{effective_trajectory, Assigner, EffectiveChannelSpec, TimeGrid};
use cgq_core::random::{random_density, sample_rng};
use cgq_core::state::{Tolerances, ValidationReport};
use cgq_core::{CoarseGrainingChannel, DensityMatrix, HamiltonianSpec, SamplerConfig};
use serde::Serialize;

use crate::config::{ChannelName, CommandName, HamiltonianSource, RunConfig};
use crate::error::{CliError, Result};
use crate::io::{csv_string, read_json, to_json, StateFile, TableFile};

pub const EVOLVE_HEADER: [&str; 5] = ["t", "rho00", "re_rho01", "im_rho01", "rho11"];
pub const DISCRIMINATE_HEADER: [&str; 4] = ["omega_t", "d_effective", "d_initial", "d_micro"];
pub const PRESETS: [&str; 2] = ["fig3", "partial-trace-local"];

const DEFAULT_ROUND_TRIPS: u64 = 1000;
const ROUND_TRIP_TOL: f64 = 1e-12;
const BOUND_SLACK: f64 = 1e-9;
const EXCURSION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Stdout,
    Stderr,
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct Artifact {
    pub target: Target,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// False only for a failed `verify`.
    pub passed: bool,
}

impl Outcome {
    fn single(cfg: &RunConfig, contents: String) -> Self {
        Self {
            artifacts: vec![Artifact {
                target: data_target(cfg),
                contents,
            }],
            passed: true,
        }
    }

    /// Writes every artifact, creating parent directories as needed.
    pub fn write(&self) -> Result<()> {
        for a in &self.artifacts {
            match &a.target {
                Target::Stdout => print!("{}", a.contents),
                Target::Stderr => eprint!("{}", a.contents),
                Target::File(path) => {
                    let io_err = |source| CliError::Io {
                        path: path.clone(),
                        source,
                    };
                    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                        fs::create_dir_all(dir).map_err(io_err)?;
                    }
                    fs::File::create(path)
                        .and_then(|mut f| f.write_all(a.contents.as_bytes()))
                        .map_err(io_err)?;
                }
            }
        }
        Ok(())
    }
}

fn data_target(cfg: &RunConfig) -> Target {
    cfg.output.data.clone().map_or(Target::Stdout, Target::File)
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    cfg.check()?;
    match cfg.command {
        CommandName::Assign => cmd_assign(cfg),
        CommandName::Evolve => cmd_evolve(cfg),
        CommandName::Discriminate => cmd_discriminate(cfg),
        CommandName::Verify => cmd_verify(cfg),
    }
}

fn tolerances(cfg: &RunConfig) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(x) = cfg.tolerance {
        tol.hermiticity = x;
        tol.trace = x;
    }
    tol
}

fn load_state(cfg: &RunConfig, path: Option<&PathBuf>, what: &str) -> Result<DensityMatrix> {
    let path = path.ok_or_else(|| CliError::Usage(format!("missing {what} file")))?;
    let file: StateFile = read_json(path)?;
    let tol = tolerances(cfg);
    file.to_density(cfg.validate.then_some(&tol))
}

fn load_hamiltonian(source: &HamiltonianSource) -> Result<HamiltonianSpec> {
    match source {
        HamiltonianSource::Named(name) => match HamiltonianSpec::preset(name) {
            Some(h) => Ok(h),
            None => {
                let file: StateFile = read_json(name.as_ref())?;
                Ok(HamiltonianSpec::new(file.to_matrix()?, name.clone())?)
            }
        },
        HamiltonianSource::Inline(file) => Ok(HamiltonianSpec::new(file.to_matrix()?, "inline")?),
    }
}

fn sampler(cfg: &RunConfig) -> Result<Option<SamplerConfig>> {
    let s = &cfg.sampler;
    s.samples
        .map(|n| match s.chunk_size {
            Some(c) => SamplerConfig::with_chunk_size(n, s.seed, c),
            None => SamplerConfig::new(n, s.seed),
        })
        .transpose()
        .map_err(CliError::from)
}

fn effective_spec(cfg: &RunConfig, macro_dim: usize) -> Result<EffectiveChannelSpec> {
    let h = load_hamiltonian(&cfg.hamiltonian)?;
    let spec = match cfg.channel {
        ChannelName::Bns => EffectiveChannelSpec::bns(h)?,
        ChannelName::PartialTrace => EffectiveChannelSpec::partial_trace(macro_dim, cfg.dim_e, h)?,
        ChannelName::Custom => {
            return Err(CliError::Usage(
                "custom channels are only supported by verify".into(),
            ))
        }
    };
    Ok(match sampler(cfg)? {
        Some(s) => spec.with_assigner(Assigner::MonteCarlo(s))?,
        None => spec,
    })
}

#[derive(Serialize)]
struct McReport {
    samples: u64,
    seed: u64,
    chunk_size: u64,
    estimate: StateFile,
    max_std_error: f64,
    /// Largest entry-wise deviation from the closed form.
    max_deviation: f64,
}

#[derive(Serialize)]
struct AssignReport {
    channel: &'static str,
    input: StateFile,
    micro_state: StateFile,
    validation: ValidationReport,
    /// `max |Λ[A[rho]] - rho|`
    round_trip_deviation: f64,
    monte_carlo: Option<McReport>,
}

fn cmd_assign(cfg: &RunConfig) -> Result<Outcome> {
    let rho = load_state(cfg, cfg.state.as_ref(), "state")?;
    let (channel, micro) = match cfg.channel {
        ChannelName::Bns => (CoarseGrainingChannel::bns(), assign_bns(&rho)?),
        ChannelName::PartialTrace => (
            CoarseGrainingChannel::partial_trace(rho.dim(), cfg.dim_e)?,
            assign_partial_trace(&rho, cfg.dim_e)?,
        ),
        ChannelName::Custom => {
            return Err(CliError::Usage(
                "custom channels are only supported by verify".into(),
            ))
        }
    };
    let round_trip_deviation = channel.apply(micro.matrix())?.max_abs_diff(rho.matrix());

    let monte_carlo = match sampler(cfg)? {
        None => None,
        Some(s) => {
            let est: McEstimate = match cfg.channel {
                ChannelName::Bns => mc_estimate_bns(&rho, &s)?,
                _ => mc_estimate_partial_trace(&rho, cfg.dim_e, &s)?,
            };
            Some(McReport {
                samples: est.samples,
                seed: s.seed,
                chunk_size: s.chunk_size,
                estimate: StateFile::from_matrix(est.mean.matrix()),
                max_std_error: est.max_std_error,
                max_deviation: est.mean.matrix().max_abs_diff(micro.matrix()),
            })
        }
    };

    let report = AssignReport {
        channel: channel.name(),
        input: StateFile::from_matrix(rho.matrix()),
        micro_state: StateFile::from_matrix(micro.matrix()),
        validation: micro.validate(&tolerances(cfg)),
        round_trip_deviation,
        monte_carlo,
    };
    Ok(Outcome::single(cfg, to_json(&report)))
}

fn grid(cfg: &RunConfig) -> Result<TimeGrid> {
    let g = &cfg.time_grid;
    Ok(TimeGrid::uniform(g.t_min, g.t_max, g.steps)?)
}

fn cmd_evolve(cfg: &RunConfig) -> Result<Outcome> {
    let rho = load_state(cfg, cfg.state.as_ref(), "state")?;
    if rho.dim() != 2 {
        return Err(CliError::Usage(format!(
            "evolve writes qubit populations and coherences; got a state of dimension {}",
            rho.dim()
        )));
    }
    let spec = effective_spec(cfg, rho.dim())?;
    let grid = grid(cfg)?;
    let states = effective_trajectory(&spec, &rho, grid.points())?;
    let rows = grid.points().iter().zip(&states).map(|(&t, s)| {
        let c = s.get(0, 1);
        vec![t, s.get(0, 0).re, c.re, c.im, s.get(1, 1).re]
    });
    Ok(Outcome::single(cfg, csv_string(&EVOLVE_HEADER, rows)?))
}

fn preset_experiment(name: &str, cfg: &RunConfig) -> Result<DiscriminationExperiment> {
    let fig3 = DiscriminationExperiment::fig3();
    let spec = match name {
        "fig3" => fig3.spec.clone(),
        "partial-trace-local" => {
            EffectiveChannelSpec::partial_trace(2, 2, HamiltonianSpec::local_y())?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    let spec = match sampler(cfg)? {
        Some(s) => spec.with_assigner(Assigner::MonteCarlo(s))?,
        None => spec,
    };
    Ok(DiscriminationExperiment::new(
        fig3.rho0,
        fig3.chi0,
        spec,
        fig3.time_grid,
    )?)
}

#[derive(Serialize)]
struct DiscriminationSummary {
    preset: Option<String>,
    channel: &'static str,
    hamiltonian: String,
    points: usize,
    d_initial: f64,
    d_micro: f64,
    max_d_effective: f64,
    argmax_t: f64,
    max_excursion: f64,
    exceeds_initial: bool,
    helstrom_initial: f64,
    helstrom_at_peak: f64,
    /// `max_t d_effective(t) - d_micro`
    max_bound_violation: f64,
    micro_bound_holds: bool,
}

fn cmd_discriminate(cfg: &RunConfig) -> Result<Outcome> {
    let exp = match &cfg.preset {
        Some(name) => preset_experiment(name, cfg)?,
        None => {
            let rho = load_state(cfg, cfg.state.as_ref(), "state")?;
            let chi = load_state(cfg, cfg.chi.as_ref(), "chi")?;
            let spec = effective_spec(cfg, rho.dim())?;
            DiscriminationExperiment::new(rho, chi, spec, grid(cfg)?)?
        }
    };
    let series = run_discrimination(&exp)?;
    let rows = series
        .t
        .iter()
        .zip(&series.d_effective)
        .map(|(&t, &d)| vec![t, d, series.d_initial, series.d_micro]);
    let csv = csv_string(&DISCRIMINATE_HEADER, rows)?;

    let (argmax_t, peak) = series.peak();
    let summary = DiscriminationSummary {
        preset: cfg.preset.clone(),
        channel: exp.spec.channel().name(),
        hamiltonian: exp.spec.hamiltonian().label().to_string(),
        points: series.t.len(),
        d_initial: series.d_initial,
        d_micro: series.d_micro,
        max_d_effective: peak,
        argmax_t,
        max_excursion: series.max_excursion(),
        exceeds_initial: series.max_excursion() > EXCURSION_FLOOR,
        helstrom_initial: helstrom_success(&exp.rho0, &exp.chi0)?,
        helstrom_at_peak: 0.5 * (1.0 + peak),
        max_bound_violation: series.max_bound_violation(),
        micro_bound_holds: series.max_bound_violation() <= BOUND_SLACK,
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                target: data_target(cfg),
                contents: csv,
            },
            Artifact {
                target: cfg.summary_path().map_or(Target::Stderr, Target::File),
                contents: to_json(&summary),
            },
        ],
        passed: true,
    })
}

#[derive(Serialize)]
struct RoundTripReport {
    states: u64,
    seed: u64,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    channel: &'static str,
    dim_in: usize,
    dim_out: usize,
    cptp: CptpReport,
    /// Left-inverse law; absent for custom channels, which have no assignment.
    round_trip: Option<RoundTripReport>,
    passed: bool,
}

fn round_trip(cfg: &RunConfig, channel: &CoarseGrainingChannel) -> Result<RoundTripReport> {
    let states = cfg.sampler.samples.unwrap_or(DEFAULT_ROUND_TRIPS);
    let seed = cfg.sampler.seed;
    let tolerance = cfg.tolerance.unwrap_or(ROUND_TRIP_TOL);
    let mut max_deviation = 0.0f64;
    for k in 0..states {
        let rho = random_density(&mut sample_rng(seed, k), channel.dim_out());
        let micro = match cfg.channel {
            ChannelName::Bns => assign_bns(&rho)?,
            _ => assign_partial_trace(&rho, cfg.dim_e)?,
        };
        max_deviation =
            max_deviation.max(channel.apply(micro.matrix())?.max_abs_diff(rho.matrix()));
    }
    Ok(RoundTripReport {
        states,
        seed,
        max_deviation,
        tolerance,
        passed: max_deviation <= tolerance,
    })
}

fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let channel = match cfg.channel {
        ChannelName::Bns => CoarseGrainingChannel::bns(),
        ChannelName::PartialTrace => CoarseGrainingChannel::partial_trace(cfg.dim_s, cfg.dim_e)?,
        ChannelName::Custom => {
            let path = cfg
                .table
                .as_ref()
                .ok_or_else(|| CliError::Usage("verify --channel custom needs --table".into()))?;
            let file: TableFile = read_json(path)?;
            CoarseGrainingChannel::custom(file.to_table()?)?
        }
    };
    let mut tol = CptpTolerances::default();
    if let Some(x) = cfg.tolerance {
        tol.trace_preservation = x;
    }
    let cptp = verify_cptp(&channel, &tol)?;
    let round_trip = match cfg.channel {
        ChannelName::Custom => None,
        _ => Some(round_trip(cfg, &channel)?),
    };
    let passed = cptp.passed && round_trip.as_ref().is_none_or(|r| r.passed);
    let report = VerifyReport {
        channel: channel.name(),
        dim_in: channel.dim_in(),
        dim_out: channel.dim_out(),
        cptp,
        round_trip,
        passed,
    };
    let mut outcome = Outcome::single(cfg, to_json(&report));
    outcome.passed = passed;
    Ok(outcome)
}
