//! Effective coarse-grained dynamics `Γ_t = Λ ∘ U_t ∘ A_Λ`.
//!
//! A macro state is lifted to its averaging assignment, evolved unitarily and
//! coarse-grained again. With the partial trace this is ordinary open-system
//! dynamics and linear in the input; with the detector channel the assignment
//! is nonlinear and so is `Γ_t`.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::assignment::{
    assign_bns, assign_partial_trace, mc_average_bns, mc_average_partial_trace, SamplerConfig,
};
use crate::channel::{ChannelKind, CoarseGrainingChannel};
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::matrix::ComplexMatrix;
use crate::state::{partial_trace_env, DensityMatrix};

/// How the micro state is obtained from the macro state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Assigner {
    ClosedForm,
    MonteCarlo(SamplerConfig),
}

#[derive(Debug, Clone)]
pub struct EffectiveChannelSpec {
    channel: CoarseGrainingChannel,
    assigner: Assigner,
    hamiltonian: HamiltonianSpec,
}

impl EffectiveChannelSpec {
    pub fn new(
        channel: CoarseGrainingChannel,
        assigner: Assigner,
        hamiltonian: HamiltonianSpec,
    ) -> Result<Self> {
        if hamiltonian.dim() != channel.dim_in() {
            return Err(Error::IncompatibleSpec(format!(
                "Hamiltonian of dimension {} for a channel on dimension {}",
                hamiltonian.dim(),
                channel.dim_in()
            )));
        }
        if let ChannelKind::Custom(_) = channel.kind() {
            return Err(Error::IncompatibleSpec(
                "no averaging assignment is available for custom channels".into(),
            ));
        }
        if let Assigner::MonteCarlo(cfg) = &assigner {
            cfg.validate()?;
        }
        Ok(Self {
            channel,
            assigner,
            hamiltonian,
        })
    }

    /// Detector channel with the closed-form assignment.
    pub fn bns(hamiltonian: HamiltonianSpec) -> Result<Self> {
        Self::new(
            CoarseGrainingChannel::bns(),
            Assigner::ClosedForm,
            hamiltonian,
        )
    }

    /// Partial trace over a `dim_e`-dimensional environment.
    pub fn partial_trace(dim_s: usize, dim_e: usize, hamiltonian: HamiltonianSpec) -> Result<Self> {
        Self::new(
            CoarseGrainingChannel::partial_trace(dim_s, dim_e)?,
            Assigner::ClosedForm,
            hamiltonian,
        )
    }

    pub fn with_assigner(mut self, assigner: Assigner) -> Result<Self> {
        if let Assigner::MonteCarlo(cfg) = &assigner {
            cfg.validate()?;
        }
        self.assigner = assigner;
        Ok(self)
    }

    pub fn channel(&self) -> &CoarseGrainingChannel {
        &self.channel
    }

    pub fn assigner(&self) -> &Assigner {
        &self.assigner
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn macro_dim(&self) -> usize {
        self.channel.dim_out()
    }

    /// `A_Λ[rho]`
    pub fn assign(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.macro_dim() {
            return Err(Error::Dimension(format!(
                "macro state of dimension {} for a channel with output dimension {}",
                rho.dim(),
                self.macro_dim()
            )));
        }
        match (self.channel.kind(), &self.assigner) {
            (ChannelKind::PartialTraceEnv { dim_e, .. }, Assigner::ClosedForm) => {
                assign_partial_trace(rho, *dim_e)
            }
            (ChannelKind::PartialTraceEnv { dim_e, .. }, Assigner::MonteCarlo(cfg)) => {
                mc_average_partial_trace(rho, *dim_e, cfg)
            }
            (ChannelKind::BlurredSaturated(_), Assigner::ClosedForm) => assign_bns(rho),
            (ChannelKind::BlurredSaturated(_), Assigner::MonteCarlo(cfg)) => {
                mc_average_bns(rho, cfg)
            }
            (ChannelKind::Custom(_), _) => unreachable!("rejected at construction"),
        }
    }

    /// `Λ[U_t micro U_t†]` for an already assigned micro state.
    pub fn evolve_micro(&self, micro: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        self.coarse_grain_with(micro, &self.hamiltonian.unitary_at(t))
    }

    fn coarse_grain_with(&self, micro: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
        let evolved = micro.matrix().conjugate_by(u)?;
        self.channel
            .apply(&evolved)
            .map(DensityMatrix::new_unchecked)
    }

    /// `Γ_t` applied to several micro states with one propagator.
    pub(crate) fn evolve_many(
        &self,
        micros: &[&DensityMatrix],
        t: f64,
    ) -> Result<Vec<DensityMatrix>> {
        let u = self.hamiltonian.unitary_at(t);
        micros
            .iter()
            .map(|m| self.coarse_grain_with(m, &u))
            .collect()
    }
}

/// `Γ_t[rho0] = Λ[U_t A_Λ[rho0] U_t†]`, with `t` the dimensionless `ωt`.
pub fn effective_evolve(
    spec: &EffectiveChannelSpec,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    let micro = spec.assign(rho0)?;
    spec.evolve_micro(&micro, t)
}

/// `Γ_t[rho0]` on every point of `times`; the assignment is computed once.
pub fn effective_trajectory(
    spec: &EffectiveChannelSpec,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Vec<DensityMatrix>> {
    let micro = spec.assign(rho0)?;
    times
        .par_iter()
        .map(|&t| spec.evolve_micro(&micro, t))
        .collect()
}

/// `tr_E[U_t (rho0 ⊗ 1/d_E) U_t†]`
pub fn open_system_evolve(
    rho0: &DensityMatrix,
    h_se: &HamiltonianSpec,
    dim_e: usize,
    t: f64,
) -> Result<DensityMatrix> {
    if h_se.dim() != rho0.dim() * dim_e {
        return Err(Error::Dimension(format!(
            "Hamiltonian of dimension {} for a {} x {} system",
            h_se.dim(),
            rho0.dim(),
            dim_e
        )));
    }
    let joint = assign_partial_trace(rho0, dim_e)?;
    let evolved = joint.conjugate_by(&h_se.unitary_at(t))?;
    partial_trace_env(&evolved, rho0.dim(), dim_e)
}

/// `max |Γ_t[α rho + (1-α) chi] - (α Γ_t[rho] + (1-α) Γ_t[chi])|`
pub fn linearity_probe(
    spec: &EffectiveChannelSpec,
    rho: &DensityMatrix,
    chi: &DensityMatrix,
    alpha: f64,
    t: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!(
            "mixing weight {alpha} outside [0, 1]"
        )));
    }
    let mixed = rho.mix(chi, alpha)?;
    let lhs = effective_evolve(spec, &mixed, t)?;
    let rhs = effective_evolve(spec, rho, t)?.mix(&effective_evolve(spec, chi, t)?, alpha)?;
    Ok(lhs.matrix().max_abs_diff(rhs.matrix()))
}

/// Evenly spaced, strictly increasing time points (dimensionless `ωt`).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    /// `steps` points from `t_min` to `t_max` inclusive; a single step gives
    /// just `t_min`.
    pub fn uniform(t_min: f64, t_max: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Config("a time grid needs at least one point".into()));
        }
        if !t_min.is_finite() || !t_max.is_finite() {
            return Err(Error::Config("time grid bounds must be finite".into()));
        }
        if steps > 1 && t_max <= t_min {
            return Err(Error::Config(format!(
                "t_max = {t_max} must exceed t_min = {t_min}"
            )));
        }
        if steps == 1 {
            return Ok(Self(vec![t_min]));
        }
        let h = (t_max - t_min) / (steps - 1) as f64;
        let mut pts: Vec<f64> = (0..steps).map(|k| t_min + h * k as f64).collect();
        pts[steps - 1] = t_max;
        Ok(Self(pts))
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("a time grid needs at least one point".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) || points.iter().any(|t| !t.is_finite()) {
            return Err(Error::Config(
                "time grid must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self(points))
    }

    /// 200 points on `[0, 2π]`.
    pub fn default_evolution() -> Self {
        Self::uniform(0.0, TAU, 200).expect("valid bounds")
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
