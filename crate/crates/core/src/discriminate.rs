//! Two-state discrimination under effective dynamics.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{EffectiveChannelSpec, TimeGrid};
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::state::{trace_distance, DensityMatrix, PureStateVector};

/// Optimal single-shot success probability `(1 + D(rho, chi)) / 2` for two
/// equiprobable states.
pub fn helstrom_success(rho: &DensityMatrix, chi: &DensityMatrix) -> Result<f64> {
    Ok(0.5 * (1.0 + trace_distance(rho, chi)?))
}

#[derive(Debug, Clone)]
pub struct DiscriminationExperiment {
    pub rho0: DensityMatrix,
    pub chi0: DensityMatrix,
    pub spec: EffectiveChannelSpec,
    pub time_grid: TimeGrid,
}

impl DiscriminationExperiment {
    pub fn new(
        rho0: DensityMatrix,
        chi0: DensityMatrix,
        spec: EffectiveChannelSpec,
        time_grid: TimeGrid,
    ) -> Result<Self> {
        for s in [&rho0, &chi0] {
            if s.dim() != spec.macro_dim() {
                return Err(Error::Dimension(format!(
                    "state of dimension {} for an effective channel on dimension {}",
                    s.dim(),
                    spec.macro_dim()
                )));
            }
        }
        Ok(Self {
            rho0,
            chi0,
            spec,
            time_grid,
        })
    }

    /// `rho0 = 1/2`, `chi0 = |χ><χ|` with `|χ> = √0.8|0> + √0.2|1>`, the
    /// detector channel and `H = σy⊗1 + 1⊗σy`, on 400 points of `[0, 2π]`.
    pub fn fig3() -> Self {
        let chi = PureStateVector::new(vec![
            Complex64::new(0.8f64.sqrt(), 0.0),
            Complex64::new(0.2f64.sqrt(), 0.0),
        ])
        .expect("normalized");
        Self::new(
            DensityMatrix::maximally_mixed(2),
            chi.projector(),
            EffectiveChannelSpec::bns(HamiltonianSpec::global_y()).expect("compatible"),
            TimeGrid::uniform(0.0, TAU, 400).expect("valid grid"),
        )
        .expect("consistent dimensions")
    }
}

/// Distances along an effective trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSeries {
    pub t: Vec<f64>,
    pub d_effective: Vec<f64>,
    /// `D(rho0, chi0)`
    pub d_initial: f64,
    /// Distance between the two assigned micro states; an upper bound for
    /// every entry of `d_effective`.
    pub d_micro: f64,
}

impl TraceSeries {
    /// `(t, d)` at the first maximum of the effective distance.
    pub fn peak(&self) -> (f64, f64) {
        let mut best = 0;
        for (k, d) in self.d_effective.iter().enumerate() {
            if *d > self.d_effective[best] {
                best = k;
            }
        }
        (self.t[best], self.d_effective[best])
    }

    /// `max_t d_effective(t) - d_initial`
    pub fn max_excursion(&self) -> f64 {
        self.peak().1 - self.d_initial
    }

    /// `max_t d_effective(t) - d_micro`; non-positive when the micro bound holds.
    pub fn max_bound_violation(&self) -> f64 {
        self.d_effective
            .iter()
            .map(|d| d - self.d_micro)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn run_discrimination(exp: &DiscriminationExperiment) -> Result<TraceSeries> {
    let spec = &exp.spec;
    let micro_rho = spec.assign(&exp.rho0)?;
    let micro_chi = spec.assign(&exp.chi0)?;
    let d_initial = trace_distance(&exp.rho0, &exp.chi0)?;
    let d_micro = trace_distance(&micro_rho, &micro_chi)?;

    let t = exp.time_grid.points().to_vec();
    let d_effective = t
        .par_iter()
        .map(|&time| {
            let out = spec.evolve_many(&[&micro_rho, &micro_chi], time)?;
            trace_distance(&out[0], &out[1])
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(TraceSeries {
        t,
        d_effective,
        d_initial,
        d_micro,
    })
}
