//! Macro-to-micro averaging assignment maps.
//!
//! Each assignment returns the average of the pure micro states compatible
//! with a given macro state. Closed forms are provided for the partial trace
//! and the blurred-and-saturated detector, together with Monte-Carlo
//! estimators that average explicit samples of the compatible set and serve
//! as independent checks of the closed forms.

mod closed_form;
mod montecarlo;
mod orbit;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closed_form::{assign_bns, assign_partial_trace};
pub use montecarlo::{
    mc_average_bns, mc_average_orbit, mc_average_partial_trace, mc_estimate_bns, mc_estimate_orbit,
    mc_estimate_partial_trace, purification, McEstimate,
};
pub use orbit::{canonical_orbit_seed, orbit_state, OrbitSeed};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 15;

/// Monte-Carlo run parameters. Sample `k` always draws from the generator
/// stream `(seed, k)`, so `chunk_size` only changes how work is split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub sample_count: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl SamplerConfig {
    pub fn new(sample_count: u64, seed: u64) -> Result<Self> {
        Self::with_chunk_size(sample_count, seed, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_chunk_size(sample_count: u64, seed: u64, chunk_size: u64) -> Result<Self> {
        let cfg = Self {
            sample_count,
            seed,
            chunk_size,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::Config("sample count must be at least 1".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Largest `|rho01|` accepted as zero when `rho00` vanishes.
pub(crate) const DEGENERATE_COHERENCE_TOL: f64 = 1e-12;
