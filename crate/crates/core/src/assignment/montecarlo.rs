//! Monte-Carlo estimators of the averaging assignments.
//!
//! Samples are grouped into chunks of `chunk_size` consecutive indices which
//! run in parallel. Every chunk accumulates with compensated summation and the
//! chunk totals are merged in index order, so the estimate does not depend on
//! the thread count and changes only at roundoff level with the chunk size.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::orbit::{canonical_orbit_seed, OrbitSeed};
use super::SamplerConfig;
use crate::eig::herm_eig;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::random::{haar_unitary, sample_rng, uniform_angle};
use crate::state::DensityMatrix;

/// Sample mean of projectors together with its largest per-entry standard
/// error.
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub mean: DensityMatrix,
    /// Maximum over the real and imaginary parts of all entries of the
    /// standard error of the mean.
    pub max_std_error: f64,
    pub samples: u64,
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// First and second moments of the real and imaginary parts of every entry of
/// `|v><v|`.
#[derive(Debug, Clone)]
struct ProjectorAccumulator {
    dim: usize,
    first: Vec<CompensatedSum>,
    second: Vec<CompensatedSum>,
}

impl ProjectorAccumulator {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            first: vec![CompensatedSum::default(); 2 * dim * dim],
            second: vec![CompensatedSum::default(); 2 * dim * dim],
        }
    }

    fn push(&mut self, v: &[Complex64]) {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let z = v[i] * v[j].conj();
                let k = 2 * (i * n + j);
                self.first[k].add(z.re);
                self.first[k + 1].add(z.im);
                self.second[k].add(z.re * z.re);
                self.second[k + 1].add(z.im * z.im);
            }
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        for (a, b) in self.first.iter_mut().zip(&other.first) {
            a.merge(b);
        }
        for (a, b) in self.second.iter_mut().zip(&other.second) {
            a.merge(b);
        }
        self
    }

    fn finish(&self, samples: u64) -> McEstimate {
        let n = self.dim;
        let count = samples as f64;
        let mean = ComplexMatrix::from_fn(n, n, |i, j| {
            let k = 2 * (i * n + j);
            Complex64::new(
                self.first[k].value() / count,
                self.first[k + 1].value() / count,
            )
        });
        let max_std_error = self
            .first
            .iter()
            .zip(&self.second)
            .map(|(s1, s2)| {
                let m = s1.value() / count;
                let var = (s2.value() / count - m * m).max(0.0);
                if samples > 1 {
                    (var / (count - 1.0)).sqrt()
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        McEstimate {
            mean: DensityMatrix::new_unchecked(mean),
            max_std_error,
            samples,
        }
    }
}

/// Averages `|v_k><v_k|` over `k < cfg.sample_count`, where `v_k` is drawn by
/// `sample` from generator stream `(cfg.seed, k)`.
fn projector_mean<F>(dim: usize, cfg: &SamplerConfig, sample: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Vec<Complex64> + Sync,
{
    cfg.validate()?;
    let n = cfg.sample_count;
    let chunk = cfg.chunk_size;
    let chunks = n.div_ceil(chunk);
    let partials: Vec<ProjectorAccumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = ProjectorAccumulator::new(dim);
            for k in c * chunk..((c + 1) * chunk).min(n) {
                let mut rng = sample_rng(cfg.seed, k);
                acc.push(&sample(&mut rng));
            }
            acc
        })
        .collect();
    let total = partials
        .iter()
        .fold(ProjectorAccumulator::new(dim), |acc, p| acc.merge(p));
    Ok(total.finish(n))
}

/// Orbit average with the rotation angles drawn uniformly from `[0, 2π)^2`.
pub fn mc_estimate_orbit(seed: &OrbitSeed, cfg: &SamplerConfig) -> Result<McEstimate> {
    let coords = seed.coordinates();
    let real = [coords[1], coords[2], coords[3]];
    let imag = [coords[5], coords[6], coords[7]];
    let a00 = coords[0];
    projector_mean(4, cfg, |rng| {
        let theta = uniform_angle(rng);
        let phi = uniform_angle(rng);
        let a = super::orbit::rotate_about_axis(&real, theta);
        let b = super::orbit::rotate_about_axis(&imag, phi);
        vec![
            Complex64::new(a00, 0.0),
            Complex64::new(a[0], b[0]),
            Complex64::new(a[1], b[1]),
            Complex64::new(a[2], b[2]),
        ]
    })
}

pub fn mc_average_orbit(seed: &OrbitSeed, cfg: &SamplerConfig) -> Result<DensityMatrix> {
    mc_estimate_orbit(seed, cfg).map(|e| e.mean)
}

/// Monte-Carlo estimate of the detector assignment from the canonical seed.
pub fn mc_estimate_bns(rho: &DensityMatrix, cfg: &SamplerConfig) -> Result<McEstimate> {
    let seed = canonical_orbit_seed(rho)?;
    mc_estimate_orbit(&seed, cfg)
}

pub fn mc_average_bns(rho: &DensityMatrix, cfg: &SamplerConfig) -> Result<DensityMatrix> {
    mc_estimate_bns(rho, cfg).map(|e| e.mean)
}

/// Eigenvalues below this are treated as zero when counting the rank.
const RANK_TOL: f64 = 1e-12;

/// `Σ_i √λ_i |v_i>|i>` over the nonzero part of the spectrum of `rho_s`.
pub fn purification(rho_s: &DensityMatrix, dim_e: usize) -> Result<Vec<Complex64>> {
    let ds = rho_s.dim();
    let eig = herm_eig(rho_s.matrix())?;
    // descending order so the largest weights come first
    let support: Vec<usize> = (0..ds)
        .rev()
        .filter(|&k| eig.values[k] > RANK_TOL)
        .collect();
    if support.len() > dim_e {
        return Err(Error::PurificationImpossible {
            rank: support.len(),
            dim_e,
        });
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); ds * dim_e];
    for (e, &k) in support.iter().enumerate() {
        let w = eig.values[k].sqrt();
        for s in 0..ds {
            psi[s * dim_e + e] = eig.vectors[(s, k)] * w;
        }
    }
    Ok(psi)
}

/// Average of `(1 ⊗ U) ψ (1 ⊗ U)†` over Haar-random environment unitaries
/// `U`, for a fixed purification `ψ` of `rho_s`.
pub fn mc_estimate_partial_trace(
    rho_s: &DensityMatrix,
    dim_e: usize,
    cfg: &SamplerConfig,
) -> Result<McEstimate> {
    if dim_e == 0 {
        return Err(Error::Dimension(
            "environment dimension must be positive".into(),
        ));
    }
    let psi = purification(rho_s, dim_e)?;
    let ds = rho_s.dim();
    projector_mean(ds * dim_e, cfg, |rng| {
        let u = haar_unitary(rng, dim_e);
        let mut out = vec![Complex64::new(0.0, 0.0); ds * dim_e];
        for s in 0..ds {
            let block = &psi[s * dim_e..(s + 1) * dim_e];
            for e in 0..dim_e {
                out[s * dim_e + e] = u.row(e).iter().zip(block).map(|(a, b)| a * b).sum();
            }
        }
        out
    })
}

pub fn mc_average_partial_trace(
    rho_s: &DensityMatrix,
    dim_e: usize,
    cfg: &SamplerConfig,
) -> Result<DensityMatrix> {
    mc_estimate_partial_trace(rho_s, dim_e, cfg).map(|e| e.mean)
}
