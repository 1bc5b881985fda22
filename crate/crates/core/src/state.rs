//! Density matrices, pure states and the state-level operations built on
//! them: validation, partial trace and trace distance.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eig::herm_eig;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

/// Acceptance bounds for [`validate_density`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub trace: f64,
    /// Smallest eigenvalue still accepted as positive semidefinite.
    pub psd_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            trace: 1e-12,
            psd_floor: -1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity defect {:e}, trace defect {:e}, min eigenvalue {:e} ({})",
            self.hermiticity_defect,
            self.trace_defect,
            self.min_eigenvalue,
            if self.passed { "pass" } else { "fail" }
        )
    }
}

/// Checks the three density-matrix conditions. The spectrum is taken from the
/// Hermitian part so that the report stays meaningful for non-Hermitian input.
pub fn validate_density(m: &ComplexMatrix, tol: &Tolerances) -> Result<ValidationReport> {
    m.ensure_square()?;
    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let hermitian_part = (m + &m.adjoint()).scale_real(0.5);
    let min_eigenvalue = herm_eig(&hermitian_part)?.min_value();
    let passed = hermiticity_defect <= tol.hermiticity
        && trace_defect <= tol.trace
        && min_eigenvalue >= tol.psd_floor;
    Ok(ValidationReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        passed,
    })
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let report = validate_density(&m, tol)?;
        if report.passed {
            Ok(Self(m))
        } else {
            Err(Error::InvalidState(report))
        }
    }

    /// Wraps a matrix without checking it. Used for results of maps that
    /// preserve the invariants and for deliberately unvalidated input.
    pub fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// Qubit state from its populations and coherence: `[[p0, c], [c*, 1 - p0]]`.
    pub fn qubit(p0: f64, coherence: Complex64) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(&[
            [Complex64::new(p0, 0.0), coherence],
            [coherence.conj(), Complex64::new(1.0 - p0, 0.0)],
        ]))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// `|k><k|`
    pub fn basis(dim: usize, k: usize) -> Self {
        Self(ComplexMatrix::unit(dim, k, k))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        validate_density(&self.0, tol).expect("density matrices are square")
    }

    /// Convex combination `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &Self, alpha: f64) -> Result<Self> {
        ensure_same_dim(self, other)?;
        Ok(Self(
            &self.0.scale_real(alpha) + &other.0.scale_real(1.0 - alpha),
        ))
    }

    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        Ok(Self(self.0.conjugate_by(u)?))
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.0)
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

pub const NORM_TOL: f64 = 1e-12;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: Vec<Complex64>,
    canonical_phase: bool,
}

impl PureStateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::Config(format!(
                "state vector is not normalized (<v|v> = {norm_sqr})"
            )));
        }
        Ok(Self {
            amplitudes,
            canonical_phase: false,
        })
    }

    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Config("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Multiplies by the global phase that makes the first nonzero amplitude
    /// real and non-negative.
    pub fn canonical(mut self) -> Self {
        if let Some(first) = self.amplitudes.iter().find(|z| z.norm() > 0.0) {
            let phase = first.conj() / first.norm();
            for z in &mut self.amplitudes {
                *z *= phase;
            }
            // force an exact zero imaginary part on the reference amplitude
            if let Some(first) = self.amplitudes.iter_mut().find(|z| z.norm() > 0.0) {
                *first = Complex64::new(first.norm(), 0.0);
            }
        }
        self.canonical_phase = true;
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_phase
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }
}

fn ensure_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "states of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `tr_E` on an arbitrary operator of dimension `dim_s * dim_e`.
pub fn partial_trace_matrix(
    x: &ComplexMatrix,
    dim_s: usize,
    dim_e: usize,
) -> Result<ComplexMatrix> {
    let n = x.ensure_square()?;
    if n != dim_s * dim_e {
        return Err(Error::Dimension(format!(
            "operator of dimension {n} cannot be split as {dim_s} x {dim_e}"
        )));
    }
    Ok(ComplexMatrix::from_fn(dim_s, dim_s, |i, j| {
        (0..dim_e).fold(ZERO, |acc, k| acc + x[(i * dim_e + k, j * dim_e + k)])
    }))
}

/// Reduced state of the first factor: `(rho_S)_ij = sum_k rho_SE[(i,k),(j,k)]`.
pub fn partial_trace_env(
    rho_se: &DensityMatrix,
    dim_s: usize,
    dim_e: usize,
) -> Result<DensityMatrix> {
    partial_trace_matrix(rho_se.matrix(), dim_s, dim_e).map(DensityMatrix)
}

/// `tr|a - b| / 2`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(a, b)?;
    let diff = a.matrix() - b.matrix();
    let spectrum = herm_eig(&diff)?.values;
    Ok(0.5 * spectrum.iter().map(|l| l.abs()).sum::<f64>())
}
