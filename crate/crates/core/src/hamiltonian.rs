//! Hermitian generators and the unitary propagators they induce.
//!
//! Units are hbar = 1 and times are the dimensionless product `omega * t`.

use num_complex::Complex64;

use crate::eig::{herm_eig, HermitianEigen};
use crate::error::Result;
use crate::matrix::{pauli, tensor, ComplexMatrix};

#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    matrix: ComplexMatrix,
    label: String,
    eigen: HermitianEigen,
}

impl HamiltonianSpec {
    /// Fails when the matrix is not Hermitian within 1e-12.
    pub fn new(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let eigen = herm_eig(&matrix)?;
        Ok(Self {
            matrix,
            label: label.into(),
            eigen,
        })
    }

    /// `1 ⊗ σ_y` on two qubits.
    pub fn local_y() -> Self {
        Self::new(tensor(&ComplexMatrix::identity(2), &pauli::y()), "1⊗σy")
            .expect("Pauli generators are Hermitian")
    }

    /// `1 ⊗ σ_y + σ_y ⊗ 1` on two qubits.
    pub fn global_y() -> Self {
        let id = ComplexMatrix::identity(2);
        let y = pauli::y();
        Self::new(&tensor(&id, &y) + &tensor(&y, &id), "σy⊗1 + 1⊗σy")
            .expect("Pauli generators are Hermitian")
    }

    /// Named presets accepted on the command line.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "local-y" => Some(Self::local_y()),
            "global-y" => Some(Self::global_y()),
            _ => None,
        }
    }

    /// `H_S ⊗ 1 + 1 ⊗ H_E`
    pub fn local_sum(h_s: &ComplexMatrix, h_e: &ComplexMatrix) -> Result<Self> {
        let m = &tensor(h_s, &ComplexMatrix::identity(h_e.rows()))
            + &tensor(&ComplexMatrix::identity(h_s.rows()), h_e);
        Self::new(m, "H_S⊗1 + 1⊗H_E")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// `exp(-i H t)` from the cached spectral decomposition.
    pub fn unitary_at(&self, t: f64) -> ComplexMatrix {
        self.eigen
            .spectral_map(|l| Complex64::from_polar(1.0, -l * t))
    }
}

/// `exp(-i H t)` for a Hermitian matrix.
pub fn unitary_at(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(herm_eig(h)?.spectral_map(|l| Complex64::from_polar(1.0, -l * t)))
}
