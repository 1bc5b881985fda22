//! Coarse-graining channels and their Choi-matrix verification.
//!
//! Apart from the partial trace, channels are stored as basis-action tables:
//! the image `Λ[|i><j|]` of every matrix unit of the input space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eig::herm_eig;
use crate::error::{Error, Result};
use crate::matrix::{tensor, ComplexMatrix, ZERO};
use crate::state::{partial_trace_matrix, DensityMatrix};

/// Images of the `dim_in^2` matrix units, indexed by `i * dim_in + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTable {
    dim_in: usize,
    dim_out: usize,
    outputs: Vec<ComplexMatrix>,
}

impl BasisTable {
    pub fn new(dim_in: usize, dim_out: usize, outputs: Vec<ComplexMatrix>) -> Result<Self> {
        if outputs.len() != dim_in * dim_in {
            return Err(Error::Dimension(format!(
                "a table for input dimension {dim_in} needs {} entries, got {}",
                dim_in * dim_in,
                outputs.len()
            )));
        }
        if let Some(bad) = outputs
            .iter()
            .find(|m| m.rows() != dim_out || m.cols() != dim_out)
        {
            return Err(Error::Dimension(format!(
                "table entry is {}x{}, expected {dim_out}x{dim_out}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            outputs,
        })
    }

    pub fn from_fn(
        dim_in: usize,
        dim_out: usize,
        f: impl Fn(usize, usize) -> ComplexMatrix,
    ) -> Result<Self> {
        let outputs = (0..dim_in * dim_in)
            .map(|k| f(k / dim_in, k % dim_in))
            .collect();
        Self::new(dim_in, dim_out, outputs)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `Λ[|i><j|]`
    pub fn get(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.outputs[i * self.dim_in + j]
    }

    pub fn outputs(&self) -> &[ComplexMatrix] {
        &self.outputs
    }

    fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for i in 0..self.dim_in {
            for j in 0..self.dim_in {
                let c = x[(i, j)];
                if c == ZERO {
                    continue;
                }
                out = &out + &self.get(i, j).scale(c);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    PartialTraceEnv { dim_s: usize, dim_e: usize },
    BlurredSaturated(BasisTable),
    Custom(BasisTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseGrainingChannel {
    dim_in: usize,
    dim_out: usize,
    kind: ChannelKind,
}

/// The blurred-and-saturated detector table on two qubits, basis order
/// `|00>, |01>, |10>, |11>`. The ground state `|00>` maps to `|0>`, the three
/// excited states to `|1>`, ground/excited coherences pick up `1/sqrt(3)`, and
/// coherences inside the excited subspace are erased.
fn bns_table() -> BasisTable {
    let inv_sqrt3 = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    BasisTable::from_fn(4, 2, |i, j| match (i, j) {
        (0, 0) => ComplexMatrix::unit(2, 0, 0),
        (0, _) => ComplexMatrix::unit(2, 0, 1).scale(inv_sqrt3),
        (_, 0) => ComplexMatrix::unit(2, 1, 0).scale(inv_sqrt3),
        (i, j) if i == j => ComplexMatrix::unit(2, 1, 1),
        _ => ComplexMatrix::zeros(2, 2),
    })
    .expect("static table is well formed")
}

impl CoarseGrainingChannel {
    pub fn partial_trace(dim_s: usize, dim_e: usize) -> Result<Self> {
        if dim_s == 0 || dim_e == 0 {
            return Err(Error::Dimension(
                "subsystem dimensions must be positive".into(),
            ));
        }
        Ok(Self {
            dim_in: dim_s * dim_e,
            dim_out: dim_s,
            kind: ChannelKind::PartialTraceEnv { dim_s, dim_e },
        })
    }

    pub fn bns() -> Self {
        Self {
            dim_in: 4,
            dim_out: 2,
            kind: ChannelKind::BlurredSaturated(bns_table()),
        }
    }

    /// An arbitrary linear map given by its basis-action table. Not checked
    /// for complete positivity or trace preservation; see [`verify_cptp`].
    pub fn custom(table: BasisTable) -> Result<Self> {
        if table.dim_out > table.dim_in {
            return Err(Error::Dimension(format!(
                "output dimension {} exceeds input dimension {}",
                table.dim_out, table.dim_in
            )));
        }
        Ok(Self {
            dim_in: table.dim_in,
            dim_out: table.dim_out,
            kind: ChannelKind::Custom(table),
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ChannelKind::PartialTraceEnv { .. } => "partial-trace",
            ChannelKind::BlurredSaturated(_) => "bns",
            ChannelKind::Custom(_) => "custom",
        }
    }

    /// Applies the channel to any square operator of the input dimension.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = x.ensure_square()?;
        if n != self.dim_in {
            return Err(Error::Dimension(format!(
                "{} channel expects dimension {}, got {n}",
                self.name(),
                self.dim_in
            )));
        }
        Ok(match &self.kind {
            ChannelKind::PartialTraceEnv { dim_s, dim_e } => {
                partial_trace_matrix(x, *dim_s, *dim_e)?
            }
            ChannelKind::BlurredSaturated(t) | ChannelKind::Custom(t) => t.apply(x),
        })
    }

    /// Image of a state. The result is only guaranteed to be a state when the
    /// channel is CPTP.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.apply(rho.matrix()).map(DensityMatrix::new_unchecked)
    }

    /// `Λ[|i><j|]`
    pub fn image_of_unit(&self, i: usize, j: usize) -> ComplexMatrix {
        match &self.kind {
            ChannelKind::BlurredSaturated(t) | ChannelKind::Custom(t) => t.get(i, j).clone(),
            ChannelKind::PartialTraceEnv { .. } => self
                .apply(&ComplexMatrix::unit(self.dim_in, i, j))
                .expect("unit has the input dimension"),
        }
    }
}

/// Free-function form of [`CoarseGrainingChannel::apply`].
pub fn apply_channel(ch: &CoarseGrainingChannel, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    ch.apply(x)
}

/// `Σ_ij |i><j| ⊗ Λ[|i><j|]`
pub fn choi_matrix(ch: &CoarseGrainingChannel) -> ComplexMatrix {
    let (din, dout) = (ch.dim_in, ch.dim_out);
    let mut choi = ComplexMatrix::zeros(din * dout, din * dout);
    for i in 0..din {
        for j in 0..din {
            let block = tensor(&ComplexMatrix::unit(din, i, j), &ch.image_of_unit(i, j));
            choi = &choi + &block;
        }
    }
    choi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CptpTolerances {
    pub trace_preservation: f64,
    /// Smallest Choi eigenvalue still accepted as positive.
    pub cp_floor: f64,
}

impl Default for CptpTolerances {
    fn default() -> Self {
        Self {
            trace_preservation: 1e-12,
            cp_floor: -1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CptpReport {
    /// `max_ij |tr Λ[|i><j|] - δ_ij|`
    pub tp_defect: f64,
    pub choi_min_eigenvalue: f64,
    pub choi_hermiticity_defect: f64,
    pub passed: bool,
}

pub fn verify_cptp(ch: &CoarseGrainingChannel, tol: &CptpTolerances) -> Result<CptpReport> {
    let mut tp_defect = 0.0f64;
    for i in 0..ch.dim_in {
        for j in 0..ch.dim_in {
            let expected = if i == j { 1.0 } else { 0.0 };
            let tr = ch.image_of_unit(i, j).trace();
            tp_defect = tp_defect.max((tr - Complex64::new(expected, 0.0)).norm());
        }
    }
    let choi = choi_matrix(ch);
    let choi_hermiticity_defect = choi.hermiticity_defect();
    // A non-Hermitian Choi matrix means the map is not Hermiticity preserving,
    // hence not CP; the spectrum of its Hermitian part is still reported.
    let hermitian_part = (&choi + &choi.adjoint()).scale_real(0.5);
    let choi_min_eigenvalue = herm_eig(&hermitian_part)?.min_value();
    let passed = tp_defect <= tol.trace_preservation
        && choi_hermiticity_defect <= 1e-12
        && choi_min_eigenvalue >= tol.cp_floor;
    Ok(CptpReport {
        tp_defect,
        choi_min_eigenvalue,
        choi_hermiticity_defect,
        passed,
    })
}
