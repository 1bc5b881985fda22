use num_complex::Complex64;

use super::DEGENERATE_COHERENCE_TOL;
use crate::error::{Error, Result};
use crate::matrix::{tensor, ComplexMatrix};
use crate::state::DensityMatrix;

/// `rho_S ⊗ 1/d_E`
pub fn assign_partial_trace(rho_s: &DensityMatrix, dim_e: usize) -> Result<DensityMatrix> {
    if dim_e == 0 {
        return Err(Error::Dimension(
            "environment dimension must be positive".into(),
        ));
    }
    let env = ComplexMatrix::identity(dim_e).scale_real(1.0 / dim_e as f64);
    Ok(DensityMatrix::new_unchecked(tensor(rho_s.matrix(), &env)))
}

/// The excited-subspace coherence `|rho01|^2 / (2 rho00) - rho11 / 6`.
///
/// When `rho00` vanishes positivity forces `rho01 = 0` and the quotient is
/// taken as zero.
pub(crate) fn excited_coherence(rho: &DensityMatrix) -> Result<f64> {
    let r00 = rho.get(0, 0).re;
    let r01 = rho.get(0, 1);
    let r11 = rho.get(1, 1).re;
    let quotient = if r00 > 0.0 {
        r01.norm_sqr() / (2.0 * r00)
    } else if r01.norm() <= DEGENERATE_COHERENCE_TOL {
        0.0
    } else {
        return Err(Error::Infeasible(format!(
            "rho00 = {r00} but |rho01| = {}; the state is not positive",
            r01.norm()
        )));
    };
    Ok(quotient - r11 / 6.0)
}

pub(crate) fn ensure_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::Dimension(format!(
            "the detector assignment takes a qubit state, got dimension {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// Average of all two-qubit pure states whose blurred-and-saturated image is
/// `rho`:
///
/// ```text
/// [ r00        r01/√3  r01/√3  r01/√3 ]
/// [ r01*/√3    r11/3   q       q      ]
/// [ r01*/√3    q       r11/3   q      ]
/// [ r01*/√3    q       q       r11/3  ]     q = |r01|²/(2 r00) - r11/6
/// ```
pub fn assign_bns(rho: &DensityMatrix) -> Result<DensityMatrix> {
    ensure_qubit(rho)?;
    let r00 = rho.get(0, 0).re;
    let r01 = rho.get(0, 1);
    let r11 = rho.get(1, 1).re;
    let q = Complex64::new(excited_coherence(rho)?, 0.0);
    let diag = Complex64::new(r11 / 3.0, 0.0);
    let top = r01 / 3f64.sqrt();

    let m = ComplexMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 0) => Complex64::new(r00, 0.0),
        (0, _) => top,
        (_, 0) => top.conj(),
        _ if i == j => diag,
        _ => q,
    });
    Ok(DensityMatrix::new_unchecked(m))
}
