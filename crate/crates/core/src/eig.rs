//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-12;

/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// fraction of the input's Frobenius norm.
const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `h = V diag(values) V†` with ascending `values`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(diag) V†` for a complex-valued spectral function.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let fv: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fv[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.spectral_map(|l| Complex64::new(l, 0.0))
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Each Jacobi step first removes the phase of `a_pq` with a diagonal
/// unitary and then applies the real symmetric rotation that zeroes it.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = h.ensure_square()?;
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }

    // Symmetrize so the iteration starts from an exactly Hermitian matrix.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(h[(i, i)].re, 0.0)
        } else {
            (h[(i, j)] + h[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = scale == 0.0 || n < 2;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= OFF_DIAGONAL_TOL * scale;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn herm_eigvals(h: &ComplexMatrix) -> Result<Vec<f64>> {
    herm_eig(h).map(|e| e.values)
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let abs_b = b.norm();
    if abs_b < f64::MIN_POSITIVE {
        return;
    }
    let phase = b / abs_b;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * abs_b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // W = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let w00 = Complex64::new(c, 0.0);
    let w01 = Complex64::new(s, 0.0);
    let w10 = -phase.conj() * s;
    let w11 = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w00 + akq * w10;
        a[(k, q)] = akp * w01 + akq * w11;

        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w00 + vkq * w10;
        v[(k, q)] = vkp * w01 + vkq * w11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w00.conj() * apk + w10.conj() * aqk;
        a[(q, k)] = w01.conj() * apk + w11.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&g + &g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn pauli_spectra() {
        for m in [pauli::z(), pauli::y(), pauli::x()] {
            let e = herm_eig(&m).unwrap();
            assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn application_difference_matrix() {
        // rho(0) - chi(0) = [[0.3, -0.4], [-0.4, -0.3]]; 2x2 closed form gives
        // lambda = +-sqrt(a^2 + |b|^2) = +-0.5.
        let d = ComplexMatrix::from_real_rows(&[[0.3, -0.4], [-0.4, -0.3]]);
        let closed = (0.3f64.powi(2) + 0.4f64.powi(2)).sqrt();
        let e = herm_eig(&d).unwrap();
        assert_abs_diff_eq!(e.values[0], -closed, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], closed, epsilon = 1e-14);
        assert_abs_diff_eq!(closed, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            herm_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn degenerate_and_zero_inputs() {
        let e = herm_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        let e = herm_eig(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert!(e.values.iter().all(|&l| (l - 0.25).abs() < 1e-15));
    }

    #[test]
    fn reconstruction_on_random_hermitian_4x4() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let h = random_hermitian(&mut rng, 4);
            let e = herm_eig(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) <= 1e-12);
            assert!(e.vectors.unitarity_defect() <= 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn larger_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 8, 16] {
            let h = random_hermitian(&mut rng, n);
            let e = herm_eig(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) <= 1e-12, "n = {n}");
            // trace is the eigenvalue sum
            assert_abs_diff_eq!(e.values.iter().sum::<f64>(), h.trace().re, epsilon = 1e-12);
        }
    }
}
