//! Parametrization of the pure states compatible with a qubit state under the
//! blurred-and-saturated detector.
//!
//! Writing `|ψ> = Σ c_ij |ij>` with `c_ij = a_ij + i b_ij`, the constraints fix
//! `a00 = √rho00`, `b00 = 0` (global phase), the squared norm of the excited
//! amplitudes to `rho11`, and the sums `Σa = √3 Re(rho01)/a00` and
//! `Σb = -√3 Im(rho01)/a00` over the excited coordinates. Rotations of the
//! real and imaginary excited triples about the `(1,1,1)` axis preserve all
//! of these.

use num_complex::Complex64;

use super::closed_form::ensure_qubit;
use super::DEGENERATE_COHERENCE_TOL;
use crate::error::{Error, Result};
use crate::state::{DensityMatrix, PureStateVector};

type Vec3 = [f64; 3];

const AXIS: Vec3 = [
    0.577_350_269_189_625_8,
    0.577_350_269_189_625_8,
    0.577_350_269_189_625_8,
];

/// Orthonormal basis of the plane perpendicular to `(1,1,1)`.
fn plane_basis() -> (Vec3, Vec3) {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s6 = 1.0 / 6f64.sqrt();
    ([s2, -s2, 0.0], [s6, s6, -2.0 * s6])
}

/// Unit vector perpendicular to the axis, at `angle` from `(1,-1,0)/√2`.
fn perpendicular(angle: f64) -> Vec3 {
    let (e1, e2) = plane_basis();
    let (s, c) = angle.sin_cos();
    [
        c * e1[0] + s * e2[0],
        c * e1[1] + s * e2[1],
        c * e1[2] + s * e2[2],
    ]
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Rodrigues rotation of `v` by `angle` about the `(1,1,1)` axis.
pub(super) fn rotate_about_axis(v: &Vec3, angle: f64) -> Vec3 {
    let n = AXIS;
    let (s, c) = angle.sin_cos();
    let cross = [
        n[1] * v[2] - n[2] * v[1],
        n[2] * v[0] - n[0] * v[2],
        n[0] * v[1] - n[1] * v[0],
    ];
    let along = dot(&n, v) * (1.0 - c);
    [
        v[0] * c + cross[0] * s + n[0] * along,
        v[1] * c + cross[1] * s + n[1] * along,
        v[2] * c + cross[2] * s + n[2] * along,
    ]
}

/// A compatible state from which the whole rotation orbit is generated.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSeed {
    pub a00: f64,
    /// `a01 + a10 + a11`
    pub s_a: f64,
    /// Length of the real excited component perpendicular to the axis.
    pub r_a: f64,
    /// `b01 + b10 + b11`
    pub s_b: f64,
    pub r_b: f64,
    perp_a: Vec3,
    perp_b: Vec3,
    base_vector: PureStateVector,
}

impl OrbitSeed {
    /// A seed with chosen perpendicular directions (angles within the plane
    /// normal to `(1,1,1)`, measured from `(1,-1,0)/√2`) and a chosen split of
    /// the perpendicular norm: `r_a = r cos(split)`, `r_b = r sin(split)`.
    pub fn with_geometry(
        rho: &DensityMatrix,
        angle_a: f64,
        angle_b: f64,
        split: f64,
    ) -> Result<Self> {
        ensure_qubit(rho)?;
        let r00 = rho.get(0, 0).re;
        let r01 = rho.get(0, 1);
        let r11 = rho.get(1, 1).re;

        let a00 = r00.max(0.0).sqrt();
        let (s_a, s_b, coherence_weight) = if a00 > 0.0 {
            let k = 3f64.sqrt() / a00;
            (k * r01.re, -k * r01.im, r01.norm_sqr() / r00)
        } else if r01.norm() <= DEGENERATE_COHERENCE_TOL {
            (0.0, 0.0, 0.0)
        } else {
            return Err(Error::Infeasible(format!(
                "rho00 = {r00} but |rho01| = {}; no compatible pure state",
                r01.norm()
            )));
        };

        let radicand = r11 - coherence_weight;
        if radicand < -1e-12 {
            return Err(Error::Infeasible(format!(
                "rho11 - |rho01|^2/rho00 = {radicand} is negative; the state is not positive"
            )));
        }
        let r = radicand.max(0.0).sqrt();
        let (sin_split, cos_split) = split.sin_cos();
        let mut seed = Self {
            a00,
            s_a,
            r_a: r * cos_split,
            s_b,
            r_b: r * sin_split,
            perp_a: perpendicular(angle_a),
            perp_b: perpendicular(angle_b),
            base_vector: PureStateVector::new(vec![Complex64::new(1.0, 0.0)])?,
        };
        seed.base_vector = seed.state_for(0.0, 0.0)?;
        Ok(seed)
    }

    fn real_excited(&self) -> Vec3 {
        let m = self.s_a / 3.0;
        [
            m + self.r_a * self.perp_a[0],
            m + self.r_a * self.perp_a[1],
            m + self.r_a * self.perp_a[2],
        ]
    }

    fn imag_excited(&self) -> Vec3 {
        let m = self.s_b / 3.0;
        [
            m + self.r_b * self.perp_b[0],
            m + self.r_b * self.perp_b[1],
            m + self.r_b * self.perp_b[2],
        ]
    }

    /// The real coordinate vector `(a00, a01, a10, a11, b00, b01, b10, b11)`.
    pub fn coordinates(&self) -> [f64; 8] {
        let a = self.real_excited();
        let b = self.imag_excited();
        [self.a00, a[0], a[1], a[2], 0.0, b[0], b[1], b[2]]
    }

    pub fn base_vector(&self) -> &PureStateVector {
        &self.base_vector
    }

    fn state_for(&self, theta: f64, phi: f64) -> Result<PureStateVector> {
        let a = rotate_about_axis(&self.real_excited(), theta);
        let b = rotate_about_axis(&self.imag_excited(), phi);
        let amps = vec![
            Complex64::new(self.a00, 0.0),
            Complex64::new(a[0], b[0]),
            Complex64::new(a[1], b[1]),
            Complex64::new(a[2], b[2]),
        ];
        Ok(PureStateVector::new(amps)?.canonical())
    }
}

/// Seed with `u = (1,-1,0)/√2` for the real excited part and all of the
/// perpendicular norm in the real part (`r_b = 0`).
pub fn canonical_orbit_seed(rho: &DensityMatrix) -> Result<OrbitSeed> {
    OrbitSeed::with_geometry(rho, 0.0, 0.0, 0.0)
}

/// Applies the rotation by `theta` (real excited triple) and `phi`
/// (imaginary excited triple) about `(1,1,1)` to the seed.
pub fn orbit_state(seed: &OrbitSeed, theta: f64, phi: f64) -> PureStateVector {
    seed.state_for(theta, phi)
        .expect("rotations preserve the norm of a normalized seed")
}
