//! Coarse-graining channels, macro-to-micro averaging assignments and the
//! effective dynamics they induce on small quantum systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`], [`eig`], [`state`], [`hamiltonian`]: dense complex linear
//!   algebra and quantum-state primitives.
//! * [`channel`]: the partial trace and the blurred-and-saturated detector,
//!   with Choi-matrix CPTP checks.
//! * [`assignment`]: closed-form averaging assignments and their Monte-Carlo
//!   estimators.
//! * [`dynamics`]: effective evolution `Λ ∘ U_t ∘ A_Λ`.
//! * [`discriminate`]: trace-distance trajectories and the Helstrom bound.

pub mod assignment;
pub mod channel;
pub mod discriminate;
pub mod dynamics;
pub mod eig;
pub mod error;
pub mod hamiltonian;
pub mod matrix;
pub mod random;
pub mod state;

pub use assignment::SamplerConfig;
pub use channel::{apply_channel, choi_matrix, verify_cptp, CoarseGrainingChannel};
pub use error::{Error, Result};
pub use hamiltonian::{unitary_at, HamiltonianSpec};
pub use matrix::{tensor, ComplexMatrix};
pub use state::{
    partial_trace_env, trace_distance, validate_density, DensityMatrix, PureStateVector, Tolerances,
};
