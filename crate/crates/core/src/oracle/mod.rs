//! Brute-force references for the closed forms: a direct integration of the
//! interaction-picture equations on the two-photon sector, and the full
//! non-Hermitian Hamiltonian on a truncated Fock space.

pub mod expm;
pub mod fock;
pub mod ode;
pub mod subspace;

pub use fock::{build_full_hamiltonian, FockOperators};
pub use ode::{
    integrate_interaction_picture, integrate_interaction_picture_at, OdeTrajectory, StepStats,
};
pub use subspace::{verify_subspace_invariance, with_default_frequencies, SubspaceReport};
