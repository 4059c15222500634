//! Analytic Hamiltonians, potentials and radial-profile structure.

pub mod catalog;
pub mod decompose;
pub mod hamiltonian;
pub mod potential;
pub mod profile;

pub use decompose::{
    build_pieces, decompose_profile, validate_hypotheses, DecompositionPlan, HypothesisClass,
    HypothesisReport, ProfilePiece,
};
pub use hamiltonian::{HamiltonianKind, HamiltonianSpec};
pub use potential::{potential_stats, PotentialKind, PotentialSpec, PotentialStats};
pub use profile::{Orientation, PiecewiseLinear, RadialProfile};
