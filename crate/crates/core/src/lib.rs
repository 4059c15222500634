//! Effective Hamiltonians for periodic homogenization of Hamilton-Jacobi
//! equations `u_t + H(Du) - V(x/ε) = 0` with nonconvex `H`.
//!
//! The crate computes `H̄(p)` numerically with a Lax-Friedrichs big-T
//! solver, rebuilds it from monotone pieces by min-max composition, and
//! runs shape diagnostics (evenness, quasiconvexity, flat parts, limits)
//! on the resulting tables.

pub mod error;
pub mod grid;
pub mod hamlib;
pub mod hjsolver;
pub mod effective;
pub mod minmax;
pub mod diagnose;

pub use error::{Error, Result};
pub use grid::{Field, TorusGrid};
