//! Explicit finite-difference solver for `w_t + H(p + Dw) - V(x) = 0` on the
//! torus: Lax-Friedrichs numerical Hamiltonian, WENO3 one-sided gradients and
//! SSP-RK3 time stepping.

mod config;
mod evolve;
mod scheme;

pub use config::{InitialData, Reconstruction, SolverConfig};
pub use evolve::{
    big_t_effective, discounted_value, evolve_bigt, BigTReport, DiscountedReport, Discretization,
    Evolution, WindowEstimate,
};
pub use scheme::{lf_flux, one_sided_gradients, weno3_gradients, MIN_POINTS};
