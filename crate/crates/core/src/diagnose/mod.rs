//! Structural diagnostics on effective-Hamiltonian tables: evenness, grid
//! quasiconvexity, sublevel-set convexity, flat parts, the double-well
//! large-scale limit and discounted consistency.
//!
//! Unconverged nodes never enter a defect; their count is reported.

mod discount;
mod hull;
mod limits;
mod report;
mod structure;

pub use discount::{discounted_consistency, DiscountReport, MONOTONE_SLACK};
pub use limits::{compare_flimit, f_infinity, FLimitReport};
pub use report::{DiagnosticKind, DiagnosticReport, Witness};
pub use structure::{
    evenness_defect, flat_part, levelset_convexity, quasiconvexity_check, FlatPartReport,
    DEFAULT_TOLERANCE,
};
