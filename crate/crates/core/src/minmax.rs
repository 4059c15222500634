//! Min-max composition of piece tables into the effective Hamiltonian of the
//! full problem.
//!
//! All operations act pointwise on tables sharing one p-lattice. A node is
//! converged in the output only if it is converged in every input.

use crate::effective::{EffectiveTable, Provenance};
use crate::error::{Error, Result};
use crate::hamlib::{DecompositionPlan, PotentialStats};

/// `max{H̄₁, H̄₂, 0}` for a quasiconvex `H₁` and quasiconcave `H₂` with
/// `min H = 0` and `min V = 0`.
pub fn compose_basic(h1: &EffectiveTable, h2: &EffectiveTable) -> Result<EffectiveTable> {
    EffectiveTable::combine(&[h1, h2], Provenance::Composed, |_, v| v[0].max(v[1]).max(0.0))
}

/// Runs `K̄_{k-1} = min{H̄_{k-1}, Φ̄_{2k-1}, φ(s_{2k-1}) - max V}` and
/// `H̄_k = max{K̄_{k-1}, Φ̄_{2k}, φ(s_{2k}) - min V}` from `H̄_0 = Φ̄_0` up to `k = m`.
pub fn compose_inductive(
    plan: &DecompositionPlan,
    piece_tables: &[EffectiveTable],
    stats: &PotentialStats,
) -> Result<EffectiveTable> {
    let expected = 2 * plan.m + 1;
    if piece_tables.len() != expected {
        return Err(Error::PieceCount {
            expected,
            got: piece_tables.len(),
        });
    }
    let peaks = plan.constants_max(stats.max);
    let valleys = plan.constants_min(stats.min);
    let refs: Vec<&EffectiveTable> = piece_tables.iter().collect();
    let mut out = EffectiveTable::combine(&refs, Provenance::Composed, |_, phi| {
        let mut h = phi[0];
        for k in 1..=plan.m {
            let lower = h.min(phi[2 * k - 1]).min(peaks[k - 1]);
            h = lower.max(phi[2 * k]).max(valleys[k - 1]);
        }
        h
    })?;
    out.provenance = Provenance::Composed;
    Ok(out)
}

/// `max{H̄₁, base - min V}` when the potential oscillates at least as much as
/// `H` rises above `base` inside the well, i.e. `osc V ≥ max_U H - base`.
///
/// `base` is the value of `H` on the boundary of the well (`0` under the
/// normalization `min H = 0`, `φ(s_{2m})` for a multi-well radial profile,
/// with `h1` then the table of the outermost increasing piece).
pub fn large_oscillation_formula(
    h1: &EffectiveTable,
    stats: &PotentialStats,
    max_h_on_u: f64,
    base: f64,
) -> Result<EffectiveTable> {
    if stats.osc < max_h_on_u - base {
        return Err(Error::Hypothesis(format!(
            "osc V = {} is below max_U H - {base} = {}",
            stats.osc,
            max_h_on_u - base
        )));
    }
    let floor = base - stats.min;
    let mut out = EffectiveTable::combine(&[h1], Provenance::Composed, |_, v| v[0].max(floor))?;
    out.quasiconvex_by_theorem = true;
    Ok(out)
}

/// `min{H̄₁, H̄₂}` in one dimension, valid while `max V - min V < M₁ - m₁`.
///
/// `h1` is the table of `max{H, m₁}` and `h2` that of the quasiconvex
/// `H` on `[0, s₁]`, `max{M₁, H}` beyond.
pub fn conditional_decomposition_1d(
    h1: &EffectiveTable,
    h2: &EffectiveTable,
    stats: &PotentialStats,
    peak: f64,
    valley: f64,
) -> Result<EffectiveTable> {
    if h1.pgrid.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: h1.pgrid.dim(),
        });
    }
    if stats.osc >= peak - valley {
        return Err(Error::Hypothesis(format!(
            "max V - min V = {} is not below M1 - m1 = {}",
            stats.osc,
            peak - valley
        )));
    }
    EffectiveTable::combine(&[h1, h2], Provenance::Composed, |_, v| v[0].min(v[1]))
}
