use rayon::prelude::*;

use super::pgrid::PGrid;
use super::table::{EffectiveTable, Provenance};
use crate::error::{Error, Result};
use crate::grid::TorusGrid;
use crate::hamlib::{
    DecompositionPlan, HamiltonianKind, HamiltonianSpec, Orientation, PotentialKind,
    PotentialSpec, ProfilePiece,
};
use crate::hjsolver::{big_t_effective, BigTReport, SolverConfig};

fn check_dims(ham: &HamiltonianSpec, pgrid: &PGrid, grid: &TorusGrid) -> Result<()> {
    for got in [pgrid.dim(), grid.dim()] {
        if got != ham.dim {
            return Err(Error::DimensionMismatch { expected: ham.dim, got });
        }
    }
    Ok(())
}

fn assemble(pgrid: PGrid, reports: &[BigTReport], provenance: Provenance, map: impl Fn(f64) -> f64) -> Result<EffectiveTable> {
    EffectiveTable::new(
        pgrid,
        reports.iter().map(|r| map(r.value)).collect(),
        reports.iter().map(|r| r.converged).collect(),
        reports.iter().map(|r| r.residual).collect(),
        provenance,
    )
}

/// One big-T solve per p-node; the per-node reports are returned alongside.
pub fn sweep_detailed(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    pgrid: &PGrid,
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<(EffectiveTable, Vec<BigTReport>)> {
    check_dims(ham, pgrid, &grid)?;
    let reports = (0..pgrid.len())
        .into_par_iter()
        .map(|k| big_t_effective(ham, pot, &pgrid.node(k), grid, cfg))
        .collect::<Result<Vec<_>>>()?;
    let table = assemble(*pgrid, &reports, Provenance::Direct, |v| v)?;
    Ok((table, reports))
}

/// Direct big-T table of a coercive Hamiltonian.
pub fn sweep(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    pgrid: &PGrid,
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<EffectiveTable> {
    sweep_detailed(ham, pot, pgrid, grid, cfg).map(|(t, _)| t)
}

/// `r ↦ -φ_j(r)` with the orientation flipped.
pub fn dual_piece(piece: &ProfilePiece) -> ProfilePiece {
    ProfilePiece {
        index: piece.index,
        orientation: piece.orientation.flip(),
        native: piece.native,
        curve: piece.curve.negated(),
        extension_slopes: piece.extension_slopes,
    }
}

/// `max V - V` sampled on the nodes of `grid`, stored as a tabulated potential.
fn dual_potential(pot: &PotentialSpec, grid: &TorusGrid, max_v: f64) -> Result<PotentialSpec> {
    let values = pot.sample(grid).into_iter().map(|v| max_v - v).collect();
    PotentialSpec::new(
        PotentialKind::Tabulated {
            points: grid.points(),
            values,
        },
        1.0,
        pot.dim,
    )
}

/// Effective Hamiltonian of a decreasing piece `K(p) = φ_j(|p|)`.
///
/// With `G(q) = -φ_j(|q|)` and `W = max V - V`, a corrector `v` of `K - V`
/// gives the corrector `-v` of `G - W` at `-p`, so
/// `K̄(p) = -Ḡ_W(-p) - max V`.
pub fn sweep_quasiconcave(
    piece: &ProfilePiece,
    pot: &PotentialSpec,
    pgrid: &PGrid,
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<EffectiveTable> {
    if piece.orientation != Orientation::Decreasing {
        return Err(Error::WrongKind(format!(
            "piece {} is increasing; sweep it directly",
            piece.index
        )));
    }
    let dual = HamiltonianSpec::piece(dual_piece(piece), pot.dim)?;
    check_dims(&dual, pgrid, &grid)?;
    let max_v = pot.extrema(&grid).max;
    let w = dual_potential(pot, &grid, max_v)?;
    let reports = (0..pgrid.len())
        .into_par_iter()
        .map(|k| {
            let q: Vec<f64> = pgrid.node(k).iter().map(|x| -x).collect();
            big_t_effective(&dual, &w, &q, grid, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(*pgrid, &reports, Provenance::Duality, |g| -g - max_v)
}

/// Table of one piece, routed by orientation.
pub fn sweep_piece(
    piece: &ProfilePiece,
    pot: &PotentialSpec,
    pgrid: &PGrid,
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<EffectiveTable> {
    match piece.orientation {
        Orientation::Increasing => {
            let ham = HamiltonianSpec::piece(piece.clone(), pot.dim)?;
            sweep(&ham, pot, pgrid, grid, cfg)
        }
        Orientation::Decreasing => sweep_quasiconcave(piece, pot, pgrid, grid, cfg),
    }
}

/// Tables `Φ̄_0 … Φ̄_{2m}` of every piece of a decomposition.
pub fn sweep_plan(
    plan: &DecompositionPlan,
    pot: &PotentialSpec,
    pgrid: &PGrid,
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<Vec<EffectiveTable>> {
    plan.pieces
        .iter()
        .map(|piece| sweep_piece(piece, pot, pgrid, grid, cfg))
        .collect()
}

/// Number of midpoint-rule nodes used by [`oracle_1d_eikonal`].
pub const ORACLE_NODES: usize = 100_000;

/// Closed-form `H̄(p) = max{0, |p| - ∫(V - min V)} - min V` for `H(p) = |p|` in 1-D.
///
/// Solving `|p + v'| = c + V` for a periodic `v` forces `c = |p| - ∫V` when
/// that is nonnegative and `c = 0` (a flat part) otherwise; with `min V ≠ 0`
/// the value shifts by `-min V`.
pub fn oracle_1d_eikonal(ham: &HamiltonianSpec, pot: &PotentialSpec, p: f64) -> Result<f64> {
    let unit_slope = match &ham.kind {
        HamiltonianKind::Radial { profile } => {
            let c = profile.curve();
            c.radii().len() == 1 && c.values()[0] == 0.0 && c.tail_slope() == 1.0
        }
        _ => false,
    };
    if !unit_slope || ham.dim != 1 {
        return Err(Error::WrongKind("the 1-D oracle needs H(p) = |p| in one dimension".into()));
    }
    if pot.dim != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: pot.dim });
    }
    let min_v = pot
        .analytic_extrema()
        .map(|s| s.min)
        .unwrap_or_else(|| potential_floor(pot));
    let h = 1.0 / ORACLE_NODES as f64;
    let samples: Vec<f64> = (0..ORACLE_NODES)
        .map(|i| pot.eval_unchecked(&[(i as f64 + 0.5) * h]) - min_v)
        .collect();
    let integral = crate::grid::pairwise_sum(&samples) * h;
    Ok((p.abs() - integral).max(0.0) - min_v)
}

fn potential_floor(pot: &PotentialSpec) -> f64 {
    let grid = TorusGrid::new(1, ORACLE_NODES).expect("valid grid");
    crate::hamlib::potential_stats(pot, &grid).min
}
