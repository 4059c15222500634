//! Large-scale limit of the double-well Hamiltonian under a product potential.

use serde::Serialize;

use super::report::{DiagnosticKind, DiagnosticReport, Witness};
use crate::effective::EffectiveTable;
use crate::error::{Error, Result};
use crate::hamlib::{HamiltonianKind, HamiltonianSpec, PotentialKind, PotentialSpec};

/// `F∞(p) = max{|p₂|, min{|p₁ - 1|, |p₁ + 1|}}`.
pub fn f_infinity(p: &[f64]) -> Result<f64> {
    if p.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: p.len() });
    }
    Ok(p[1].abs().max((p[0] - 1.0).abs().min((p[0] + 1.0).abs())))
}

/// Result of [`compare_flimit`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FLimitReport {
    pub report: DiagnosticReport,
    pub scales: Vec<f64>,
    /// `max |H̄(·, S) - F∞|` over converged nodes, per scale.
    pub distances: Vec<f64>,
    /// `min (H̄(·, S) - F∞)` over converged nodes, per scale.
    pub one_sided_minima: Vec<f64>,
    pub strictly_decreasing: bool,
}

/// Compares tables of `min{|p - e₁|, |p + e₁|} - S(1 + sin 2πx₁)(1 + sin 2πx₂)`
/// at increasing scales `S` with `F∞`.
///
/// The diagnostic passes when `H̄(p, S) ≥ F∞(p) - eps_num` at every converged
/// node and scale, and the sup-distance to `F∞` strictly decreases in `S`.
/// The defect is the worst one-sided violation, or `∞` if the distances do
/// not decrease.
pub fn compare_flimit(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    tables: &[(f64, EffectiveTable)],
    eps_num: f64,
) -> Result<FLimitReport> {
    match &ham.kind {
        HamiltonianKind::DoubleWell { offset } if offset.as_slice() == [1.0, 0.0] => {}
        _ => return Err(Error::WrongKind("the limit applies to min{|p - e1|, |p + e1|}".into())),
    }
    if !matches!(pot.kind, PotentialKind::SineProduct) || pot.dim != 2 {
        return Err(Error::WrongKind("the limit applies to the 2-D sine-product potential".into()));
    }
    if tables.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidConfig("scales must be strictly increasing".into()));
    }
    let mut distances = Vec::with_capacity(tables.len());
    let mut minima = Vec::with_capacity(tables.len());
    let mut witnesses = Vec::new();
    let mut excluded = 0;
    for (s, table) in tables {
        if table.pgrid.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: table.pgrid.dim() });
        }
        excluded += table.len() - table.converged_count();
        let (mut dist, mut low, mut low_at): (f64, f64, usize) = (0.0, f64::INFINITY, 0);
        for k in (0..table.len()).filter(|&k| table.converged[k]) {
            let gap = table.values[k] - f_infinity(&table.pgrid.node(k))?;
            dist = dist.max(gap.abs());
            if gap < low {
                low = gap;
                low_at = k;
            }
        }
        if low < -eps_num {
            witnesses.push(Witness {
                p: table.pgrid.node(low_at),
                level: Some(*s),
                value: low,
            });
        }
        distances.push(dist);
        minima.push(low);
    }
    let strictly_decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    let worst = minima.iter().fold(0.0_f64, |m, v| m.max(-v));
    let defect = if strictly_decreasing { worst } else { f64::INFINITY };
    if !strictly_decreasing {
        for (i, w) in distances.windows(2).enumerate() {
            if w[1] >= w[0] {
                witnesses.push(Witness {
                    p: Vec::new(),
                    level: Some(tables[i + 1].0),
                    value: w[1],
                });
            }
        }
    }
    Ok(FLimitReport {
        report: DiagnosticReport::new(DiagnosticKind::FLimit, defect, eps_num, witnesses, excluded),
        scales: tables.iter().map(|(s, _)| *s).collect(),
        distances,
        one_sided_minima: minima,
        strictly_decreasing,
    })
}
