//! Consistency of the discounted approximation with the big-T value.

use serde::Serialize;

use super::report::{DiagnosticKind, DiagnosticReport, Witness};
use crate::error::{Error, Result};
use crate::grid::TorusGrid;
use crate::hamlib::{HamiltonianSpec, PotentialSpec};
use crate::hjsolver::{big_t_effective, discounted_value, BigTReport, DiscountedReport, SolverConfig};

/// Relative slack allowed when checking that defects shrink with `λ`.
pub const MONOTONE_SLACK: f64 = 0.1;

/// Result of [`discounted_consistency`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscountReport {
    pub report: DiagnosticReport,
    pub hbar: f64,
    pub bigt: BigTReport,
    pub lambdas: Vec<f64>,
    /// `λ v_λ(0)` per rate.
    pub scaled_values: Vec<f64>,
    /// `|λ v_λ(0) + H̄(p)|` per rate.
    pub defects: Vec<f64>,
    pub monotone: bool,
    pub solves: Vec<DiscountedReport>,
}

/// Checks `λ v_λ(0) → -H̄(p)` along a decreasing sequence of rates.
///
/// Passes when each defect is at most `1.1` times the previous one and the
/// last is within `tolerance`. The defect is the last one, or `∞` when the
/// sequence is not monotone.
pub fn discounted_consistency(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    p: &[f64],
    lambdas: &[f64],
    grid: TorusGrid,
    cfg: &SolverConfig,
    tolerance: f64,
) -> Result<DiscountReport> {
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > 0.0)) || lambdas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidConfig("need a strictly decreasing sequence of positive rates".into()));
    }
    let bigt = big_t_effective(ham, pot, p, grid, cfg)?;
    let mut scaled_values = Vec::with_capacity(lambdas.len());
    let mut solves = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let (v, rep) = discounted_value(ham, pot, p, lambda, grid, cfg)?;
        scaled_values.push(lambda * v.values()[0]);
        solves.push(rep);
    }
    let defects: Vec<f64> = scaled_values.iter().map(|s| (s + bigt.value).abs()).collect();
    let grows = |i: usize| defects[i + 1] > (1.0 + MONOTONE_SLACK) * defects[i] + 1e-12;
    let monotone = (0..defects.len() - 1).all(|i| !grows(i));
    let last = *defects.last().expect("nonempty");
    let defect = if monotone { last } else { f64::INFINITY };
    let witness = |i: usize| Witness {
        p: p.to_vec(),
        level: Some(lambdas[i]),
        value: defects[i],
    };
    let mut witnesses: Vec<Witness> = (0..defects.len() - 1).filter(|&i| grows(i)).map(|i| witness(i + 1)).collect();
    if last > tolerance {
        witnesses.push(witness(defects.len() - 1));
    }
    Ok(DiscountReport {
        report: DiagnosticReport::new(DiagnosticKind::Discount, defect, tolerance, witnesses, 0),
        hbar: bigt.value,
        bigt,
        lambdas: lambdas.to_vec(),
        scaled_values,
        defects,
        monotone,
        solves,
    })
}
