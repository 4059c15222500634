use serde::{Deserialize, Serialize};

use super::pgrid::PGrid;
use crate::error::{Error, Result};

/// How a table was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Direct,
    Composed,
    Duality,
    Constant,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Direct => "direct",
            Provenance::Composed => "composed",
            Provenance::Duality => "duality",
            Provenance::Constant => "constant",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "direct" => Provenance::Direct,
            "composed" => Provenance::Composed,
            "duality" => Provenance::Duality,
            "constant" => Provenance::Constant,
            _ => return None,
        })
    }
}

/// Sampled `p ↦ H̄(p)` with per-node convergence metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveTable {
    pub pgrid: PGrid,
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
    pub residuals: Vec<f64>,
    pub provenance: Provenance,
    /// Set when a theorem guarantees the table is quasiconvex.
    pub quasiconvex_by_theorem: bool,
}

impl EffectiveTable {
    pub fn new(
        pgrid: PGrid,
        values: Vec<f64>,
        converged: Vec<bool>,
        residuals: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        for len in [values.len(), converged.len(), residuals.len()] {
            if len != pgrid.len() {
                return Err(Error::DimensionMismatch {
                    expected: pgrid.len(),
                    got: len,
                });
            }
        }
        Ok(Self {
            pgrid,
            values,
            converged,
            residuals,
            provenance,
            quasiconvex_by_theorem: false,
        })
    }

    pub fn constant(pgrid: PGrid, value: f64) -> Self {
        Self {
            pgrid,
            values: vec![value; pgrid.len()],
            converged: vec![true; pgrid.len()],
            residuals: vec![0.0; pgrid.len()],
            provenance: Provenance::Constant,
            quasiconvex_by_theorem: false,
        }
    }

    /// Table of an analytic function of `p`, e.g. `H` itself.
    pub fn from_fn(pgrid: PGrid, provenance: Provenance, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..pgrid.len()).map(|k| f(&pgrid.node(k))).collect();
        Self {
            pgrid,
            values,
            converged: vec![true; pgrid.len()],
            residuals: vec![0.0; pgrid.len()],
            provenance,
            quasiconvex_by_theorem: false,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }

    pub fn converged_count(&self) -> usize {
        self.converged.iter().filter(|c| **c).count()
    }

    /// Minimum over converged nodes.
    pub fn min_value(&self) -> f64 {
        self.converged_values().fold(f64::INFINITY, f64::min)
    }

    /// Maximum over converged nodes.
    pub fn max_value(&self) -> f64 {
        self.converged_values().fold(f64::NEG_INFINITY, f64::max)
    }

    fn converged_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .zip(&self.converged)
            .filter(|(_, c)| **c)
            .map(|(v, _)| *v)
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.pgrid != other.pgrid {
            return Err(Error::PGridMismatch(format!(
                "{:?} vs {:?}",
                self.pgrid, other.pgrid
            )));
        }
        Ok(())
    }

    /// `max |a - b|` over nodes converged in both tables, and the node attaining it.
    pub fn max_abs_diff(&self, other: &Self) -> Result<(f64, Option<usize>)> {
        self.check_same_grid(other)?;
        let mut best = (0.0, None);
        for k in 0..self.len() {
            if self.converged[k] && other.converged[k] {
                let d = (self.values[k] - other.values[k]).abs();
                if d > best.0 || best.1.is_none() {
                    best = (d, Some(k));
                }
            }
        }
        Ok(best)
    }

    /// Builds a table from per-node results of several same-grid tables.
    ///
    /// Convergence is the conjunction over inputs, residuals the maximum.
    pub fn combine(
        tables: &[&EffectiveTable],
        provenance: Provenance,
        f: impl Fn(usize, &[f64]) -> f64,
    ) -> Result<Self> {
        let first = tables
            .first()
            .ok_or_else(|| Error::PieceCount { expected: 1, got: 0 })?;
        for t in &tables[1..] {
            first.check_same_grid(t)?;
        }
        let n = first.len();
        let mut values = Vec::with_capacity(n);
        let mut converged = Vec::with_capacity(n);
        let mut residuals = Vec::with_capacity(n);
        let mut buf = vec![0.0; tables.len()];
        for k in 0..n {
            for (b, t) in buf.iter_mut().zip(tables) {
                *b = t.values[k];
            }
            values.push(f(k, &buf));
            converged.push(tables.iter().all(|t| t.converged[k]));
            residuals.push(tables.iter().map(|t| t.residuals[k]).fold(0.0, f64::max));
        }
        Self::new(first.pgrid, values, converged, residuals, provenance)
    }
}
