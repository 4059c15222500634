use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::grid::TorusGrid;

/// Initial periodic part `w̃(x, 0)` for the big-T evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    #[default]
    Zero,
    /// `cos(2πx₁)·sin(2πx₂)` in 2-D, `cos(2πx)` in 1-D.
    CosSin,
}

impl InitialData {
    pub fn field(self, grid: TorusGrid) -> Field {
        use std::f64::consts::TAU;
        match self {
            InitialData::Zero => Field::zeros(grid),
            InitialData::CosSin => Field::from_fn(grid, |x| match x.len() {
                1 => (TAU * x[0]).cos(),
                _ => (TAU * x[0]).cos() * (TAU * x[1]).sin(),
            }),
        }
    }
}

/// Spatial reconstruction of the one-sided gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reconstruction {
    #[default]
    Weno3,
    /// Plain one-sided differences; the resulting scheme is exactly monotone.
    FirstOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_max: f64,
    pub window: f64,
    pub tol_slope: f64,
    pub alpha_margin: f64,
    /// Bound on `|p + Dw|` for the dissipation coefficients; derived from
    /// the problem when absent.
    pub p_box_radius: Option<f64>,
    pub initial: InitialData,
    pub reconstruction: Reconstruction,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.5,
            t_max: 80.0,
            window: 10.0,
            tol_slope: 1e-3,
            alpha_margin: 1.5,
            p_box_radius: None,
            initial: InitialData::Zero,
            reconstruction: Reconstruction::Weno3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl must lie in (0, 1]");
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad("t_max must be positive and finite");
        }
        if !(self.window > 0.0 && self.window <= self.t_max) {
            return bad("window must be positive and at most t_max");
        }
        if !(self.tol_slope > 0.0) {
            return bad("tol_slope must be positive");
        }
        if !(self.alpha_margin >= 1.0 && self.alpha_margin.is_finite()) {
            return bad("alpha_margin must be at least 1");
        }
        if let Some(r) = self.p_box_radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad("p_box_radius must be positive");
            }
        }
        Ok(())
    }
}
