//! Uniform periodic grids on `[0, 1)^n` and grid functions on them.

use serde::Serialize;

use crate::error::{Error, Result};

/// `points` nodes per dimension at `x = i/points`, indices taken modulo `points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusGrid {
    dim: usize,
    points: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, points: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::DimensionMismatch { expected: 2, got: dim });
        }
        if points == 0 {
            return Err(Error::GridTooSmall { points, min: 1 });
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.points as f64
    }

    /// Total number of nodes, `points^dim`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multi-index of a flat index; the first coordinate varies fastest.
    pub fn unravel(&self, k: usize) -> Vec<usize> {
        match self.dim {
            1 => vec![k],
            _ => vec![k % self.points, k / self.points],
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        match self.dim {
            1 => idx[0] % self.points,
            _ => (idx[1] % self.points) * self.points + idx[0] % self.points,
        }
    }

    pub fn coords(&self, k: usize) -> Vec<f64> {
        self.unravel(k)
            .into_iter()
            .map(|i| i as f64 * self.spacing())
            .collect()
    }
}

/// Real-valued function on a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(&grid.coords(k))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Spatial mean with a fixed pairwise summation order.
    pub fn mean(&self) -> f64 {
        pairwise_sum(&self.values) / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Pairwise (tree) summation; the reduction order depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
