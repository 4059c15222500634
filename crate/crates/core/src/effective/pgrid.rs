use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed symmetric lattice `[-R, R]^dim` with an odd number of samples per
/// axis, so that `0` and every `-p` are nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PGrid {
    dim: usize,
    radius: f64,
    samples: usize,
}

impl PGrid {
    pub fn new(dim: usize, radius: f64, samples: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::DimensionMismatch { expected: 2, got: dim });
        }
        if samples % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "p-grid needs an odd number of samples per axis, got {samples}"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidConfig(format!("p-grid radius must be positive, got {radius}")));
        }
        Ok(Self { dim, radius, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance between neighbouring samples.
    pub fn spacing(&self) -> f64 {
        if self.samples == 1 {
            0.0
        } else {
            2.0 * self.radius / (self.samples - 1) as f64
        }
    }

    /// Coordinate of sample `k` along an axis; `coord(n-1-k) = -coord(k)` exactly.
    pub fn coord(&self, k: usize) -> f64 {
        if self.samples == 1 {
            return 0.0;
        }
        let n1 = (self.samples - 1) as f64;
        self.radius * (2.0 * k as f64 - n1) / n1
    }

    /// Per-axis sample indices of node `k`, first axis fastest.
    pub fn unravel(&self, k: usize) -> Vec<usize> {
        match self.dim {
            1 => vec![k],
            _ => vec![k % self.samples, k / self.samples],
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        match self.dim {
            1 => idx[0],
            _ => idx[1] * self.samples + idx[0],
        }
    }

    pub fn node(&self, k: usize) -> Vec<f64> {
        self.unravel(k).into_iter().map(|i| self.coord(i)).collect()
    }

    /// Index of the node `-p`.
    pub fn mirror(&self, k: usize) -> usize {
        let idx: Vec<usize> = self.unravel(k).into_iter().map(|i| self.samples - 1 - i).collect();
        self.ravel(&idx)
    }

    /// Index of the origin.
    pub fn center(&self) -> usize {
        let c = self.samples / 2;
        self.ravel(&vec![c; self.dim])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_counts() {
        assert!(matches!(PGrid::new(2, 1.0, 20), Err(Error::InvalidConfig(_))));
        assert!(PGrid::new(2, 1.0, 21).is_ok());
        assert!(PGrid::new(3, 1.0, 21).is_err());
        assert!(PGrid::new(1, 0.0, 21).is_err());
    }

    #[test]
    fn paper_lattice() {
        let g = PGrid::new(2, 1.0, 21).unwrap();
        assert_eq!(g.len(), 441);
        assert_eq!(g.node(g.center()), vec![0.0, 0.0]);
        assert_eq!(g.node(0), vec![-1.0, -1.0]);
        assert_eq!(g.node(440), vec![1.0, 1.0]);
        assert!((g.spacing() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn mirror_is_exact_negation() {
        for g in [PGrid::new(1, 1.0, 41).unwrap(), PGrid::new(2, 1.3, 21).unwrap()] {
            for k in 0..g.len() {
                let m = g.mirror(k);
                assert_eq!(g.mirror(m), k);
                let (a, b) = (g.node(k), g.node(m));
                for (x, y) in a.iter().zip(&b) {
                    assert_eq!(*x, -*y);
                }
            }
        }
    }

    #[test]
    fn single_sample_is_origin() {
        let g = PGrid::new(2, 1.0, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.node(0), vec![0.0, 0.0]);
        assert_eq!(g.mirror(0), 0);
    }
}
