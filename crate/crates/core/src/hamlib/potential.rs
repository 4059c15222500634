//! Periodic potentials `V(x)` on the unit torus.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::TorusGrid;

/// Shape of a catalog potential; the overall amplitude is [`PotentialSpec::scale`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `(1 + sin 2πx₁)(1 + sin 2πx₂)`
    SineProduct,
    /// `sin² 2πx₁ + sin² 2πx₂`
    SineSquares,
    /// `3 + sin 2πx₁ + sin 4πx₁ + sin 2πx₂`
    AsymSine,
    /// `c₀ · min{x/s, (1-x)/(1-s)}` on `[0, 1)`, 1-D only.
    Triangle { c0: f64, apex: f64 },
    /// Periodic multilinear interpolation of `points^dim` samples at `i/points`.
    Tabulated { points: usize, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub scale: f64,
    pub dim: usize,
}

/// Grid or analytic extrema of a potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialStats {
    pub min: f64,
    pub max: f64,
    pub osc: f64,
}

impl PotentialStats {
    pub fn new(min: f64, max: f64) -> Self {
        Self {
            min,
            max,
            osc: max - min,
        }
    }
}

/// Critical point of `sin a + sin 2a`: `cos a = (√33 - 1)/8`.
fn asym_peak() -> f64 {
    let c = (33f64.sqrt() - 1.0) / 8.0;
    (1.0 - c * c).sqrt() * (1.0 + 2.0 * c)
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, scale: f64, dim: usize) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::InvalidConfig(format!("potential scale must be ≥ 0, got {scale}")));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::DimensionMismatch { expected: 2, got: dim });
        }
        match &kind {
            PotentialKind::SineProduct | PotentialKind::SineSquares | PotentialKind::AsymSine => {
                if dim != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, got: dim });
                }
            }
            PotentialKind::Triangle { c0, apex } => {
                if dim != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, got: dim });
                }
                if !(*c0 > 0.0) || !(*apex > 0.0 && *apex < 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "triangle potential needs c0 > 0 and apex in (0, 1), got c0 = {c0}, apex = {apex}"
                    )));
                }
            }
            PotentialKind::Tabulated { points, values } => {
                if *points == 0 || values.len() != points.pow(dim as u32) {
                    return Err(Error::InvalidConfig(format!(
                        "tabulated potential needs {}^{} values, got {}",
                        points,
                        dim,
                        values.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidConfig("tabulated potential has non-finite values".into()));
                }
            }
        }
        Ok(Self { kind, scale, dim })
    }

    pub fn sine_product(scale: f64) -> Self {
        Self::new(PotentialKind::SineProduct, scale, 2).expect("valid")
    }

    pub fn sine_squares(scale: f64) -> Self {
        Self::new(PotentialKind::SineSquares, scale, 2).expect("valid")
    }

    pub fn asym_sine(scale: f64) -> Self {
        Self::new(PotentialKind::AsymSine, scale, 2).expect("valid")
    }

    pub fn triangle(c0: f64, apex: f64, scale: f64) -> Result<Self> {
        Self::new(PotentialKind::Triangle { c0, apex }, scale, 1)
    }

    /// `V ≡ value` in the given dimension.
    pub fn constant(value: f64, dim: usize) -> Result<Self> {
        Self::new(
            PotentialKind::Tabulated {
                points: 1,
                values: vec![value],
            },
            1.0,
            dim,
        )
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(0.0, dim).expect("valid")
    }

    /// Evaluates `V(x)`, reading each coordinate modulo 1.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        let tau = 2.0 * PI;
        let shape = match &self.kind {
            PotentialKind::SineProduct => (1.0 + (tau * x[0]).sin()) * (1.0 + (tau * x[1]).sin()),
            PotentialKind::SineSquares => (tau * x[0]).sin().powi(2) + (tau * x[1]).sin().powi(2),
            PotentialKind::AsymSine => {
                3.0 + (tau * x[0]).sin() + (2.0 * tau * x[0]).sin() + (tau * x[1]).sin()
            }
            PotentialKind::Triangle { c0, apex } => {
                let y = x[0].rem_euclid(1.0);
                c0 * (y / apex).min((1.0 - y) / (1.0 - apex))
            }
            PotentialKind::Tabulated { points, values } => interpolate(*points, values, x),
        };
        self.scale * shape
    }

    /// Exact extrema where they are known in closed form.
    pub fn analytic_extrema(&self) -> Option<PotentialStats> {
        let s = self.scale;
        let (lo, hi) = match &self.kind {
            PotentialKind::SineProduct => (0.0, 4.0),
            PotentialKind::SineSquares => (0.0, 2.0),
            PotentialKind::AsymSine => (2.0 - asym_peak(), 4.0 + asym_peak()),
            PotentialKind::Triangle { c0, .. } => (0.0, *c0),
            // multilinear interpolation attains its extrema at the samples
            PotentialKind::Tabulated { values, .. } => (
                values.iter().copied().fold(f64::INFINITY, f64::min),
                values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ),
        };
        Some(PotentialStats::new(s * lo, s * hi))
    }

    /// Extrema used by hypothesis checks: analytic values when known, grid
    /// values otherwise.
    pub fn extrema(&self, grid: &TorusGrid) -> PotentialStats {
        self.analytic_extrema()
            .unwrap_or_else(|| potential_stats(self, grid))
    }

    /// Samples on the grid nodes `x = i/N`.
    pub fn sample(&self, grid: &TorusGrid) -> Vec<f64> {
        let h = grid.spacing();
        (0..grid.len())
            .map(|k| {
                let idx = grid.unravel(k);
                let x: Vec<f64> = idx.iter().map(|&i| i as f64 * h).collect();
                self.eval_unchecked(&x)
            })
            .collect()
    }

    /// `x ↦ V(-x)`, exact for catalog kinds via a tabulated copy on `grid`.
    pub fn reflected(&self, grid: &TorusGrid) -> Self {
        let n = grid.points();
        let h = grid.spacing();
        let values = (0..grid.len())
            .map(|k| {
                let idx = grid.unravel(k);
                let x: Vec<f64> = idx.iter().map(|&i| -(i as f64) * h).collect();
                self.eval_unchecked(&x)
            })
            .collect();
        Self::new(PotentialKind::Tabulated { points: n, values }, 1.0, self.dim).expect("valid")
    }
}

fn interpolate(points: usize, values: &[f64], x: &[f64]) -> f64 {
    let n = points;
    let locate = |xi: f64| {
        let t = xi.rem_euclid(1.0) * n as f64;
        let i = (t.floor() as usize).min(n - 1);
        (i, (i + 1) % n, t - i as f64)
    };
    match x.len() {
        1 => {
            let (i0, i1, t) = locate(x[0]);
            values[i0] * (1.0 - t) + values[i1] * t
        }
        _ => {
            let (i0, i1, t) = locate(x[0]);
            let (j0, j1, u) = locate(x[1]);
            let at = |i: usize, j: usize| values[j * n + i];
            (at(i0, j0) * (1.0 - t) + at(i1, j0) * t) * (1.0 - u)
                + (at(i0, j1) * (1.0 - t) + at(i1, j1) * t) * u
        }
    }
}

/// Grid extrema `(min V, max V, osc V)` over the nodes of `grid`.
pub fn potential_stats(spec: &PotentialSpec, grid: &TorusGrid) -> PotentialStats {
    let samples = spec.sample(grid);
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    PotentialStats::new(min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sine_product_peak() {
        let v = PotentialSpec::sine_product(1.0);
        assert_abs_diff_eq!(v.eval(&[0.25, 0.25]).unwrap(), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.eval(&[0.75, 0.1]).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_scale_is_zero() {
        for v in [
            PotentialSpec::sine_product(0.0),
            PotentialSpec::sine_squares(0.0),
            PotentialSpec::asym_sine(0.0),
        ] {
            assert_eq!(v.eval(&[0.3, 0.7]).unwrap(), 0.0);
        }
        let t = PotentialSpec::triangle(1.0, 0.3, 0.0).unwrap();
        assert_eq!(t.eval(&[0.3]).unwrap(), 0.0);
    }

    #[test]
    fn triangle_apex() {
        let t = PotentialSpec::triangle(1.0, 1.0 / 3.0, 1.0).unwrap();
        assert_abs_diff_eq!(t.eval(&[1.0 / 3.0]).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(t.eval(&[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn periodicity() {
        let v = PotentialSpec::asym_sine(0.7);
        let a = v.eval(&[0.123, 0.456]).unwrap();
        let b = v.eval(&[2.123, -1.544]).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        let t = PotentialSpec::triangle(1.5, 0.4, 1.0).unwrap();
        assert_abs_diff_eq!(t.eval(&[0.3]).unwrap(), t.eval(&[-0.7]).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let v = PotentialSpec::sine_product(1.0);
        assert!(matches!(v.eval(&[0.1]), Err(Error::DimensionMismatch { .. })));
        assert!(PotentialSpec::new(PotentialKind::SineSquares, 1.0, 1).is_err());
        assert!(PotentialSpec::new(PotentialKind::Triangle { c0: 1.0, apex: 0.5 }, 1.0, 2).is_err());
    }

    #[test]
    fn stats_match_catalog_values() {
        let grid = TorusGrid::new(2, 400).unwrap();
        let s = potential_stats(&PotentialSpec::sine_product(0.25), &grid);
        assert_abs_diff_eq!(s.min, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.max, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.osc, 1.0, epsilon = 1e-12);

        let s = potential_stats(&PotentialSpec::sine_product(0.0), &grid);
        assert_eq!((s.min, s.max, s.osc), (0.0, 0.0, 0.0));

        let grid1 = TorusGrid::new(1, 300).unwrap();
        let s = potential_stats(&PotentialSpec::triangle(1.5, 1.0 / 3.0, 1.0).unwrap(), &grid1);
        assert_abs_diff_eq!(s.min, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.max, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.osc, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn triangle_max_by_dense_sampling() {
        let t = PotentialSpec::triangle(1.5, 1.0 / 3.0, 1.0).unwrap();
        let dense = (0..100_000)
            .map(|i| t.eval(&[i as f64 / 100_000.0]).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_abs_diff_eq!(dense, 1.5, epsilon = 1e-4);
        assert_eq!(t.analytic_extrema().unwrap().max, 1.5);
    }

    #[test]
    fn asym_extrema_against_dense_sampling() {
        let v = PotentialSpec::asym_sine(1.0);
        let ext = v.analytic_extrema().unwrap();
        let grid = TorusGrid::new(2, 1000).unwrap();
        let s = potential_stats(&v, &grid);
        // modulus of continuity ~ 6π·h on a grid of spacing 1e-3
        assert!((s.min - ext.min).abs() < 2e-2 && s.min >= ext.min - 1e-12);
        assert!((s.max - ext.max).abs() < 2e-2 && s.max <= ext.max + 1e-12);
    }

    #[test]
    fn refinement_changes_stats_within_modulus() {
        let v = PotentialSpec::sine_squares(1.0);
        let coarse = potential_stats(&v, &TorusGrid::new(2, 50).unwrap());
        let fine = potential_stats(&v, &TorusGrid::new(2, 100).unwrap());
        // |∇V| ≤ 2π·√2 for sine_squares
        let modulus = 2.0 * PI * 2f64.sqrt() / 50.0;
        assert!((coarse.min - fine.min).abs() <= modulus);
        assert!((coarse.max - fine.max).abs() <= modulus);
    }

    #[test]
    fn triangle_evenness_depends_on_apex() {
        let asym = |apex: f64| {
            let t = PotentialSpec::triangle(1.0, apex, 1.0).unwrap();
            (0..1000)
                .map(|i| {
                    let x = i as f64 / 1000.0;
                    (t.eval(&[0.5 + x]).unwrap() - t.eval(&[0.5 - x]).unwrap()).abs()
                })
                .fold(0.0, f64::max)
        };
        // evenness about the apex of the symmetric triangle
        let sym = PotentialSpec::triangle(1.0, 0.5, 1.0).unwrap();
        let about_apex = (0..1000)
            .map(|i| {
                let x = i as f64 / 1000.0;
                (sym.eval(&[0.5 + x]).unwrap() - sym.eval(&[0.5 - x]).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        assert!(about_apex < 1e-12);
        assert!(asym(1.0 / 3.0) > 0.1);
    }

    #[test]
    fn tabulated_interpolates() {
        let v = PotentialSpec::new(
            PotentialKind::Tabulated {
                points: 2,
                values: vec![0.0, 1.0],
            },
            2.0,
            1,
        )
        .unwrap();
        assert_abs_diff_eq!(v.eval(&[0.25]).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.eval(&[0.75]).unwrap(), 1.0, epsilon = 1e-14);
        let c = PotentialSpec::constant(0.3, 2).unwrap();
        assert_eq!(c.eval(&[0.4, 0.9]).unwrap(), 0.3);
    }
}
