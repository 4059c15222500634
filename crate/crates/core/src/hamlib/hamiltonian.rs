//! Kinetic Hamiltonians `H(p)`.

use serde::Serialize;

use super::decompose::ProfilePiece;
use super::profile::{Orientation, PiecewiseLinear, RadialProfile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianKind {
    /// `H(p) = φ(|p|)`
    Radial { profile: RadialProfile },
    /// `H(p) = min{|p - a|, |p + a|}`
    DoubleWell { offset: Vec<f64> },
    /// `H(p) = φ_j(|p|)` for one piece of a decomposition.
    Piece { piece: ProfilePiece },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub dim: usize,
}

fn norm(p: &[f64]) -> f64 {
    match p.len() {
        1 => p[0].abs(),
        _ => p[0].hypot(p[1]),
    }
}

impl HamiltonianSpec {
    pub fn radial(profile: RadialProfile, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            kind: HamiltonianKind::Radial { profile },
            dim,
        })
    }

    pub fn double_well(offset: Vec<f64>) -> Result<Self> {
        let dim = offset.len();
        check_dim(dim)?;
        if offset.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidConfig("non-finite double-well offset".into()));
        }
        Ok(Self {
            kind: HamiltonianKind::DoubleWell { offset },
            dim,
        })
    }

    pub fn piece(piece: ProfilePiece, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            kind: HamiltonianKind::Piece { piece },
            dim,
        })
    }

    pub fn eval(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.len(),
            });
        }
        Ok(self.eval_unchecked(p))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, p: &[f64]) -> f64 {
        match &self.kind {
            HamiltonianKind::Radial { profile } => profile.eval(norm(p)),
            HamiltonianKind::Piece { piece } => piece.curve.eval(norm(p)),
            HamiltonianKind::DoubleWell { offset } => {
                let (mut a, mut b) = (0.0, 0.0);
                for (pi, ai) in p.iter().zip(offset) {
                    a += (pi - ai) * (pi - ai);
                    b += (pi + ai) * (pi + ai);
                }
                a.min(b).sqrt()
            }
        }
    }

    /// The radial curve `φ` when `H(p) = φ(|p|)`.
    pub fn radial_curve(&self) -> Option<&PiecewiseLinear> {
        match &self.kind {
            HamiltonianKind::Radial { profile } => Some(profile.curve()),
            HamiltonianKind::Piece { piece } => Some(&piece.curve),
            HamiltonianKind::DoubleWell { .. } => None,
        }
    }

    /// `H(p) → +∞` as `|p| → ∞`.
    pub fn is_coercive(&self) -> bool {
        match &self.kind {
            HamiltonianKind::Radial { .. } | HamiltonianKind::DoubleWell { .. } => true,
            HamiltonianKind::Piece { piece } => piece.orientation == Orientation::Increasing,
        }
    }

    /// Bound on `|∂H/∂q_i|` over `|q| ≤ radius`.
    pub fn lipschitz_bound(&self, radius: f64) -> f64 {
        match self.radial_curve() {
            Some(curve) => curve.max_abs_slope_within(radius),
            None => 1.0,
        }
    }

    /// Largest `|φ(s_i)|` over the profile's knots; zero for the double well.
    pub fn max_knot_value(&self) -> f64 {
        self.radial_curve()
            .map(|c| c.values().iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .unwrap_or(0.0)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=2).contains(&dim) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 2, got: dim })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamlib::catalog;

    #[test]
    fn ring_well_values() {
        let h = catalog::ring_well(2);
        assert_eq!(h.eval(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(h.eval(&[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(h.eval(&[0.0, 0.5]).unwrap(), 2.0);
        assert_eq!(h.eval(&[0.6, 0.8]).unwrap(), 1.0);
    }

    #[test]
    fn double_well_bottom() {
        let h = catalog::double_well();
        assert_eq!(h.eval(&[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(h.eval(&[-1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(h.eval(&[0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn dimension_checked() {
        let h = catalog::ring_well(2);
        assert!(matches!(h.eval(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lipschitz_bounds() {
        assert_eq!(catalog::ring_well(2).lipschitz_bound(3.0), 4.0);
        assert_eq!(catalog::double_well().lipschitz_bound(10.0), 1.0);
        assert_eq!(catalog::eikonal(1).lipschitz_bound(10.0), 1.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn catalog_hamiltonians_are_even(p1 in -5.0..5.0f64, p2 in -5.0..5.0f64) {
                for h in [
                    catalog::ring_well(2),
                    catalog::crater(2),
                    catalog::double_well(),
                ] {
                    prop_assert_eq!(h.eval(&[p1, p2]).unwrap(), h.eval(&[-p1, -p2]).unwrap());
                }
                let h1 = catalog::ring_well(1);
                prop_assert_eq!(h1.eval(&[p1]).unwrap(), h1.eval(&[-p1]).unwrap());
            }
        }
    }
}
