//! Spatial discretization: one-sided WENO3 gradients and the
//! Lax-Friedrichs numerical Hamiltonian.

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::hamlib::HamiltonianSpec;

use super::config::Reconstruction;

/// Smallest grid on which the five-point WENO3 stencil does not wrap onto itself.
pub const MIN_POINTS: usize = 5;

/// Regularization of the WENO smoothness weights, relative to `h²`.
///
/// A fixed tiny constant lets the weights switch stencils at inflection
/// points of smooth data, which costs an order of accuracy; scaling with
/// `h²` keeps the weights close to the linear ones there while still
/// suppressing the stencil that crosses a kink.
const WENO_EPS_FACTOR: f64 = 10.0;

pub(crate) fn weno_eps(h: f64) -> f64 {
    WENO_EPS_FACTOR * h * h
}

/// Third-order WENO combination of three consecutive one-sided differences,
/// oriented so that `b` is the difference nearest the node on the upwind side.
#[inline(always)]
pub(crate) fn weno3(a: f64, b: f64, c: f64, eps: f64) -> f64 {
    let p0 = 0.5 * (3.0 * b - a);
    let p1 = 0.5 * (b + c);
    let s0 = eps + (b - a) * (b - a);
    let s1 = eps + (c - b) * (c - b);
    // α₀ = (1/3)/s0², α₁ = (2/3)/s1², normalized
    let a0 = s1 * s1;
    let a1 = 2.0 * s0 * s0;
    (a0 * p0 + a1 * p1) / (a0 + a1)
}

/// Left- and right-biased approximations of `∂w/∂x_axis` at every node.
pub fn weno3_gradients(w: &Field, axis: usize) -> Result<(Field, Field)> {
    one_sided_gradients(w, axis, Reconstruction::Weno3)
}

/// One-sided gradients with the requested reconstruction.
pub fn one_sided_gradients(
    w: &Field,
    axis: usize,
    reconstruction: Reconstruction,
) -> Result<(Field, Field)> {
    let grid = *w.grid();
    if axis >= grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: axis + 1,
        });
    }
    if grid.points() < MIN_POINTS {
        return Err(Error::GridTooSmall {
            points: grid.points(),
            min: MIN_POINTS,
        });
    }
    let n = grid.points();
    let inv_h = 1.0 / grid.spacing();
    let eps = weno_eps(grid.spacing());
    let vals = w.values();
    let stride = if axis == 0 { 1 } else { n };
    let step = |k: usize, shift: isize| -> usize {
        let idx = grid.unravel(k);
        let i = idx[axis] as isize + shift;
        let base = k - idx[axis] * stride;
        base + i.rem_euclid(n as isize) as usize * stride
    };
    // forward differences D[k] = (w[k+1] - w[k]) / h along the axis
    let d: Vec<f64> = (0..vals.len())
        .map(|k| (vals[step(k, 1)] - vals[k]) * inv_h)
        .collect();
    let mut minus = vec![0.0; vals.len()];
    let mut plus = vec![0.0; vals.len()];
    for k in 0..vals.len() {
        let (km2, km1, kp1) = (step(k, -2), step(k, -1), step(k, 1));
        match reconstruction {
            Reconstruction::Weno3 => {
                minus[k] = weno3(d[km2], d[km1], d[k], eps);
                plus[k] = weno3(d[kp1], d[k], d[km1], eps);
            }
            Reconstruction::FirstOrder => {
                minus[k] = d[km1];
                plus[k] = d[k];
            }
        }
    }
    Ok((Field::new(grid, minus)?, Field::new(grid, plus)?))
}

/// `H(p + (q⁻ + q⁺)/2) - Σᵢ αᵢ/2 (q⁺ᵢ - q⁻ᵢ)`.
pub fn lf_flux(
    h: &HamiltonianSpec,
    p: &[f64],
    grad_minus: &[f64],
    grad_plus: &[f64],
    alpha: &[f64],
) -> Result<f64> {
    let dim = h.dim;
    for len in [p.len(), grad_minus.len(), grad_plus.len(), alpha.len()] {
        if len != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: len });
        }
    }
    let mut q = [0.0; 2];
    let mut dissipation = 0.0;
    for i in 0..dim {
        q[i] = p[i] + 0.5 * (grad_minus[i] + grad_plus[i]);
        dissipation += 0.5 * alpha[i] * (grad_plus[i] - grad_minus[i]);
    }
    Ok(h.eval_unchecked(&q[..dim]) - dissipation)
}
