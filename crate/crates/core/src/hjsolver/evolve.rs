//! Time integration: the big-T estimator and the discounted problem.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{pairwise_sum, Field, TorusGrid};
use crate::hamlib::{HamiltonianSpec, PotentialSpec};

use super::config::{Reconstruction, SolverConfig};
use super::scheme::{weno3, weno_eps, MIN_POINTS};

/// Semi-discrete operator `w ↦ -(Ĥ(p, D⁻w, D⁺w) - V + λw)` on a fixed grid.
struct Operator<'a> {
    ham: &'a HamiltonianSpec,
    p: [f64; 2],
    dim: usize,
    n: usize,
    inv_h: f64,
    eps: f64,
    alpha: [f64; 2],
    reconstruction: Reconstruction,
    /// Potential samples shifted so that their analytic minimum is zero.
    v: Vec<f64>,
    lambda: f64,
    dx: Vec<f64>,
    dy: Vec<f64>,
    prev: Vec<usize>,
    prev2: Vec<usize>,
    next: Vec<usize>,
}

impl<'a> Operator<'a> {
    fn rate(&mut self, w: &[f64], out: &mut [f64]) {
        let n = self.n;
        let inv_h = self.inv_h;
        match self.dim {
            1 => {
                for i in 0..n {
                    self.dx[i] = (w[self.next[i]] - w[i]) * inv_h;
                }
                for i in 0..n {
                    let (qm, qp) = self.gradients(&self.dx, self.prev2[i], self.prev[i], i, self.next[i]);
                    let q = [self.p[0] + 0.5 * (qm + qp)];
                    let flux = self.ham.eval_unchecked(&q) - 0.5 * self.alpha[0] * (qp - qm);
                    out[i] = -(flux - self.v[i] + self.lambda * w[i]);
                }
            }
            _ => {
                for j in 0..n {
                    let row = j * n;
                    let row_up = self.next[j] * n;
                    for i in 0..n {
                        let k = row + i;
                        self.dx[k] = (w[row + self.next[i]] - w[k]) * inv_h;
                        self.dy[k] = (w[row_up + i] - w[k]) * inv_h;
                    }
                }
                for j in 0..n {
                    let row = j * n;
                    let (jm2, jm1, jp1) = (self.prev2[j] * n, self.prev[j] * n, self.next[j] * n);
                    for i in 0..n {
                        let k = row + i;
                        let (qm0, qp0) = self.gradients(
                            &self.dx,
                            row + self.prev2[i],
                            row + self.prev[i],
                            k,
                            row + self.next[i],
                        );
                        let (qm1, qp1) = self.gradients(&self.dy, jm2 + i, jm1 + i, k, jp1 + i);
                        let q = [self.p[0] + 0.5 * (qm0 + qp0), self.p[1] + 0.5 * (qm1 + qp1)];
                        let flux = self.ham.eval_unchecked(&q)
                            - 0.5 * self.alpha[0] * (qp0 - qm0)
                            - 0.5 * self.alpha[1] * (qp1 - qm1);
                        out[k] = -(flux - self.v[k] + self.lambda * w[k]);
                    }
                }
            }
        }
    }

    #[inline(always)]
    fn gradients(&self, d: &[f64], km2: usize, km1: usize, k: usize, kp1: usize) -> (f64, f64) {
        match self.reconstruction {
            Reconstruction::Weno3 => (
                weno3(d[km2], d[km1], d[k], self.eps),
                weno3(d[kp1], d[k], d[km1], self.eps),
            ),
            Reconstruction::FirstOrder => (d[km1], d[k]),
        }
    }
}

/// Stage buffers for SSP-RK3 in Shu-Osher form.
struct Stepper {
    w1: Vec<f64>,
    w2: Vec<f64>,
    k: Vec<f64>,
}

impl Stepper {
    fn new(len: usize) -> Self {
        Self {
            w1: vec![0.0; len],
            w2: vec![0.0; len],
            k: vec![0.0; len],
        }
    }

    /// Advances `w` by one step and returns `max |Δw|`.
    fn step(&mut self, op: &mut Operator, w: &mut [f64], dt: f64) -> f64 {
        op.rate(w, &mut self.k);
        for ((a, &b), &k) in self.w1.iter_mut().zip(w.iter()).zip(&self.k) {
            *a = b + dt * k;
        }
        op.rate(&self.w1, &mut self.k);
        for (((a, &b), &c), &k) in self.w2.iter_mut().zip(w.iter()).zip(&self.w1).zip(&self.k) {
            *a = 0.75 * b + 0.25 * (c + dt * k);
        }
        op.rate(&self.w2, &mut self.k);
        let mut change: f64 = 0.0;
        for ((a, &c), &k) in w.iter_mut().zip(&self.w2).zip(&self.k) {
            let next = (*a + 2.0 * (c + dt * k)) / 3.0;
            change = change.max((next - *a).abs());
            *a = next;
        }
        change
    }
}

/// Derived discretization parameters shared by both solvers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discretization {
    pub alpha: Vec<f64>,
    pub p_box_radius: f64,
    /// Shift subtracted from the potential so its minimum is zero.
    pub potential_shift: f64,
}

struct Setup<'a> {
    op: Operator<'a>,
    disc: Discretization,
    grid: TorusGrid,
}

fn setup<'a>(
    ham: &'a HamiltonianSpec,
    pot: &PotentialSpec,
    p: &[f64],
    grid: TorusGrid,
    cfg: &SolverConfig,
    lambda: f64,
) -> Result<Setup<'a>> {
    cfg.validate()?;
    let dim = grid.dim();
    for got in [ham.dim, pot.dim, p.len()] {
        if got != dim {
            return Err(Error::DimensionMismatch { expected: dim, got });
        }
    }
    if !ham.is_coercive() {
        return Err(Error::WrongKind(
            "decreasing pieces are not coercive; use the quasiconcave sweep".into(),
        ));
    }
    if grid.points() < MIN_POINTS {
        return Err(Error::GridTooSmall {
            points: grid.points(),
            min: MIN_POINTS,
        });
    }
    let stats = pot.extrema(&grid);
    let p_norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    let p_box_radius = cfg
        .p_box_radius
        .unwrap_or(p_norm + stats.osc + ham.max_knot_value());
    let a = cfg.alpha_margin * ham.lipschitz_bound(p_box_radius);
    let alpha = vec![a; dim];
    let v: Vec<f64> = pot.sample(&grid).into_iter().map(|x| x - stats.min).collect();

    let n = grid.points();
    let wrap = |s: isize| (0..n).map(|i| (i as isize + s).rem_euclid(n as isize) as usize).collect();
    let mut pp = [0.0; 2];
    pp[..dim].copy_from_slice(p);
    let mut aa = [0.0; 2];
    aa[..dim].copy_from_slice(&alpha);
    let op = Operator {
        ham,
        p: pp,
        dim,
        n,
        inv_h: 1.0 / grid.spacing(),
        eps: weno_eps(grid.spacing()),
        alpha: aa,
        reconstruction: cfg.reconstruction,
        v,
        lambda,
        dx: vec![0.0; grid.len()],
        dy: if dim == 2 { vec![0.0; grid.len()] } else { Vec::new() },
        prev: wrap(-1),
        prev2: wrap(-2),
        next: wrap(1),
    };
    Ok(Setup {
        op,
        disc: Discretization {
            alpha,
            p_box_radius,
            potential_shift: stats.min,
        },
        grid,
    })
}

fn cfl_dt(cfg: &SolverConfig, grid: &TorusGrid, alpha: &[f64], lambda: f64) -> f64 {
    let rate: f64 = alpha.iter().sum::<f64>() / grid.spacing() + lambda;
    if rate > 0.0 {
        cfg.cfl / rate
    } else {
        cfg.cfl * grid.spacing()
    }
}

/// Slope estimate at the end of one averaging window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowEstimate {
    pub time: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BigTReport {
    pub value: f64,
    pub converged: bool,
    pub steps: usize,
    pub windows: usize,
    pub t_final: f64,
    pub dt: f64,
    /// `|Ĥ_k - Ĥ_{k-1}|` between the last two windows.
    pub slope_change: f64,
    /// `sup_x |(w̃(x, t) - w̃(x, t - W))/W + Ĥ|` over the last window.
    pub residual: f64,
    pub discretization: Discretization,
}

/// Final periodic field and the sequence of window estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub field: Field,
    pub estimates: Vec<WindowEstimate>,
    pub report: BigTReport,
}

/// Integrates `w̃_t + H(p + Dw̃) - V = 0` until two successive window
/// estimates `Ĥ = -(⟨w̃⟩(t) - ⟨w̃⟩(t - W))/W` agree within `tol_slope`.
pub fn evolve_bigt(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    p: &[f64],
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<Evolution> {
    let Setup { mut op, disc, grid } = setup(ham, pot, p, grid, cfg, 0.0)?;
    let steps_per_window = (cfg.window / cfl_dt(cfg, &grid, &disc.alpha, 0.0)).ceil() as usize;
    let dt = cfg.window / steps_per_window as f64;
    let max_windows = ((cfg.t_max / cfg.window).floor() as usize).max(2);

    let mut w = cfg.initial.field(grid).into_values();
    let mut prev_w = w.clone();
    let mut prev_mean = pairwise_sum(&w) / w.len() as f64;
    let mut stepper = Stepper::new(w.len());
    let mut estimates = Vec::new();
    let mut steps = 0;
    let mut converged = false;
    let mut slope_change = f64::INFINITY;
    let mut residual = f64::INFINITY;

    for window in 1..=max_windows {
        for _ in 0..steps_per_window {
            stepper.step(&mut op, &mut w, dt);
        }
        steps += steps_per_window;
        let time = window as f64 * cfg.window;
        if !w.iter().all(|x| x.is_finite()) {
            return Err(Error::Instability { time });
        }
        let mean = pairwise_sum(&w) / w.len() as f64;
        let value = -(mean - prev_mean) / cfg.window;
        residual = w
            .iter()
            .zip(&prev_w)
            .map(|(a, b)| ((a - b) / cfg.window + value).abs())
            .fold(0.0, f64::max);
        if let Some(last) = estimates.last() {
            let last: &WindowEstimate = last;
            slope_change = (value - last.value).abs();
        }
        estimates.push(WindowEstimate { time, value });
        prev_mean = mean;
        prev_w.copy_from_slice(&w);
        if slope_change < cfg.tol_slope {
            converged = true;
            break;
        }
    }

    // undo the potential shift: w̃ = w̃' + shift·t and Ĥ = Ĥ' - shift
    let shift = disc.potential_shift;
    let t_final = estimates.last().map_or(0.0, |e| e.time);
    for e in &mut estimates {
        e.value -= shift;
    }
    for x in &mut w {
        *x += shift * t_final;
    }
    let report = BigTReport {
        value: estimates.last().map_or(f64::NAN, |e| e.value),
        converged,
        steps,
        windows: estimates.len(),
        t_final,
        dt,
        slope_change,
        residual,
        discretization: disc,
    };
    Ok(Evolution {
        field: Field::new(grid, w)?,
        estimates,
        report,
    })
}

/// Big-T estimate of `H̄(p)` with its convergence report.
pub fn big_t_effective(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    p: &[f64],
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<BigTReport> {
    evolve_bigt(ham, pot, p, grid, cfg).map(|e| e.report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscountedReport {
    pub lambda: f64,
    pub converged: bool,
    pub steps: usize,
    pub t_final: f64,
    pub dt: f64,
    /// `‖vⁿ⁺¹ - vⁿ‖∞ / dt` at the last step.
    pub residual: f64,
    pub discretization: Discretization,
}

/// Marches `v_t + λv + H(p + Dv) - V = 0` to steady state, starting from the
/// constant `-(H(p) - ⟨V⟩)/λ`.
pub fn discounted_value(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    p: &[f64],
    lambda: f64,
    grid: TorusGrid,
    cfg: &SolverConfig,
) -> Result<(Field, DiscountedReport)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidConfig(format!("lambda must be positive, got {lambda}")));
    }
    let Setup { mut op, disc, grid } = setup(ham, pot, p, grid, cfg, lambda)?;
    let dt = cfl_dt(cfg, &grid, &disc.alpha, lambda);
    let max_steps = (cfg.t_max / lambda / dt).ceil() as usize;
    let mean_v = pairwise_sum(&op.v) / op.v.len() as f64;
    let guess = -(ham.eval_unchecked(p) - mean_v) / lambda;
    let mut w = vec![guess; grid.len()];
    let mut stepper = Stepper::new(w.len());
    let target = cfg.tol_slope * lambda;
    let mut residual = f64::INFINITY;
    let mut steps = 0;
    let mut converged = false;
    const CHECK_EVERY: usize = 256;
    while steps < max_steps {
        residual = stepper.step(&mut op, &mut w, dt) / dt;
        steps += 1;
        if residual < target {
            converged = true;
            break;
        }
        if steps % CHECK_EVERY == 0 && !w.iter().all(|x| x.is_finite()) {
            return Err(Error::Instability {
                time: steps as f64 * dt,
            });
        }
    }
    if !w.iter().all(|x| x.is_finite()) || !residual.is_finite() {
        return Err(Error::Instability {
            time: steps as f64 * dt,
        });
    }
    // λv' = V - shift - H  ⇒  v = v' + shift/λ
    let shift = disc.potential_shift;
    for x in &mut w {
        *x += shift / lambda;
    }
    let report = DiscountedReport {
        lambda,
        converged,
        steps,
        t_final: steps as f64 * dt,
        dt,
        residual,
        discretization: disc,
    };
    Ok((Field::new(grid, w)?, report))
}

/// One SSP-RK3 step of the big-T operator from `w0`; returns the new field and `dt`.
#[cfg(test)]
pub(crate) fn step_once_for_tests(
    ham: &HamiltonianSpec,
    pot: &PotentialSpec,
    p: &[f64],
    w0: &Field,
    cfg: &SolverConfig,
) -> Result<(Field, f64)> {
    let Setup { mut op, disc, grid } = setup(ham, pot, p, *w0.grid(), cfg, 0.0)?;
    let dt = cfl_dt(cfg, &grid, &disc.alpha, 0.0);
    let mut w = w0.values().to_vec();
    Stepper::new(w.len()).step(&mut op, &mut w, dt);
    // report in the unshifted frame
    for x in &mut w {
        *x -= disc.potential_shift * dt;
    }
    Ok((Field::new(grid, w)?, dt))
}
