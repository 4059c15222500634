//! Piecewise-linear radial profiles `r ↦ φ(r)` on `[0, ∞)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Monotonicity of a run of a radial profile, or of a decomposition piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Increasing,
    Decreasing,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Increasing => 1.0,
            Orientation::Decreasing => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Increasing => Orientation::Decreasing,
            Orientation::Decreasing => Orientation::Increasing,
        }
    }
}

/// Continuous piecewise-linear function on `[0, ∞)`.
///
/// Knots `r_0 = 0 < r_1 < … < r_k` carry the values; past the last knot the
/// function continues linearly with `tail_slope`, which may have either sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinear {
    radii: Vec<f64>,
    values: Vec<f64>,
    tail_slope: f64,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(radii: Vec<f64>, values: Vec<f64>, tail_slope: f64) -> Result<Self> {
        if radii.is_empty() || radii.len() != values.len() {
            return Err(Error::InvalidProfile(format!(
                "need matching non-empty knot lists, got {} radii and {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii[0] != 0.0 {
            return Err(Error::InvalidProfile(format!(
                "first knot must sit at r = 0, got {}",
                radii[0]
            )));
        }
        if radii.iter().chain(&values).any(|v| !v.is_finite()) || !tail_slope.is_finite() {
            return Err(Error::InvalidProfile("non-finite knot data".into()));
        }
        if let Some(w) = radii.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(format!(
                "radii must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let slopes = radii
            .windows(2)
            .zip(values.windows(2))
            .map(|(r, v)| (v[1] - v[0]) / (r[1] - r[0]))
            .collect();
        Ok(Self {
            radii,
            values,
            tail_slope,
            slopes,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_slope(&self) -> f64 {
        self.tail_slope
    }

    /// Slopes of the finite segments between consecutive knots.
    pub fn segment_slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn last_radius(&self) -> f64 {
        *self.radii.last().expect("non-empty")
    }

    /// Evaluates at `r ≥ 0`. Knot radii reproduce the stored values exactly.
    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        let last = self.radii.len() - 1;
        if r >= self.radii[last] {
            return self.values[last] + self.tail_slope * (r - self.radii[last]);
        }
        // Few knots in practice, so a linear scan beats a binary search.
        let mut k = 0;
        while self.radii[k + 1] <= r {
            k += 1;
        }
        self.values[k] + self.slopes[k] * (r - self.radii[k])
    }

    /// Largest `|φ'|` over segments meeting `[0, r_max]`.
    pub fn max_abs_slope_within(&self, r_max: f64) -> f64 {
        let mut best: f64 = 0.0;
        for (k, s) in self.slopes.iter().enumerate() {
            if self.radii[k] <= r_max {
                best = best.max(s.abs());
            }
        }
        if r_max >= self.last_radius() || self.slopes.is_empty() {
            best = best.max(self.tail_slope.abs());
        }
        best
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.max_abs_slope_within(f64::INFINITY)
    }

    /// `r ↦ -φ(r)`.
    pub fn negated(&self) -> Self {
        Self::new(
            self.radii.clone(),
            self.values.iter().map(|v| -v).collect(),
            -self.tail_slope,
        )
        .expect("negation preserves validity")
    }
}

/// A coercive radial kinetic-energy profile: piecewise linear with a strictly
/// increasing tail.
///
/// Segments may rise, fall or stay flat. The turning points of the profile are
/// the breakpoints `s_0 = 0 ≤ s_1 < s_2 < … < s_{2m}`: the profile is
/// nondecreasing on `[s_{2i}, s_{2i+1}]` and nonincreasing on
/// `[s_{2i+1}, s_{2i+2}]`. A profile that starts by falling has the degenerate
/// first breakpoint `s_1 = s_0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RadialProfile {
    curve: PiecewiseLinear,
}

/// Maximal monotone stretch of a radial profile, `[start, end]` in knot indices.
/// `end == None` means the run extends to infinity through the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Run {
    pub start: usize,
    pub end: Option<usize>,
    pub orientation: Orientation,
}

impl RadialProfile {
    /// Builds a profile from arbitrary knots.
    pub fn new(radii: Vec<f64>, values: Vec<f64>, tail_slope: f64) -> Result<Self> {
        if tail_slope <= 0.0 {
            return Err(Error::InvalidProfile(format!(
                "tail slope must be positive for coercivity, got {tail_slope}"
            )));
        }
        Ok(Self {
            curve: PiecewiseLinear::new(radii, values, tail_slope)?,
        })
    }

    /// Builds a profile whose knots are exactly the breakpoints
    /// `0 = s_0 < s_1 < … < s_{2m}`, checking the alternating rise/fall pattern.
    pub fn from_breakpoints(breakpoints: Vec<f64>, values: Vec<f64>, tail_slope: f64) -> Result<Self> {
        let profile = Self::new(breakpoints, values, tail_slope)?;
        if profile.curve.radii.len() % 2 == 0 {
            return Err(Error::Structural(format!(
                "expected an odd number 2m+1 of breakpoints, got {}",
                profile.curve.radii.len()
            )));
        }
        for (k, s) in profile.curve.slopes.iter().enumerate() {
            let rising = k % 2 == 0;
            if (rising && *s <= 0.0) || (!rising && *s >= 0.0) {
                return Err(Error::Structural(format!(
                    "segment [{}, {}] should be strictly {}",
                    profile.curve.radii[k],
                    profile.curve.radii[k + 1],
                    if rising { "increasing" } else { "decreasing" }
                )));
            }
        }
        Ok(profile)
    }

    pub fn curve(&self) -> &PiecewiseLinear {
        &self.curve
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        self.curve.eval(r)
    }

    pub fn tail_slope(&self) -> f64 {
        self.curve.tail_slope
    }

    pub fn has_flat_segments(&self) -> bool {
        self.curve.slopes.iter().any(|s| *s == 0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.curve.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn runs(&self) -> Vec<Run> {
        let slopes = &self.curve.slopes;
        // Flat segments join the next strictly monotone segment; trailing
        // flats join the (increasing) tail.
        let mut dirs = vec![Orientation::Increasing; slopes.len()];
        let mut next = Orientation::Increasing;
        for k in (0..slopes.len()).rev() {
            if slopes[k] > 0.0 {
                next = Orientation::Increasing;
            } else if slopes[k] < 0.0 {
                next = Orientation::Decreasing;
            }
            dirs[k] = next;
        }
        let mut runs = Vec::new();
        let mut start = 0;
        for k in 1..=dirs.len() {
            if k == dirs.len() || dirs[k] != dirs[start] {
                if k == dirs.len() && dirs[start] == Orientation::Increasing {
                    break;
                }
                runs.push(Run {
                    start,
                    end: Some(k),
                    orientation: dirs[start],
                });
                start = k;
            }
        }
        runs.push(Run {
            start,
            end: None,
            orientation: Orientation::Increasing,
        });
        runs
    }

    /// True when the profile falls immediately from `r = 0`.
    pub fn leading_decreasing(&self) -> bool {
        self.runs()[0].orientation == Orientation::Decreasing
    }

    /// Breakpoints `s_0, …, s_{2m}`; `s_1 = s_0 = 0` for a leading fall.
    pub fn breakpoints(&self) -> Vec<f64> {
        let radii = &self.curve.radii;
        let mut s = vec![0.0];
        let runs = self.runs();
        if runs[0].orientation == Orientation::Decreasing {
            s.push(0.0);
        }
        for run in &runs {
            if let Some(end) = run.end {
                s.push(radii[end]);
            }
        }
        s
    }

    /// Profile values at the breakpoints.
    pub fn breakpoint_values(&self) -> Vec<f64> {
        self.breakpoints().into_iter().map(|s| self.eval(s)).collect()
    }

    /// Number `m` of falling runs.
    pub fn well_count(&self) -> usize {
        (self.breakpoints().len() - 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_well() -> RadialProfile {
        RadialProfile::new(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 1.0], 2.0).unwrap()
    }

    #[test]
    fn knots_are_reproduced_exactly() {
        let p = ring_well();
        for (r, v) in p.curve().radii().iter().zip(p.curve().values()) {
            assert_eq!(p.eval(*r), *v);
        }
        assert_eq!(p.eval(0.25), 1.0);
        assert_eq!(p.eval(3.0), 5.0);
    }

    #[test]
    fn breakpoints_of_ring_well() {
        let p = ring_well();
        assert_eq!(p.breakpoints(), vec![0.0, 0.5, 1.0]);
        assert_eq!(p.breakpoint_values(), vec![0.0, 2.0, 1.0]);
        assert_eq!(p.well_count(), 1);
        assert!(!p.leading_decreasing());
    }

    #[test]
    fn leading_fall_gives_degenerate_first_breakpoint() {
        let psi = RadialProfile::new(vec![0.0, 1.0], vec![1.0, 0.0], 2.0).unwrap();
        assert!(psi.leading_decreasing());
        assert_eq!(psi.breakpoints(), vec![0.0, 0.0, 1.0]);
        assert_eq!(psi.well_count(), 1);
    }

    #[test]
    fn flats_merge_with_following_run() {
        // max{φ, 1} for the ring-well profile
        let p = RadialProfile::new(vec![0.0, 0.25, 0.5, 1.0], vec![1.0, 1.0, 2.0, 1.0], 2.0).unwrap();
        assert!(p.has_flat_segments());
        assert_eq!(p.breakpoints(), vec![0.0, 0.5, 1.0]);
        // plateau profile from the quasiconvex envelope: a single rising run
        let q = RadialProfile::new(vec![0.0, 0.5, 1.5], vec![0.0, 2.0, 2.0], 2.0).unwrap();
        assert_eq!(q.breakpoints(), vec![0.0]);
    }

    #[test]
    fn slope_bounds() {
        let p = ring_well();
        assert_eq!(p.curve().max_abs_slope(), 4.0);
        assert_eq!(p.curve().max_abs_slope_within(0.2), 4.0);
        let q = RadialProfile::new(vec![0.0, 1.0], vec![0.0, 1.0], 3.0).unwrap();
        assert_eq!(q.curve().max_abs_slope_within(0.5), 1.0);
        assert_eq!(q.curve().max_abs_slope_within(2.0), 3.0);
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(RadialProfile::new(vec![0.1], vec![0.0], 1.0).is_err());
        assert!(RadialProfile::new(vec![0.0, 0.0], vec![0.0, 1.0], 1.0).is_err());
        assert!(RadialProfile::new(vec![0.0], vec![0.0], 0.0).is_err());
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![0.0], 1.0).is_err());
    }

    #[test]
    fn from_breakpoints_checks_alternation() {
        assert!(RadialProfile::from_breakpoints(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 1.0], 2.0).is_ok());
        let err = RadialProfile::from_breakpoints(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 3.0], 2.0);
        assert!(matches!(err, Err(Error::Structural(_))));
        let err = RadialProfile::from_breakpoints(vec![0.0, 0.5], vec![0.0, 2.0], 2.0);
        assert!(matches!(err, Err(Error::Structural(_))));
    }
}
