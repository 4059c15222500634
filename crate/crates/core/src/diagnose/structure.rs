//! Evenness, grid quasiconvexity, sublevel-set convexity and flat parts.

use rayon::prelude::*;
use serde::Serialize;

use super::hull::{convex_hull, row_span, Pt, RowMax};
use super::report::{DiagnosticKind, DiagnosticReport, Witness};
use crate::effective::EffectiveTable;
use crate::error::{Error, Result};

/// Default level tolerance for grid quasiconvexity and evenness checks.
pub const DEFAULT_TOLERANCE: f64 = 2e-2;

/// Levels are processed in chunks of this size: hulls grow sequentially
/// within a chunk, then the chunk is scanned in parallel.
const LEVEL_CHUNK: usize = 256;

fn excluded(table: &EffectiveTable) -> usize {
    table.len() - table.converged_count()
}

/// `max |H̄(p) - H̄(-p)|` over node pairs converged on both sides.
pub fn evenness_defect(table: &EffectiveTable, tolerance: f64) -> Result<DiagnosticReport> {
    let pg = table.pgrid;
    if pg.samples() % 2 == 0 {
        return Err(Error::AsymmetricGrid);
    }
    let mut defect: f64 = 0.0;
    let mut witnesses = Vec::new();
    for k in 0..table.len() {
        let m = pg.mirror(k);
        if m < k || !(table.converged[k] && table.converged[m]) {
            continue;
        }
        let d = (table.values[k] - table.values[m]).abs();
        defect = defect.max(d);
        if d > tolerance {
            witnesses.push(Witness {
                p: pg.node(k),
                level: None,
                value: d,
            });
        }
    }
    Ok(DiagnosticReport::new(
        DiagnosticKind::Evenness,
        defect,
        tolerance,
        witnesses,
        excluded(table),
    ))
}

/// Lattice view of a table: integer node coordinates and row maxima with
/// unconverged nodes masked out.
struct Lattice<'a> {
    table: &'a EffectiveTable,
    width: usize,
    rows: usize,
    rowmax: RowMax,
}

impl<'a> Lattice<'a> {
    fn new(table: &'a EffectiveTable) -> Self {
        let width = table.pgrid.samples();
        let rows = if table.pgrid.dim() == 1 { 1 } else { width };
        let masked: Vec<f64> = table
            .values
            .iter()
            .zip(&table.converged)
            .map(|(v, c)| if *c { *v } else { f64::NEG_INFINITY })
            .collect();
        Self {
            table,
            width,
            rows,
            rowmax: RowMax::new(&masked, width),
        }
    }

    fn point(&self, k: usize) -> Pt {
        ((k % self.width) as i64, (k / self.width) as i64)
    }

    /// Largest converged value inside the hull, and the node attaining it.
    fn max_in_hull(&self, hull: &[Pt]) -> Option<(f64, usize)> {
        if hull.is_empty() {
            return None;
        }
        let (ymin, ymax) = hull.iter().fold((i64::MAX, i64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for y in ymin.max(0)..=ymax.min(self.rows as i64 - 1) {
            let Some((lo, hi)) = row_span(hull, y) else { continue };
            let (lo, hi) = (lo.max(0) as usize, hi.min(self.width as i64 - 1) as usize);
            if lo > hi {
                continue;
            }
            let m = self.rowmax.query(y as usize, lo, hi);
            if best.is_none_or(|b| m > b.0) {
                best = Some((m, y as usize, lo, hi));
            }
        }
        let (m, y, lo, hi) = best?;
        let k = (lo..=hi)
            .map(|x| y * self.width + x)
            .find(|&k| self.table.converged[k] && self.table.values[k] == m)?;
        Some((m, k))
    }
}

/// Converged nodes grouped by value, ascending.
fn level_groups(table: &EffectiveTable) -> Vec<(f64, Vec<usize>)> {
    let mut nodes: Vec<usize> = (0..table.len()).filter(|&k| table.converged[k]).collect();
    nodes.sort_by(|&a, &b| table.values[a].total_cmp(&table.values[b]).then(a.cmp(&b)));
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for k in nodes {
        let v = table.values[k];
        match groups.last_mut() {
            Some((mu, ks)) if *mu == v => ks.push(k),
            _ => groups.push((v, vec![k])),
        }
    }
    groups
}

fn level_witness(lat: &Lattice, hull: &[Pt], mu: f64) -> (f64, Option<Witness>) {
    match lat.max_in_hull(hull) {
        Some((m, k)) => {
            let defect = (m - mu).max(0.0);
            let w = Witness {
                p: lat.table.pgrid.node(k),
                level: Some(mu),
                value: m - mu,
            };
            (defect, Some(w))
        }
        None => (0.0, None),
    }
}

/// Grid quasiconvexity: for every distinct converged value `μ`, every node in
/// the convex hull of `{H̄ ≤ μ}` must satisfy `H̄ ≤ μ + tolerance`.
///
/// In one dimension the hull is the index interval spanned by the sublevel
/// set. Hulls are taken over integer node indices, so membership is exact.
pub fn quasiconvexity_check(table: &EffectiveTable, tolerance: f64) -> DiagnosticReport {
    let lat = Lattice::new(table);
    let groups = level_groups(table);
    let mut hull: Vec<Pt> = Vec::new();
    let mut defect: f64 = 0.0;
    let mut witnesses = Vec::new();
    for chunk in groups.chunks(LEVEL_CHUNK) {
        let hulls: Vec<(f64, Vec<Pt>)> = chunk
            .iter()
            .map(|(mu, ks)| {
                let mut pts = std::mem::take(&mut hull);
                pts.extend(ks.iter().map(|&k| lat.point(k)));
                hull = convex_hull(pts);
                (*mu, hull.clone())
            })
            .collect();
        let results: Vec<(f64, Option<Witness>)> = hulls
            .par_iter()
            .map(|(mu, h)| level_witness(&lat, h, *mu))
            .collect();
        for (d, w) in results {
            defect = defect.max(d);
            if d > tolerance {
                witnesses.extend(w);
            }
        }
    }
    DiagnosticReport::new(
        DiagnosticKind::Quasiconvexity,
        defect,
        tolerance,
        witnesses,
        excluded(table),
    )
}

/// Convexity of the single sublevel set `{H̄ ≤ μ}`, in the sense of
/// [`quasiconvexity_check`]. An empty set passes.
pub fn levelset_convexity(table: &EffectiveTable, mu: f64, tolerance: f64) -> DiagnosticReport {
    let lat = Lattice::new(table);
    let pts: Vec<Pt> = (0..table.len())
        .filter(|&k| table.converged[k] && table.values[k] <= mu)
        .map(|k| lat.point(k))
        .collect();
    let (defect, w) = level_witness(&lat, &convex_hull(pts), mu);
    DiagnosticReport::new(
        DiagnosticKind::Levelset,
        defect,
        tolerance,
        w.into_iter().collect(),
        excluded(table),
    )
}

/// Result of [`flat_part`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatPartReport {
    /// Passes when the minimum set is a single node (no flat part).
    pub report: DiagnosticReport,
    /// Converged nodes with `H̄ ≤ min H̄ + value_tolerance`.
    pub nodes: Vec<usize>,
    pub diameter: f64,
    /// Some node of the set has all its lattice neighbours in the set.
    pub has_interior: bool,
}

/// Locates `{H̄ ≤ min H̄ + value_tolerance}` among converged nodes.
///
/// The report's defect is the Euclidean diameter of that set in p-space,
/// checked against tolerance `0`.
pub fn flat_part(table: &EffectiveTable, value_tolerance: f64) -> FlatPartReport {
    let pg = table.pgrid;
    let floor = table.min_value() + value_tolerance;
    let nodes: Vec<usize> = (0..table.len())
        .filter(|&k| table.converged[k] && table.values[k] <= floor)
        .collect();
    let mut member = vec![false; table.len()];
    for &k in &nodes {
        member[k] = true;
    }
    let n = pg.samples();
    let has_interior = nodes.iter().any(|&k| {
        let idx = pg.unravel(k);
        (0..idx.len()).all(|axis| {
            let i = idx[axis];
            if i == 0 || i + 1 == n {
                return false;
            }
            [i - 1, i + 1].iter().all(|&j| {
                let mut nb = idx.clone();
                nb[axis] = j;
                member[pg.ravel(&nb)]
            })
        })
    });
    let lat = Lattice::new(table);
    let hull = convex_hull(nodes.iter().map(|&k| lat.point(k)).collect());
    let coord = |p: Pt| -> Vec<f64> {
        let mut c = vec![pg.coord(p.0 as usize)];
        if pg.dim() == 2 {
            c.push(pg.coord(p.1 as usize));
        }
        c
    };
    let mut diameter: f64 = 0.0;
    for (i, &a) in hull.iter().enumerate() {
        for &b in &hull[i + 1..] {
            let d = coord(a).iter().zip(coord(b)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
            diameter = diameter.max(d);
        }
    }
    let witnesses = nodes
        .iter()
        .map(|&k| Witness {
            p: pg.node(k),
            level: Some(floor),
            value: table.values[k],
        })
        .collect();
    FlatPartReport {
        report: DiagnosticReport::new(DiagnosticKind::FlatPart, diameter, 0.0, witnesses, excluded(table)),
        nodes,
        diameter,
        has_interior,
    }
}
