//! Marching-squares level curves of 2-D tables.
//!
//! Nodes strictly above the level count as "high". Crossings are placed by
//! linear interpolation along cell edges, and a saddle cell is split according
//! to whether the mean of its four corners lies above the level. Cells touching
//! an unconverged node are skipped.

use std::collections::HashMap;

use effham::effective::EffectiveTable;
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourSet {
    pub level: f64,
    /// Each polyline is a list of `[p1, p2]` vertices; closed loops repeat
    /// their first vertex at the end.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

/// Cell edge: `(horizontal, i, j)` joins node `(i, j)` to `(i+1, j)` when
/// horizontal, to `(i, j+1)` otherwise.
type Edge = (bool, usize, usize);

struct Field<'a> {
    table: &'a EffectiveTable,
    n: usize,
}

impl Field<'_> {
    fn z(&self, i: usize, j: usize) -> f64 {
        let k = j * self.n + i;
        if self.table.converged[k] {
            self.table.values[k]
        } else {
            f64::NAN
        }
    }

    fn point(&self, e: Edge, level: f64) -> [f64; 2] {
        let (h, i, j) = e;
        let (i2, j2) = if h { (i + 1, j) } else { (i, j + 1) };
        let (za, zb) = (self.z(i, j), self.z(i2, j2));
        let t = (level - za) / (zb - za);
        let pg = self.table.pgrid;
        let (xa, ya, xb, yb) = (pg.coord(i), pg.coord(j), pg.coord(i2), pg.coord(j2));
        [xa + t * (xb - xa), ya + t * (yb - ya)]
    }
}

fn cell_segments(f: &Field, i: usize, j: usize, level: f64, out: &mut Vec<(Edge, Edge)>) {
    let z = [f.z(i, j), f.z(i + 1, j), f.z(i + 1, j + 1), f.z(i, j + 1)];
    if z.iter().any(|v| v.is_nan()) {
        return;
    }
    let high = z.map(|v| v > level);
    // edges between consecutive corners a→b→c→d→a
    let edges: [Edge; 4] = [(true, i, j), (false, i + 1, j), (true, i, j + 1), (false, i, j)];
    let crossing: Vec<usize> = (0..4).filter(|&e| high[e] != high[(e + 1) % 4]).collect();
    match crossing.len() {
        2 => out.push((edges[crossing[0]], edges[crossing[1]])),
        4 => {
            let center_high = z.iter().sum::<f64>() / 4.0 > level;
            // cut off each corner whose state differs from the centre's
            for c in 0..4 {
                if high[c] != center_high {
                    out.push((edges[(c + 3) % 4], edges[c]));
                }
            }
        }
        _ => {}
    }
}

fn chain(segments: &[(Edge, Edge)], f: &Field, level: f64) -> Vec<Vec<[f64; 2]>> {
    let mut at: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        at.entry(*a).or_default().push(s);
        at.entry(*b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let walk = |start: usize, from: Edge, used: &mut Vec<bool>| {
        let mut edges = vec![from];
        let (mut seg, mut cur) = (start, from);
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == cur { b } else { a };
            edges.push(next);
            cur = next;
            match at[&cur].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        edges.iter().map(|&e| f.point(e, level)).collect::<Vec<_>>()
    };
    // open polylines first, starting from their boundary ends
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        let (a, b) = segments[s];
        if at[&a].len() == 1 {
            lines.push(walk(s, a, &mut used));
        } else if at[&b].len() == 1 {
            lines.push(walk(s, b, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            lines.push(walk(s, segments[s].0, &mut used));
        }
    }
    lines
}

/// Level curves of a 2-D table. A level outside the table's range yields an
/// empty set of polylines.
pub fn contours(table: &EffectiveTable, levels: &[f64]) -> Result<Vec<ContourSet>> {
    if table.pgrid.dim() != 2 {
        return Err(CliError::Core(effham::Error::DimensionMismatch {
            expected: 2,
            got: table.pgrid.dim(),
        }));
    }
    let n = table.pgrid.samples();
    let f = Field { table, n };
    Ok(levels
        .iter()
        .map(|&level| {
            let mut segments = Vec::new();
            for j in 0..n.saturating_sub(1) {
                for i in 0..n - 1 {
                    cell_segments(&f, i, j, level, &mut segments);
                }
            }
            ContourSet {
                level,
                polylines: chain(&segments, &f, level),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use effham::diagnose::f_infinity;
    use effham::effective::{PGrid, Provenance};

    fn table(samples: usize, radius: f64, f: impl Fn(&[f64]) -> f64) -> EffectiveTable {
        EffectiveTable::from_fn(PGrid::new(2, radius, samples).unwrap(), Provenance::Direct, f)
    }

    #[test]
    fn plane_gives_one_vertical_line() {
        let t = table(11, 1.0, |p| p[0]);
        let c = contours(&t, &[0.0]).unwrap();
        assert_eq!(c[0].polylines.len(), 1);
        let line = &c[0].polylines[0];
        assert_eq!(line.len(), 11);
        assert!(line.iter().all(|v| v[0] == 0.0));
        let ys: Vec<f64> = line.iter().map(|v| v[1]).collect();
        assert!(ys.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn out_of_range_level_is_empty() {
        let t = table(5, 1.0, |p| p[0]);
        let c = contours(&t, &[5.0, -5.0]).unwrap();
        assert!(c.iter().all(|s| s.polylines.is_empty()));
    }

    #[test]
    fn f_infinity_half_level_is_two_loops() {
        let t = table(41, 2.0, |p| f_infinity(p).unwrap());
        let c = contours(&t, &[0.5]).unwrap();
        let loops = &c[0].polylines;
        assert_eq!(loops.len(), 2);
        let mut centers: Vec<f64> = loops
            .iter()
            .map(|l| {
                assert_eq!(l.first(), l.last());
                for v in l {
                    assert!((f_infinity(v).unwrap() - 0.5).abs() < 1e-12);
                }
                l.iter().map(|v| v[0]).sum::<f64>() / l.len() as f64
            })
            .collect();
        centers.sort_by(f64::total_cmp);
        assert!((centers[0] + 1.0).abs() < 0.05 && (centers[1] - 1.0).abs() < 0.05, "{centers:?}");
    }

    #[test]
    fn saddle_cell_segments() {
        let pg = PGrid::new(2, 1.0, 3).unwrap();
        let mut t = EffectiveTable::constant(pg, 0.0);
        for (i, j) in [(0, 0), (1, 1)] {
            t.values[pg.ravel(&[i, j])] = 1.0;
        }
        let f = Field { table: &t, n: 3 };
        let mut segs = Vec::new();
        // average 0.5 above level 0.4: high corners connect, lows are cut off
        cell_segments(&f, 0, 0, 0.4, &mut segs);
        assert_eq!(segs, vec![((true, 0, 0), (false, 1, 0)), ((true, 0, 1), (false, 0, 0))]);
        segs.clear();
        // average below level 0.6: highs are isolated
        cell_segments(&f, 0, 0, 0.6, &mut segs);
        assert_eq!(segs, vec![((false, 0, 0), (true, 0, 0)), ((false, 1, 0), (true, 0, 1))]);
    }

    #[test]
    fn unconverged_cells_are_skipped() {
        let mut t = table(5, 1.0, |p| p[0]);
        for k in 0..t.len() {
            t.converged[k] = false;
        }
        assert!(contours(&t, &[0.1]).unwrap()[0].polylines.is_empty());
    }

    #[test]
    fn one_dimensional_tables_are_rejected() {
        let t = EffectiveTable::constant(PGrid::new(1, 1.0, 5).unwrap(), 0.0);
        assert!(contours(&t, &[0.0]).is_err());
    }
}
