//! Integer convex hulls of p-lattice index sets and exact row scans over them.

pub(crate) type Pt = (i64, i64);

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise hull without collinear vertices (monotone chain).
///
/// Returns one vertex for a single point and two for a segment.
pub(crate) fn convex_hull(mut pts: Vec<Pt>) -> Vec<Pt> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Pt> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Pt>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.truncate(1);
    }
    hull
}

fn div_floor(n: i64, d: i64) -> i64 {
    n.div_euclid(d)
}

fn div_ceil(n: i64, d: i64) -> i64 {
    -(-n).div_euclid(d)
}

/// Integer column range `[lo, hi]` of the hull's intersection with row `y`,
/// or `None` when the row misses it.
pub(crate) fn row_span(hull: &[Pt], y: i64) -> Option<(i64, i64)> {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    if hull.len() == 1 {
        return (hull[0].1 == y).then_some((hull[0].0, hull[0].0));
    }
    for (i, &a) in hull.iter().enumerate() {
        let b = hull[(i + 1) % hull.len()];
        if a.1 == y {
            lo = lo.min(a.0);
            hi = hi.max(a.0);
        }
        if (a.1 < y && y < b.1) || (b.1 < y && y < a.1) {
            let (mut num, mut den) = (a.0 * (b.1 - a.1) + (y - a.1) * (b.0 - a.0), b.1 - a.1);
            if den < 0 {
                num = -num;
                den = -den;
            }
            lo = lo.min(div_ceil(num, den));
            hi = hi.max(div_floor(num, den));
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Whether `q` lies in the closed hull.
#[cfg(test)]
pub(crate) fn contains(hull: &[Pt], q: Pt) -> bool {
    row_span(hull, q.1).is_some_and(|(lo, hi)| lo <= q.0 && q.0 <= hi)
}

/// Range-maximum queries on each row of a lattice (sparse tables).
pub(crate) struct RowMax {
    rows: Vec<Vec<Vec<f64>>>,
}

impl RowMax {
    pub(crate) fn new(values: &[f64], width: usize) -> Self {
        let rows = values
            .chunks(width)
            .map(|row| {
                let mut levels = vec![row.to_vec()];
                let mut span = 1;
                while 2 * span <= row.len() {
                    let prev = levels.last().expect("level 0 exists");
                    let next = (0..=row.len() - 2 * span)
                        .map(|i| prev[i].max(prev[i + span]))
                        .collect();
                    levels.push(next);
                    span *= 2;
                }
                levels
            })
            .collect();
        Self { rows }
    }

    /// Maximum of row `y` over columns `lo..=hi`.
    pub(crate) fn query(&self, y: usize, lo: usize, hi: usize) -> f64 {
        let len = hi - lo + 1;
        let level = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let t = &self.rows[y][level];
        t[lo].max(t[hi + 1 - (1 << level)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior_and_edge_points() {
        let pts = vec![(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0), (0, 1)];
        let h = convex_hull(pts);
        assert_eq!(h, vec![(0, 0), (2, 0), (2, 2), (0, 2)]);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull(vec![(3, 4), (3, 4)]), vec![(3, 4)]);
        let seg = convex_hull(vec![(0, 0), (2, 2), (1, 1)]);
        assert_eq!(seg, vec![(0, 0), (2, 2)]);
        assert!(contains(&seg, (1, 1)));
        assert!(!contains(&seg, (1, 0)));
        assert_eq!(row_span(&[(5, 0)], 0), Some((5, 5)));
        assert_eq!(row_span(&[(5, 0)], 1), None);
    }

    #[test]
    fn row_span_rounds_inward_exactly() {
        // triangle (0,0), (3,0), (0,3): row 1 spans x in [0, 2]
        let h = convex_hull(vec![(0, 0), (3, 0), (0, 3)]);
        assert_eq!(row_span(&h, 1), Some((0, 2)));
        // thin triangle (0,0), (3,1), (1,3): row 1 spans x in [1/3, 3]
        let h = convex_hull(vec![(0, 0), (3, 1), (1, 3)]);
        assert_eq!(row_span(&h, 1), Some((1, 3)));
        assert_eq!(row_span(&h, 2), Some((1, 2)));
        assert_eq!(row_span(&h, 4), None);
    }

    #[test]
    fn row_max_matches_scan() {
        let values: Vec<f64> = (0..35).map(|i| ((i * 37) % 11) as f64).collect();
        let rm = RowMax::new(&values, 7);
        for y in 0..5 {
            for lo in 0..7 {
                for hi in lo..7 {
                    let scan = values[y * 7 + lo..=y * 7 + hi].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    assert_eq!(rm.query(y, lo, hi), scan);
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn hull_contains_its_points_and_spans_agree(pts in prop::collection::vec((0i64..12, 0i64..12), 1..30)) {
                let h = convex_hull(pts.clone());
                for &p in &pts {
                    prop_assert!(contains(&h, p));
                }
                // every lattice point in a span is a convex combination: check against orientation tests
                for y in 0..12 {
                    for x in 0..12 {
                        let inside = if h.len() >= 3 {
                            (0..h.len()).all(|i| cross(h[i], h[(i + 1) % h.len()], (x, y)) >= 0)
                        } else if h.len() == 2 {
                            cross(h[0], h[1], (x, y)) == 0
                                && x >= h[0].0.min(h[1].0) && x <= h[0].0.max(h[1].0)
                                && y >= h[0].1.min(h[1].1) && y <= h[0].1.max(h[1].1)
                        } else {
                            (x, y) == h[0]
                        };
                        prop_assert_eq!(contains(&h, (x, y)), inside);
                    }
                }
            }
        }
    }
}
