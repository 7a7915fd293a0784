//! Segmented Lévy area `C^{1,2}`.
//!
//! The trajectory is cut wherever it crosses its chord (the segment from its
//! first to its last point). Each piece starts and ends on the chord line, so
//! its Lévy area is the signed area it encloses with the chord; `C^{1,2}` is
//! the sum of the absolute piece areas.
//!
//! Crossing detection and piece areas are evaluated in coordinates relative
//! to the path's first point, which makes the result independent of where the
//! path sits in the plane.

use crate::exact::{cross, ExactSum};
use crate::path::{total_variation, Path2D, Point};

/// Relative tolerance used to decide whether a vertex lies on the chord.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// A place where the trajectory meets its chord with a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Index of the path segment (`points[segment] -> points[segment + 1]`).
    pub segment: usize,
    /// Position along that segment in `[0, 1)`; `0` means the vertex itself.
    pub fraction: f64,
    pub point: Point,
}

/// The chord has (numerically) zero length, so there is no line to cross.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("degenerate chord: path starts and ends at the same point")]
pub struct DegenerateChord;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedLevyArea {
    pub chord: [Point; 2],
    pub crossings: Vec<Crossing>,
    pub segment_areas: Vec<f64>,
    pub c_value: f64,
    pub total_levy: f64,
}

struct Frame {
    rel: Vec<Point>,
    chord_len: f64,
}

fn relative_frame(path: &Path2D) -> Frame {
    let o = path.start();
    let rel: Vec<Point> = path
        .points()
        .iter()
        .map(|p| [p[0] - o[0], p[1] - o[1]])
        .collect();
    let c = rel[rel.len() - 1];
    Frame {
        chord_len: c[0].hypot(c[1]),
        rel,
    }
}

fn is_degenerate(path: &Path2D, chord_len: f64, tolerance: f64) -> bool {
    chord_len <= tolerance * total_variation(path)
}

/// Cuts in the relative frame, before translating back to absolute points.
fn crossings_relative(frame: &Frame, tolerance: f64) -> Vec<Crossing> {
    let rel = &frame.rel;
    let n = rel.len() - 1;
    let c = rel[n];
    let eps = tolerance * frame.chord_len;

    // signed perpendicular distance to the chord line; endpoints are on it
    let dist: Vec<f64> = rel
        .iter()
        .enumerate()
        .map(|(k, q)| {
            if k == 0 || k == n {
                0.0
            } else {
                cross(c[0], q[1], c[1], q[0]) / frame.chord_len
            }
        })
        .collect();
    let side = |d: f64| -> i8 {
        if d.abs() <= eps {
            0
        } else if d > 0.0 {
            1
        } else {
            -1
        }
    };
    let signs: Vec<i8> = dist.iter().map(|&d| side(d)).collect();

    let mut out: Vec<Crossing> = Vec::new();
    // first on-chord vertex of the current run, with the side it was reached from
    let mut run: Option<(usize, i8)> = None;
    for k in 1..n {
        let (prev, cur) = (signs[k - 1], signs[k]);
        if cur == 0 {
            if prev != 0 {
                run = Some((k, prev));
            }
            continue;
        }
        if prev == -cur {
            let t = dist[k - 1] / (dist[k - 1] - dist[k]);
            let (a, b) = (rel[k - 1], rel[k]);
            out.push(Crossing {
                segment: k - 1,
                fraction: t,
                point: [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
            });
        } else if let Some((v, from)) = run {
            if from == -cur {
                out.push(Crossing {
                    segment: v,
                    fraction: 0.0,
                    point: rel[v],
                });
            }
        }
        run = None;
    }

    // numerically coincident cuts would leave an empty piece
    out.dedup_by(|later, kept| {
        (later.point[0] - kept.point[0]).hypot(later.point[1] - kept.point[1]) < eps
    });
    out
}

fn to_absolute(origin: Point, mut crossings: Vec<Crossing>) -> Vec<Crossing> {
    for c in &mut crossings {
        c.point = [c.point[0] + origin[0], c.point[1] + origin[1]];
    }
    crossings
}

/// Interior points where the path crosses its chord, in path order.
pub fn chord_crossings(path: &Path2D, tolerance: f64) -> Result<Vec<Crossing>, DegenerateChord> {
    let frame = relative_frame(path);
    if is_degenerate(path, frame.chord_len, tolerance) {
        return Err(DegenerateChord);
    }
    Ok(to_absolute(
        path.start(),
        crossings_relative(&frame, tolerance),
    ))
}

/// Twice the Lévy area swept by edge `k`, relative to the first point, exactly.
fn edge_area(points: &[Point], k: usize) -> ExactSum {
    let (o, a, b) = (points[0], points[k], points[k + 1]);
    let mut e = ExactSum::new();
    e.add_product(a[0], b[1]);
    e.add_product(-a[1], b[0]);
    e.add_product(o[0], a[1]);
    e.add_product(-o[1], a[0]);
    e.add_product(-o[0], b[1]);
    e.add_product(o[1], b[0]);
    e
}

/// Splits the path at `cuts` and returns twice each piece's Lévy area.
///
/// Pieces are kept as exact expansions, so they add up to the whole-path
/// area without rounding. An interpolated cut at fraction `t` hands `t` of
/// its edge to the earlier piece and the rest to the later one.
fn piece_areas(points: &[Point], cuts: &[Crossing]) -> Vec<ExactSum> {
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    let mut cur = ExactSum::new();
    let mut next = cuts.iter().peekable();
    for k in 0..points.len() - 1 {
        while next
            .next_if(|c| c.segment == k && c.fraction == 0.0)
            .is_some()
        {
            pieces.push(std::mem::take(&mut cur));
        }
        let e = edge_area(points, k);
        if let Some(c) = next.next_if(|c| c.segment == k) {
            cur.absorb_scaled(&e, c.fraction);
            pieces.push(std::mem::take(&mut cur));
            cur.absorb(&e, 1.0);
            cur.absorb_scaled(&e, -c.fraction);
        } else {
            cur.absorb(&e, 1.0);
        }
    }
    pieces.push(cur);
    pieces
}

/// Segmented Lévy area `C^{1,2}` of `path`.
///
/// A closed loop (degenerate chord) is treated as a single piece, giving
/// `C = |A|`.
pub fn segmented_levy(path: &Path2D, tolerance: f64) -> SegmentedLevyArea {
    let frame = relative_frame(path);
    let chord = [path.start(), path.end()];
    let cuts = if is_degenerate(path, frame.chord_len, tolerance) {
        Vec::new()
    } else {
        crossings_relative(&frame, tolerance)
    };
    let pieces = piece_areas(path.points(), &cuts);

    let mut total = ExactSum::new();
    let mut abs_total = ExactSum::new();
    let mut segment_areas = Vec::with_capacity(pieces.len());
    for p in &pieces {
        let v = p.value();
        total.absorb(p, 1.0);
        abs_total.absorb(p, if v < 0.0 { -1.0 } else { 1.0 });
        segment_areas.push(0.5 * v);
    }
    SegmentedLevyArea {
        chord,
        crossings: to_absolute(path.start(), cuts),
        total_levy: 0.5 * total.value(),
        c_value: 0.5 * abs_total.value(),
        segment_areas,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(points: &[Point]) -> Path2D {
        Path2D::new(points.to_vec()).unwrap()
    }

    fn s_path() -> Path2D {
        path(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [1.0, 2.0], [2.0, 2.0]])
    }

    #[test]
    fn l_path_is_one_sided() {
        let l = path(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]);
        assert!(chord_crossings(&l, DEFAULT_TOLERANCE).unwrap().is_empty());
        let seg = segmented_levy(&l, DEFAULT_TOLERANCE);
        assert_eq!(seg.segment_areas, vec![0.5]);
        assert_eq!((seg.c_value, seg.total_levy), (0.5, 0.5));
    }

    #[test]
    fn s_path_crosses_at_vertex() {
        let cr = chord_crossings(&s_path(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(
            cr,
            vec![Crossing {
                segment: 2,
                fraction: 0.0,
                point: [1.0, 1.0]
            }]
        );
        let seg = segmented_levy(&s_path(), DEFAULT_TOLERANCE);
        assert_eq!(seg.segment_areas, vec![0.5, -0.5]);
        assert_eq!(seg.total_levy, 0.0);
        assert_eq!(seg.c_value, 1.0);
    }

    #[test]
    fn alternating_sides_cross_at_midpoints() {
        let p = path(&[[0.0, 0.0], [1.0, 1.0], [2.0, -1.0], [3.0, 1.0], [4.0, 0.0]]);
        let cr = chord_crossings(&p, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(cr.len(), 2);
        assert_eq!(
            (cr[0].segment, cr[0].fraction, cr[0].point),
            (1, 0.5, [1.5, 0.0])
        );
        assert_eq!(
            (cr[1].segment, cr[1].fraction, cr[1].point),
            (2, 0.5, [2.5, 0.0])
        );
        let seg = segmented_levy(&p, DEFAULT_TOLERANCE);
        // triangles of base 1.5, 1, 1.5 and height 1, below/above/below in CCW sense
        assert_eq!(seg.segment_areas, vec![-0.75, 0.5, -0.75]);
        assert_eq!(seg.c_value, 2.0);
        assert_eq!(seg.total_levy, -1.0);
    }

    #[test]
    fn tangent_vertex_is_not_a_crossing() {
        // touches the chord at (2,0) and returns to the same side
        let p = path(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [3.0, 1.0], [4.0, 0.0]]);
        assert!(chord_crossings(&p, DEFAULT_TOLERANCE).unwrap().is_empty());
    }

    #[test]
    fn run_along_chord_between_opposite_sides_cuts_once() {
        let p = path(&[
            [0.0, 0.0],
            [1.0, 1.0],
            [2.0, 0.0],
            [3.0, 0.0],
            [4.0, -1.0],
            [5.0, 0.0],
        ]);
        let cr = chord_crossings(&p, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(cr.len(), 1);
        assert_eq!(cr[0].point, [2.0, 0.0]);
        let seg = segmented_levy(&p, DEFAULT_TOLERANCE);
        assert_eq!(seg.segment_areas.len(), 2);
        assert_eq!(seg.c_value, 2.0);
    }

    #[test]
    fn affine_path_has_zero_c() {
        let p = path(&[[0.0, 1.0], [0.5, 2.0], [0.25, 1.5], [2.0, 5.0]]);
        let seg = segmented_levy(&p, DEFAULT_TOLERANCE);
        assert!(seg.c_value < 1e-12);
    }

    #[test]
    fn closed_loop_falls_back_to_abs_levy() {
        let sq = path(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(
            chord_crossings(&sq, DEFAULT_TOLERANCE),
            Err(DegenerateChord)
        );
        let seg = segmented_levy(&sq, DEFAULT_TOLERANCE);
        assert_eq!(seg.c_value, 1.0);
        assert_eq!(seg.segment_areas, vec![1.0]);
        let constant = path(&[[3.0, 3.0], [3.0, 3.0]]);
        assert_eq!(segmented_levy(&constant, DEFAULT_TOLERANCE).c_value, 0.0);
    }

    #[test]
    fn crossing_points_are_reported_in_absolute_coordinates() {
        let p = path(&[[10.0, 5.0], [11.0, 6.0], [12.0, 4.0], [13.0, 5.0]]);
        let cr = chord_crossings(&p, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(cr.len(), 1);
        assert_eq!(cr[0].point, [11.5, 5.0]);
    }
}
