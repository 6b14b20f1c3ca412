//! Radial envelope of convex pieces that share an interior point.

use crate::geom::{wrap_angle, ConvexPolygon, Point2, Segment, SimplePolygon};

/// Distance from `c` to the boundary of the union along direction `u`.
pub(crate) fn radial_extent(pieces: &[ConvexPolygon], c: Point2, u: Point2) -> f64 {
    pieces
        .iter()
        .filter_map(|p| p.ray_interval(c, u))
        .fold(0.0f64, |m, (_, t1)| m.max(t1))
}

/// Boundary of the union of convex pieces, all of which contain `c` in their
/// interior. The union is starshaped with respect to `c`, so between two
/// consecutive critical directions (piece vertices and edge crossings) its
/// boundary is one straight edge of a single piece.
pub(crate) fn star_envelope(pieces: &[ConvexPolygon], c: Point2) -> Option<SimplePolygon> {
    let mut angles: Vec<f64> = Vec::new();
    let edges: Vec<(usize, Segment)> = pieces
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.edges().map(move |e| (i, e)))
        .collect();
    for (_, e) in &edges {
        angles.push(wrap_angle((e.a - c).angle()));
    }
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            if edges[i].0 == edges[j].0 {
                continue;
            }
            if let Some((_, _, q)) = edges[i].1.intersect(&edges[j].1) {
                if q.dist(c) > 0.0 {
                    angles.push(wrap_angle((q - c).angle()));
                }
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|b, a| (*b - *a).abs() <= 1e-13);
    let mut ring: Vec<Point2> = angles
        .iter()
        .map(|&th| {
            let u = Point2::from_angle(th);
            c + u * radial_extent(pieces, c, u)
        })
        .collect();
    ring = simplify_collinear(ring);
    SimplePolygon::new(ring).ok()
}

/// Drops vertices lying on the segment between their neighbours.
fn simplify_collinear(mut v: Vec<Point2>) -> Vec<Point2> {
    let scale = v.iter().fold(1.0f64, |m, p| m.max(p.magnitude()));
    let tol = 1e-10 * scale;
    let mut i = 0;
    while v.len() > 3 && i < v.len() {
        let n = v.len();
        let a = v[(i + n - 1) % n];
        let b = v[i];
        let c = v[(i + 1) % n];
        if Segment::new(a, c).dist_to(b) <= tol {
            v.remove(i);
            if i > 0 {
                i -= 1;
            }
        } else {
            i += 1;
        }
    }
    v
}
