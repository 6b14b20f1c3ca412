use super::polygon::strip_collinear;
use super::{orient, ConvexPolygon, Orientation, Point2, SimplePolygon};

fn in_triangle(a: Point2, b: Point2, c: Point2, p: Point2) -> bool {
    orient(a, b, p) != Orientation::Cw && orient(b, c, p) != Orientation::Cw && orient(c, a, p) != Orientation::Cw
}

/// Ear-clipping triangulation; triangles are CCW vertex index triples.
pub fn triangulate(p: &SimplePolygon) -> Vec<[usize; 3]> {
    let v = p.vertices();
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len().saturating_sub(2));
    let mut guard = 0;
    while idx.len() > 3 && guard < 4 * v.len() * v.len() {
        guard += 1;
        let n = idx.len();
        let mut clipped = false;
        for i in 0..n {
            let (ia, ib, ic) = (idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]);
            let (a, b, c) = (v[ia], v[ib], v[ic]);
            match orient(a, b, c) {
                Orientation::Cw => continue,
                Orientation::Collinear => {
                    // zero-area spike or straight vertex: drop without a triangle
                    if (a - b).dot(c - b) < 0.0 {
                        idx.remove(i);
                        clipped = true;
                        break;
                    }
                    continue;
                }
                Orientation::Ccw => {}
            }
            let blocked = idx.iter().any(|&j| {
                j != ia && j != ib && j != ic
                    && !v[j].approx_eq(a, 0.0)
                    && !v[j].approx_eq(b, 0.0)
                    && !v[j].approx_eq(c, 0.0)
                    && in_triangle(a, b, c, v[j])
            });
            if !blocked {
                tris.push([ia, ib, ic]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            log::warn!("ear clipping stalled with {} vertices left", idx.len());
            break;
        }
    }
    if idx.len() == 3 && orient(v[idx[0]], v[idx[1]], v[idx[2]]) == Orientation::Ccw {
        tris.push([idx[0], idx[1], idx[2]]);
    }
    tris
}

fn ring_convex(v: &[Point2], ring: &[usize]) -> bool {
    let n = ring.len();
    (0..n).all(|i| orient(v[ring[(i + n - 1) % n]], v[ring[i]], v[ring[(i + 1) % n]]) != Orientation::Cw)
}

/// Joins `p` and `q` across their shared edge, if they have one.
fn merge_rings(p: &[usize], q: &[usize]) -> Option<Vec<usize>> {
    let n = p.len();
    let m = q.len();
    for i in 0..n {
        let (a, b) = (p[i], p[(i + 1) % n]);
        for j in 0..m {
            if q[j] == b && q[(j + 1) % m] == a {
                let mut out = Vec::with_capacity(n + m - 2);
                // p from b around to a
                for k in 0..n {
                    out.push(p[(i + 1 + k) % n]);
                }
                // q strictly after a up to strictly before b
                for k in 2..m {
                    out.push(q[(j + k) % m]);
                }
                return Some(out);
            }
        }
    }
    None
}

/// Hertel–Mehlhorn convex decomposition.
///
/// A convex input comes back as a single piece.
pub fn convex_decomposition(p: &SimplePolygon) -> Vec<ConvexPolygon> {
    if let Some(c) = p.to_convex() {
        return vec![c];
    }
    let v = p.vertices();
    let mut pieces: Vec<Vec<usize>> = triangulate(p).into_iter().map(|t| t.to_vec()).collect();
    loop {
        let mut merged_any = false;
        'outer: for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                if let Some(m) = merge_rings(&pieces[i], &pieces[j]) {
                    if ring_convex(v, &m) {
                        pieces[i] = m;
                        pieces.swap_remove(j);
                        merged_any = true;
                        break 'outer;
                    }
                }
            }
        }
        if !merged_any {
            break;
        }
    }
    pieces
        .into_iter()
        .map(|r| ConvexPolygon::from_ccw_unchecked(strip_collinear(&r.iter().map(|&i| v[i]).collect::<Vec<_>>())))
        .collect()
}
