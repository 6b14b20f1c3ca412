//! Starshaped hull of a simple polygon with a specified kernel.

use super::envelope::star_envelope;
use super::{is_starshaped_wrt, KernelSpec};
use crate::geom::{
    convex_decomposition, convex_hull, eps_for, orient, ConvexPolygon, Orientation, Point2, Segment, SimplePolygon,
    Vector2,
};
use crate::{Error, Result};

/// How a [`StarPolygon`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullSource {
    /// Direct output of the vertex sweep, accepted by post-validation.
    Sweep,
    /// Radial envelope of `CH(C_j ∪ K)` over convex parts `C_j`.
    Envelope,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarPolygon {
    pub vertices: SimplePolygon,
    pub kernel_spec: KernelSpec,
    pub source: HullSource,
}

/// Sorted parameters in `[0, tmax]` where `a + t·d` meets the polygon boundary.
fn boundary_params(p: &SimplePolygon, a: Point2, d: Vector2, tmax: f64) -> Vec<f64> {
    let far = if tmax.is_finite() {
        tmax
    } else {
        let bb = p.bbox();
        let reach = bb.diameter() + bb.center().dist(a);
        2.0 * reach / d.norm() + 1.0
    };
    let s = Segment::new(a, a + d * far);
    let mut ts = vec![0.0];
    for e in p.edges() {
        if let Some((t, _, _)) = s.intersect(&e) {
            ts.push(t * far);
        }
        // collinear overlap reports only one end; add both edge ends when on the line
        if orient(s.a, s.b, e.a) == Orientation::Collinear && orient(s.a, s.b, e.b) == Orientation::Collinear {
            for q in [e.a, e.b] {
                let t = (q - a).dot(d) / d.norm2();
                if t >= 0.0 && t <= far {
                    ts.push(t);
                }
            }
        }
    }
    ts.push(far);
    ts.sort_by(f64::total_cmp);
    let tol = eps_for(far * d.norm()) / d.norm();
    ts.dedup_by(|b, a| (*b - *a).abs() <= tol);
    ts
}

fn interior_margin(p: &SimplePolygon) -> f64 {
    10.0 * p.tolerance()
}

/// Whether the open ray from `a` along `d` passes through the interior.
fn ray_hits_interior(p: &SimplePolygon, a: Point2, d: Vector2) -> bool {
    if d.norm2() == 0.0 {
        return false;
    }
    let ts = boundary_params(p, a, d, f64::INFINITY);
    let m = interior_margin(p);
    ts.windows(2).any(|w| p.contains_strict(a + d * ((w[0] + w[1]) * 0.5), m))
}

/// Interior intervals of the closed segment `a -> b` as parameter pairs.
fn segment_interior_intervals(p: &SimplePolygon, a: Point2, b: Point2) -> Vec<(f64, f64)> {
    let d = b - a;
    if d.norm2() == 0.0 {
        return Vec::new();
    }
    let ts = boundary_params(p, a, d, 1.0);
    let m = interior_margin(p);
    ts.windows(2)
        .filter(|w| p.contains_strict(a + d * ((w[0] + w[1]) * 0.5), m))
        .map(|w| (w[0], w[1]))
        .collect()
}

fn push_merged(out: &mut Vec<Point2>, q: Point2, tol: f64) {
    if out.last().map_or(true, |l| !l.approx_eq(q, tol)) {
        out.push(q);
    }
}

fn swap_last_two(out: &mut [Point2]) {
    let n = out.len();
    if n >= 2 {
        out.swap(n - 1, n - 2);
    }
}

/// The vertex sweep. `e1 == e2` before the first window is recorded, in which
/// case the window test is skipped.
pub(crate) fn sweep(p: &SimplePolygon, kernel: &[Point2]) -> Vec<Point2> {
    let verts = p.vertices();
    let n = verts.len();
    let tol = p.tolerance();
    // start at the largest x, smallest y among ties; CCW order is kept
    let start = (0..n)
        .max_by(|&i, &j| verts[i].x.total_cmp(&verts[j].x).then(verts[j].y.total_cmp(&verts[i].y)))
        .unwrap_or(0);
    let order: Vec<Point2> = (0..n).map(|i| verts[(start + i) % n]).collect();

    let c = kernel.iter().fold(Point2::default(), |s, &k| s + k) / kernel.len() as f64;
    let mut out: Vec<Point2> = Vec::with_capacity(2 * n);
    let (mut e1, mut e2, mut vbar) = (c, c, c);
    let mut window_set = false;

    for i in 0..n {
        let v = order[i];
        let vprev = order[(i + n - 1) % n];
        if kernel.iter().any(|&k| ray_hits_interior(p, v, v - k)) {
            continue;
        }
        push_merged(&mut out, v, tol);
        let window = Segment::new(e1, e2);
        let crossings: Vec<Point2> = if window_set {
            kernel
                .iter()
                .filter_map(|&k| Segment::new(k, v).intersect(&window).map(|h| h.2))
                .collect()
        } else {
            Vec::new()
        };
        if let Some(&closest) = crossings.iter().min_by(|a, b| a.dist(e2).total_cmp(&b.dist(e2))) {
            e1 = closest;
        } else {
            for (ki, &k) in kernel.iter().enumerate() {
                let others = || kernel.iter().enumerate().filter(move |&(j, _)| j != ki).map(|(_, &q)| q);
                let inside = segment_interior_intervals(p, v, k);
                if let Some(&(s0, _)) = inside.first() {
                    // first point where the walk from v toward k enters the interior
                    let mut u = v.lerp(k, s0);
                    if others().all(|kp| !ray_hits_interior(p, u, v - kp)) {
                        let uv = Segment::new(u, v);
                        if let Some(h) = others().find_map(|kp| Segment::new(kp, vbar).intersect(&uv)) {
                            u = h.2;
                        }
                        push_merged(&mut out, u, tol);
                        e1 = u;
                        e2 = v;
                        window_set = true;
                        if orient(u, v, vprev) == Orientation::Ccw {
                            swap_last_two(&mut out);
                        }
                    }
                } else if others().all(|kp| !ray_hits_interior(p, k, v - kp)) {
                    push_merged(&mut out, k, tol);
                    e1 = k;
                    e2 = v;
                    window_set = true;
                    if orient(k, v, vprev) == Orientation::Ccw {
                        swap_last_two(&mut out);
                    }
                }
            }
        }
        if let Some(&l) = out.last() {
            vbar = l;
        }
    }

    // close the ring with kernel points seen on the wrong side of an edge
    let mut i = 0;
    while i < out.len() {
        let m = out.len();
        let (a, b) = (out[i], out[(i + 1) % m]);
        let hit = kernel.iter().copied().find(|&k| {
            orient(k, a, b) == Orientation::Cw && !out.iter().any(|q| q.approx_eq(k, tol))
        });
        match hit {
            Some(k) => out.insert(i + 1, k),
            None => i += 1,
        }
    }
    while out.len() > 1 && out[0].approx_eq(*out.last().unwrap(), tol) {
        out.pop();
    }
    out
}

/// Exact hull as the radial envelope of `CH(C_j ∪ K)` over the convex parts.
pub(crate) fn envelope_hull(p: &SimplePolygon, k: &KernelSpec) -> Result<SimplePolygon> {
    let c = k.centroid();
    let pieces: Vec<ConvexPolygon> = convex_decomposition(p)
        .into_iter()
        .map(|part| {
            let mut pts = part.vertices().to_vec();
            pts.extend_from_slice(&k.points);
            convex_hull(&pts)
        })
        .collect::<Result<_>>()?;
    star_envelope(&pieces, c).ok_or_else(|| Error::MalformedInput("envelope construction failed".into()))
}

/// Post-validation of a sweep result against the defining properties.
fn accept(p: &SimplePolygon, k: &KernelSpec, cand: &[Point2], exact_area: f64) -> Option<SimplePolygon> {
    if cand.len() < 3 {
        return None;
    }
    let signed: f64 = {
        let n = cand.len();
        0.5 * (0..n).map(|i| cand[i].cross(cand[(i + 1) % n])).sum::<f64>()
    };
    if signed <= 0.0 {
        return None;
    }
    let star = SimplePolygon::new(cand.to_vec()).ok()?;
    let tol = star.tolerance().max(p.tolerance()) * 10.0;
    if !p.vertices().iter().all(|&v| star.contains(v)) {
        return None;
    }
    for e in p.edges() {
        if !star.contains(e.a.lerp(e.b, 0.5)) {
            return None;
        }
        for f in star.edges() {
            if let Some((t, u, _)) = e.intersect(&f) {
                let lt = tol / e.length().max(tol);
                let lu = tol / f.length().max(tol);
                let parallel = orient(e.a, e.b, f.a) == Orientation::Collinear
                    && orient(e.a, e.b, f.b) == Orientation::Collinear;
                if !parallel && t > lt && t < 1.0 - lt && u > lu && u < 1.0 - lu {
                    return None;
                }
            }
        }
    }
    if !k.points.iter().all(|&q| is_starshaped_wrt(&star, q)) {
        return None;
    }
    let mut all = p.vertices().to_vec();
    all.extend_from_slice(&k.points);
    let ch = convex_hull(&all).ok()?;
    if !star.vertices().iter().all(|&v| ch.contains(v)) {
        return None;
    }
    if star.area() > exact_area * (1.0 + 1e-6) + tol {
        return None;
    }
    Some(star)
}

/// Starshaped hull of `p` whose kernel contains `k`.
///
/// The vertex sweep runs first; its output is accepted only if it is simple,
/// contains `p`, has every kernel point in its kernel, stays inside
/// `CH(p ∪ k)` and is no larger than the exact radial envelope. Otherwise the
/// envelope itself is returned.
pub fn sh_kernel_polygon(p: &SimplePolygon, k: &KernelSpec) -> Result<StarPolygon> {
    if !crate::geom::polygon::ring_is_simple(p.vertices()) {
        return Err(Error::MalformedInput("polygon is not simple".into()));
    }
    if k.points.len() < 3 {
        // a singleton or segment kernel has no interior; only the sweep applies
        let cand = sweep(p, &k.points);
        let star = SimplePolygon::new(cand)?;
        if !k.points.iter().all(|&q| is_starshaped_wrt(&star, q)) {
            return Err(Error::MalformedInput("kernel points are not in the hull kernel".into()));
        }
        return Ok(StarPolygon { vertices: star, kernel_spec: k.clone(), source: HullSource::Sweep });
    }
    let exact = envelope_hull(p, k)?;
    let cand = sweep(p, &k.points);
    match accept(p, k, &cand, exact.area()) {
        Some(star) => Ok(StarPolygon { vertices: star, kernel_spec: k.clone(), source: HullSource::Sweep }),
        None => {
            log::debug!("vertex sweep rejected by validation, using the radial envelope");
            Ok(StarPolygon { vertices: exact, kernel_spec: k.clone(), source: HullSource::Envelope })
        }
    }
}
