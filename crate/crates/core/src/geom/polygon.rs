use super::{eps_for, orient, Aabb, Orientation, Point2, Ray, Segment, Vector2, EPS};
use crate::{Error, Result};

/// A simple polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point2>,
}

/// A convex polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

fn magnitude(pts: &[Point2]) -> f64 {
    pts.iter().fold(0.0f64, |m, p| m.max(p.magnitude()))
}

fn signed_area(pts: &[Point2]) -> f64 {
    let n = pts.len();
    let mut a = 0.0;
    for i in 0..n {
        a += pts[i].cross(pts[(i + 1) % n]);
    }
    a * 0.5
}

fn centroid(pts: &[Point2]) -> Point2 {
    let n = pts.len();
    let o = pts[0];
    let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let p = pts[i] - o;
        let q = pts[(i + 1) % n] - o;
        let w = p.cross(q);
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if a2.abs() <= f64::MIN_POSITIVE {
        let s = pts.iter().fold(Point2::default(), |s, &p| s + p);
        return s / n as f64;
    }
    o + Point2::new(cx, cy) / (3.0 * a2)
}

fn dedup_ring(pts: Vec<Point2>) -> Vec<Point2> {
    let tol = eps_for(magnitude(&pts));
    let mut out: Vec<Point2> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().map_or(true, |q| !q.approx_eq(p, tol)) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].approx_eq(*out.last().unwrap(), tol) {
        out.pop();
    }
    out
}

/// True if the closed ring has no self-intersections.
pub(crate) fn ring_is_simple(pts: &[Point2]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let seg = |i: usize| Segment::new(pts[i], pts[(i + 1) % n]);
    let bb: Vec<Aabb> = (0..n)
        .map(|i| Aabb::from_points([pts[i], pts[(i + 1) % n]]).expanded(eps_for(magnitude(pts))))
        .collect();
    for i in 0..n {
        // adjacent edges may only fold back onto each other
        let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        if orient(a, b, c) == Orientation::Collinear && (a - b).dot(c - b) > 0.0 {
            return false;
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if !bb[i].overlaps(&bb[j]) {
                continue;
            }
            if seg(i).intersect(&seg(j)).is_some() {
                return false;
            }
        }
    }
    true
}

impl SimplePolygon {
    /// Validates and normalizes the vertex ring to counter-clockwise order.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::MalformedInput("polygon vertex is not finite".into()));
        }
        let mut v = dedup_ring(vertices);
        if v.len() < 3 {
            return Err(Error::MalformedInput("polygon needs at least 3 distinct vertices".into()));
        }
        let area = signed_area(&v);
        let scale = magnitude(&v).max(1.0);
        if area.abs() <= EPS * scale * scale {
            return Err(Error::MalformedInput("polygon has zero area".into()));
        }
        if area < 0.0 {
            v.reverse();
        }
        if !ring_is_simple(&v) {
            return Err(Error::MalformedInput("polygon is self-intersecting".into()));
        }
        Ok(Self { vertices: v })
    }

    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Point2 {
        centroid(&self.vertices)
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(self.vertices.iter().copied())
    }

    pub fn tolerance(&self) -> f64 {
        eps_for(magnitude(&self.vertices))
    }

    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.edges().fold(f64::INFINITY, |d, e| d.min(e.dist_to(p)))
    }

    /// Crossing-number test ignoring the boundary.
    fn crossing_inside(&self, p: Point2) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[j]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Closed containment (boundary within tolerance counts).
    pub fn contains(&self, p: Point2) -> bool {
        self.boundary_distance(p) <= self.tolerance().max(eps_for(p.magnitude())) || self.crossing_inside(p)
    }

    /// Interior containment at least `margin` away from the boundary.
    pub fn contains_strict(&self, p: Point2, margin: f64) -> bool {
        self.crossing_inside(p) && self.boundary_distance(p) > margin.max(self.tolerance())
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            orient(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]) != Orientation::Cw
        })
    }

    /// Indices of reflex vertices.
    pub fn reflex_vertices(&self) -> Vec<usize> {
        let n = self.vertices.len();
        (0..n)
            .filter(|&i| orient(self.vertices[(i + n - 1) % n], self.vertices[i], self.vertices[(i + 1) % n]) == Orientation::Cw)
            .collect()
    }

    pub fn to_convex(&self) -> Option<ConvexPolygon> {
        self.is_convex().then(|| ConvexPolygon::from_ccw_unchecked(strip_collinear(&self.vertices)))
    }

    /// `n` points spread along the boundary by arc length.
    pub fn sample_boundary(&self, n: usize) -> Vec<Point2> {
        sample_ring(&self.vertices, n)
    }

    pub fn translated(&self, d: Vector2) -> SimplePolygon {
        SimplePolygon::from_ccw_unchecked(self.vertices.iter().map(|&p| p + d).collect())
    }
}

pub(crate) fn sample_ring(pts: &[Point2], n: usize) -> Vec<Point2> {
    let m = pts.len();
    let lens: Vec<f64> = (0..m).map(|i| pts[i].dist(pts[(i + 1) % m])).collect();
    let total: f64 = lens.iter().sum();
    let mut out = Vec::with_capacity(n);
    let mut edge = 0;
    let mut acc = 0.0;
    for k in 0..n {
        let s = total * k as f64 / n as f64;
        while edge + 1 < m && acc + lens[edge] < s {
            acc += lens[edge];
            edge += 1;
        }
        let t = if lens[edge] > 0.0 { ((s - acc) / lens[edge]).clamp(0.0, 1.0) } else { 0.0 };
        out.push(pts[edge].lerp(pts[(edge + 1) % m], t));
    }
    out
}

pub(crate) fn strip_collinear(pts: &[Point2]) -> Vec<Point2> {
    let mut v = pts.to_vec();
    let mut changed = true;
    while changed && v.len() > 3 {
        changed = false;
        let n = v.len();
        for i in 0..n {
            if orient(v[(i + n - 1) % n], v[i], v[(i + 1) % n]) == Orientation::Collinear {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    v
}

impl ConvexPolygon {
    /// Validates convexity on top of the simple-polygon checks.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let p = SimplePolygon::new(vertices)?;
        p.to_convex()
            .ok_or_else(|| Error::MalformedInput("polygon is not convex".into()))
    }

    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    /// Builds a polygon from a possibly degenerate clip result.
    pub(crate) fn from_clip(vertices: Vec<Point2>, min_area: f64) -> Option<Self> {
        let v = dedup_ring(vertices);
        if v.len() < 3 || signed_area(&v) <= min_area {
            return None;
        }
        Some(Self { vertices: v })
    }

    pub fn from_aabb(b: &Aabb) -> Self {
        Self { vertices: b.corners().to_vec() }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    pub fn centroid(&self) -> Point2 {
        centroid(&self.vertices)
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(self.vertices.iter().copied())
    }

    pub fn tolerance(&self) -> f64 {
        eps_for(magnitude(&self.vertices))
    }

    pub fn as_simple(&self) -> SimplePolygon {
        SimplePolygon::from_ccw_unchecked(self.vertices.clone())
    }

    /// Smallest signed distance from `p` to the edge lines (positive inside).
    pub fn inner_distance(&self, p: Point2) -> f64 {
        let mut d = f64::INFINITY;
        for e in self.edges() {
            let len = e.length();
            if len > 0.0 {
                d = d.min((e.b - e.a).cross(p - e.a) / len);
            }
        }
        d
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.inner_distance(p) >= -self.tolerance().max(eps_for(p.magnitude()))
    }

    pub fn contains_strict(&self, p: Point2, margin: f64) -> bool {
        self.inner_distance(p) > margin
    }

    /// Keeps the part with `n·p <= c`.
    pub fn clip_halfplane(&self, n: Vector2, c: f64) -> Option<ConvexPolygon> {
        let min_area = EPS * self.tolerance();
        ConvexPolygon::from_clip(clip_ring(&self.vertices, n, c), min_area)
    }

    /// Keeps the part left of the directed line `a -> b`.
    pub fn clip_left_of(&self, a: Point2, b: Point2) -> Option<ConvexPolygon> {
        let d = b - a;
        let n = Point2::new(d.y, -d.x);
        self.clip_halfplane(n, n.dot(a))
    }

    pub fn intersection(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        if !self.bbox().overlaps(&other.bbox()) {
            return None;
        }
        let mut ring = self.vertices.clone();
        let n = other.vertices.len();
        for i in 0..n {
            let a = other.vertices[i];
            let b = other.vertices[(i + 1) % n];
            let d = b - a;
            let nrm = Point2::new(d.y, -d.x);
            ring = clip_ring(&ring, nrm, nrm.dot(a));
            if ring.len() < 3 {
                return None;
            }
        }
        let scale = self.tolerance().max(other.tolerance());
        ConvexPolygon::from_clip(ring, EPS * scale)
    }

    /// Inward offset of every edge by `delta`.
    pub fn shrink(&self, delta: f64) -> Option<ConvexPolygon> {
        let mut ring = self.vertices.clone();
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let d = b - a;
            let len = d.norm();
            if len == 0.0 {
                continue;
            }
            let nrm = Point2::new(d.y, -d.x) / len;
            ring = clip_ring(&ring, nrm, nrm.dot(a) - delta);
            if ring.len() < 3 {
                return None;
            }
        }
        ConvexPolygon::from_clip(ring, EPS * self.tolerance())
    }

    /// Parameter interval `[t0, t1]` where `origin + t·dir` is inside.
    pub fn ray_interval(&self, origin: Point2, dir: Vector2) -> Option<(f64, f64)> {
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let e = self.vertices[(i + 1) % n] - a;
            // inside: e × (p - a) >= 0
            let num = e.cross(origin - a);
            let den = e.cross(dir);
            if den.abs() < f64::MIN_POSITIVE {
                if num < 0.0 {
                    return None;
                }
                continue;
            }
            let t = -num / den;
            if den > 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }

    /// Outward unit normal of the edge hit when leaving along `dir`.
    pub fn exit_normal(&self, origin: Point2, dir: Vector2) -> Option<Vector2> {
        let n = self.vertices.len();
        let mut best: Option<(f64, Vector2)> = None;
        for i in 0..n {
            let a = self.vertices[i];
            let e = self.vertices[(i + 1) % n] - a;
            let den = e.cross(dir);
            if den < 0.0 {
                let t = -e.cross(origin - a) / den;
                if best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, Point2::new(e.y, -e.x)));
                }
            }
        }
        best.and_then(|(_, nrm)| nrm.normalized())
    }

    /// Orientation of the major principal axis.
    pub fn principal_angle(&self) -> f64 {
        let c = self.centroid();
        let n = self.vertices.len();
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i] - c;
            let q = self.vertices[(i + 1) % n] - c;
            let w = p.cross(q);
            sxx += w * (p.x * p.x + p.x * q.x + q.x * q.x);
            syy += w * (p.y * p.y + p.y * q.y + q.y * q.y);
            sxy += w * (2.0 * p.x * p.y + p.x * q.y + q.x * p.y + 2.0 * q.x * q.y);
        }
        0.5 * (sxy).atan2(sxx - syy)
    }

    pub fn translated(&self, d: Vector2) -> ConvexPolygon {
        ConvexPolygon::from_ccw_unchecked(self.vertices.iter().map(|&p| p + d).collect())
    }

    pub fn sample_boundary(&self, n: usize) -> Vec<Point2> {
        sample_ring(&self.vertices, n)
    }
}

/// Sutherland–Hodgman step against `n·p <= c`.
fn clip_ring(ring: &[Point2], n: Vector2, c: f64) -> Vec<Point2> {
    let m = ring.len();
    let mut out = Vec::with_capacity(m + 1);
    if m == 0 {
        return out;
    }
    let tol = EPS * n.norm() * magnitude(ring).max(1.0);
    for i in 0..m {
        let p = ring[i];
        let q = ring[(i + 1) % m];
        let dp = n.dot(p) - c;
        let dq = n.dot(q) - c;
        if dp <= tol {
            out.push(p);
        }
        if (dp < -tol && dq > tol) || (dp > tol && dq < -tol) {
            out.push(p.lerp(q, dp / (dp - dq)));
        }
    }
    out
}

/// Convex hull by monotone chain; collinear boundary points are dropped.
pub fn convex_hull(points: &[Point2]) -> Result<ConvexPolygon> {
    let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.approx_eq(*b, eps_for(a.magnitude())));
    if pts.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2
                && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) != Orientation::Ccw
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    Ok(ConvexPolygon::from_ccw_unchecked(hull))
}

/// Closed-set intersection test by separating axes.
pub fn convex_pieces_intersect(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    let tol = a.tolerance().max(b.tolerance());
    if !a.bbox().expanded(tol).overlaps(&b.bbox()) {
        return false;
    }
    !(has_separating_edge(a, b, tol) || has_separating_edge(b, a, tol))
}

fn has_separating_edge(a: &ConvexPolygon, b: &ConvexPolygon, tol: f64) -> bool {
    for e in a.edges() {
        let d = e.b - e.a;
        let len = d.norm();
        if len == 0.0 {
            continue;
        }
        let n = Point2::new(d.y, -d.x) / len;
        let amax = a.vertices.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(n.dot(p)));
        let bmin = b.vertices.iter().fold(f64::INFINITY, |m, &p| m.min(n.dot(p)));
        if bmin > amax + tol {
            return true;
        }
    }
    false
}

/// Kernel of a simple polygon by half-plane clipping.
///
/// Returns `None` when the polygon is not starshaped or its kernel has no
/// interior.
pub fn polygon_kernel(p: &SimplePolygon) -> Option<ConvexPolygon> {
    let mut k = ConvexPolygon::from_aabb(&p.bbox());
    for e in p.edges() {
        k = k.clip_left_of(e.a, e.b)?;
    }
    Some(k)
}

/// All boundary crossings of a ray, sorted by ray parameter.
///
/// Each edge owns its start vertex so a ray through a vertex is reported once.
pub fn ray_polygon_hits(r: &Ray, p: &SimplePolygon) -> Vec<(f64, Point2)> {
    let d = r.dir;
    let scale = p.bbox().diameter().max(r.origin.magnitude()).max(1.0);
    let mut hits: Vec<(f64, Point2)> = Vec::new();
    for e in p.edges() {
        let s = e.b - e.a;
        let den = d.cross(s);
        if den.abs() <= EPS * d.norm() * s.norm() {
            continue;
        }
        let ao = e.a - r.origin;
        let t = ao.cross(s) / den;
        let u = ao.cross(d) / den;
        let ueps = EPS * scale / s.norm();
        let teps = EPS * scale / d.norm();
        if t >= -teps && u >= -ueps && u < 1.0 - ueps {
            let t = t.max(0.0);
            hits.push((t, e.a + s * u.clamp(0.0, 1.0)));
        }
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let teps = EPS * scale / d.norm();
    hits.dedup_by(|b, a| (b.0 - a.0).abs() <= teps);
    hits
}
