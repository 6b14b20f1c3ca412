use super::{angle_diff, wrap_angle, Aabb, ConvexPolygon, Ellipse, Point2, SimplePolygon, Vector2};
use crate::{Error, Result};
use std::f64::consts::TAU;

/// Angular tolerance used when merging arcs.
const ARC_EPS: f64 = 1e-12;

/// Geometry of an original obstacle.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ellipse(Ellipse),
    Polygon(SimplePolygon),
}

/// A closed convex region.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexShape {
    Ellipse(Ellipse),
    Polygon(ConvexPolygon),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Inside,
    BoundedExterior,
    FreeExterior,
}

/// Closed counter-clockwise arc of directions starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub width: f64,
}

impl Arc {
    pub fn new(start: f64, width: f64) -> Self {
        Self { start: wrap_angle(start), width: width.clamp(0.0, TAU) }
    }

    pub fn full() -> Self {
        Self { start: 0.0, width: TAU }
    }

    pub fn is_full(&self) -> bool {
        self.width >= TAU - ARC_EPS
    }

    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        let d = (theta - self.start).rem_euclid(TAU);
        d <= self.width + ARC_EPS || d >= TAU - ARC_EPS
    }

    /// The same arc rotated by `π`.
    pub fn reflected(&self) -> Arc {
        Arc::new(self.start + std::f64::consts::PI, self.width)
    }
}

/// Union of closed arcs as a sorted list of disjoint arcs.
pub fn arc_union(arcs: &[Arc]) -> Vec<Arc> {
    if arcs.iter().any(Arc::is_full) {
        return vec![Arc::full()];
    }
    let mut v: Vec<Arc> = arcs.iter().map(|a| Arc::new(a.start, a.width)).collect();
    if v.is_empty() {
        return v;
    }
    v.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut merged: Vec<Arc> = Vec::with_capacity(v.len());
    for a in v {
        match merged.last_mut() {
            Some(m) if a.start <= m.end() + ARC_EPS => {
                let end = m.end().max(a.end());
                m.width = end - m.start;
            }
            _ => merged.push(a),
        }
    }
    // wrap-around: the last arc may reach past 2π into the first ones
    loop {
        if merged.len() < 2 {
            break;
        }
        let last = *merged.last().unwrap();
        let first = merged[0];
        if last.end() - TAU + ARC_EPS >= first.start {
            let end = (last.end() - TAU).max(first.end());
            merged.remove(0);
            let l = merged.last_mut().unwrap();
            l.width = end + TAU - l.start;
        } else {
            break;
        }
    }
    if let Some(m) = merged.first() {
        if merged.len() == 1 && m.width >= TAU - ARC_EPS {
            return vec![Arc::full()];
        }
    }
    merged
}

/// Complement of a disjoint sorted arc list (as produced by [`arc_union`]).
pub(crate) fn arc_complement(union: &[Arc]) -> Vec<Arc> {
    if union.is_empty() {
        return vec![Arc::full()];
    }
    if union.len() == 1 && union[0].is_full() {
        return Vec::new();
    }
    let n = union.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = union[i];
        let b = union[(i + 1) % n];
        let mut gap = b.start - a.end();
        if i + 1 == n {
            gap += TAU;
        }
        if gap > ARC_EPS {
            out.push(Arc::new(a.end(), gap));
        }
    }
    out
}

/// Tangent points of an ellipse seen from an exterior point.
///
/// The triangle `x t1 t2` is clockwise, so `t1` has the larger polar angle.
pub fn tangent_points_ellipse(e: &Ellipse, x: Point2) -> Result<(Point2, Point2)> {
    if e.contains(x) {
        return Err(Error::PointInsideShape);
    }
    let q = e.to_local(x);
    let d = q.norm();
    let phi = q.angle();
    let alpha = (1.0 / d).acos();
    let t1 = e.from_local(Point2::from_angle(phi - alpha));
    let t2 = e.from_local(Point2::from_angle(phi + alpha));
    Ok((t1, t2))
}

/// Unwrapped polar angles of the polygon vertices seen from `x`.
///
/// Returns `(argmin, argmax, min_angle, span)`.
fn polygon_span(p: &SimplePolygon, x: Point2) -> (usize, usize, f64, f64) {
    let v = p.vertices();
    let mut theta = (v[0] - x).angle();
    let (mut lo, mut hi) = (theta, theta);
    let (mut ilo, mut ihi) = (0, 0);
    for i in 1..v.len() {
        theta += angle_diff((v[i - 1] - x).angle(), (v[i] - x).angle());
        if theta > hi {
            hi = theta;
            ihi = i;
        }
        if theta < lo {
            lo = theta;
            ilo = i;
        }
    }
    (ilo, ihi, lo, hi - lo)
}

/// Vertices of extreme polar angle seen from a free exterior point.
///
/// The triangle `x t1 t2` is clockwise: `t1` has the maximum polar angle and
/// `t2` the minimum.
pub fn tangent_points_polygon(p: &SimplePolygon, x: Point2) -> Result<(Point2, Point2)> {
    if p.contains(x) {
        return Err(Error::NotFreeExterior);
    }
    let (ilo, ihi, _, span) = polygon_span(p, x);
    if span >= TAU - ARC_EPS {
        return Err(Error::NotFreeExterior);
    }
    Ok((p.vertices()[ihi], p.vertices()[ilo]))
}

impl Shape {
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            Shape::Ellipse(e) => e.contains(p),
            Shape::Polygon(q) => q.contains(p),
        }
    }

    pub fn contains_strict(&self, p: Point2, margin: f64) -> bool {
        match self {
            Shape::Ellipse(e) => e.contains_strict(p, margin),
            Shape::Polygon(q) => q.contains_strict(p, margin),
        }
    }

    pub fn bbox(&self) -> Aabb {
        match self {
            Shape::Ellipse(e) => e.bbox(),
            Shape::Polygon(q) => q.bbox(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Shape::Ellipse(e) => e.area(),
            Shape::Polygon(q) => q.area(),
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Shape::Ellipse(_) => true,
            Shape::Polygon(q) => q.is_convex(),
        }
    }

    pub fn as_convex(&self) -> Option<ConvexShape> {
        match self {
            Shape::Ellipse(e) => Some(ConvexShape::Ellipse(*e)),
            Shape::Polygon(q) => q.to_convex().map(ConvexShape::Polygon),
        }
    }

    pub fn sample_boundary(&self, n: usize) -> Vec<Point2> {
        match self {
            Shape::Ellipse(e) => e.sample_boundary(n),
            Shape::Polygon(q) => q.sample_boundary(n),
        }
    }

    pub fn translated(&self, d: Vector2) -> Shape {
        match self {
            Shape::Ellipse(e) => Shape::Ellipse(e.translated(d)),
            Shape::Polygon(q) => Shape::Polygon(q.translated(d)),
        }
    }

    /// Directions from `x` whose rays meet the shape.
    ///
    /// Fails with `PointInsideShape` when `x` is in the shape and with
    /// `NotFreeExterior` when the shape alone surrounds `x`.
    pub fn blocked_arc(&self, x: Point2) -> Result<Arc> {
        match self {
            Shape::Ellipse(e) => {
                let (t1, t2) = tangent_points_ellipse(e, x)?;
                let a2 = (t2 - x).angle();
                Ok(Arc::new(a2, angle_diff(a2, (t1 - x).angle()).rem_euclid(TAU)))
            }
            Shape::Polygon(q) => {
                if q.contains(x) {
                    return Err(Error::PointInsideShape);
                }
                let (_, _, lo, span) = polygon_span(q, x);
                if span >= TAU - ARC_EPS {
                    return Err(Error::NotFreeExterior);
                }
                Ok(Arc::new(lo, span))
            }
        }
    }
}

impl ConvexShape {
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            ConvexShape::Ellipse(e) => e.contains(p),
            ConvexShape::Polygon(q) => q.contains(p),
        }
    }

    pub fn contains_strict(&self, p: Point2, margin: f64) -> bool {
        match self {
            ConvexShape::Ellipse(e) => e.contains_strict(p, margin),
            ConvexShape::Polygon(q) => q.contains_strict(p, margin),
        }
    }

    pub fn bbox(&self) -> Aabb {
        match self {
            ConvexShape::Ellipse(e) => e.bbox(),
            ConvexShape::Polygon(q) => q.bbox(),
        }
    }

    pub fn ray_interval(&self, origin: Point2, dir: Vector2) -> Option<(f64, f64)> {
        match self {
            ConvexShape::Ellipse(e) => e.ray_interval(origin, dir),
            ConvexShape::Polygon(q) => q.ray_interval(origin, dir),
        }
    }

    /// Tangent points seen from an exterior point (`x t1 t2` clockwise).
    pub fn tangent_points(&self, x: Point2) -> Result<(Point2, Point2)> {
        match self {
            ConvexShape::Ellipse(e) => tangent_points_ellipse(e, x),
            ConvexShape::Polygon(q) => tangent_points_polygon(&q.as_simple(), x),
        }
    }

    /// Polygon containing the shape, exact for polygons.
    pub fn outer_polygon(&self, n: usize) -> ConvexPolygon {
        match self {
            ConvexShape::Ellipse(e) => e.circumscribed_polygon(n),
            ConvexShape::Polygon(q) => q.clone(),
        }
    }

    /// Polygon contained in the shape, exact for polygons.
    pub fn inner_polygon(&self, n: usize) -> ConvexPolygon {
        match self {
            ConvexShape::Ellipse(e) => e.inscribed_polygon(n),
            ConvexShape::Polygon(q) => q.clone(),
        }
    }

    pub fn to_shape(&self) -> Shape {
        match self {
            ConvexShape::Ellipse(e) => Shape::Ellipse(*e),
            ConvexShape::Polygon(q) => Shape::Polygon(q.as_simple()),
        }
    }
}

/// Classifies `x` against a union of shapes by exact angular coverage.
pub fn classify_point(shapes: &[Shape], x: Point2) -> PointClass {
    if shapes.iter().any(|s| s.contains(x)) {
        return PointClass::Inside;
    }
    let mut arcs = Vec::with_capacity(shapes.len());
    for s in shapes {
        match s.blocked_arc(x) {
            Ok(a) => arcs.push(a),
            Err(Error::PointInsideShape) => return PointClass::Inside,
            Err(_) => return PointClass::BoundedExterior,
        }
    }
    let u = arc_union(&arcs);
    if u.len() == 1 && u[0].is_full() {
        PointClass::BoundedExterior
    } else {
        PointClass::FreeExterior
    }
}
