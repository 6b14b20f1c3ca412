//! Planar primitives and tolerance-based predicates.

mod decompose;
mod ellipse;
pub(crate) mod polygon;
pub(crate) mod shape;

pub use decompose::{convex_decomposition, triangulate};
pub use ellipse::Ellipse;
pub use polygon::{
    convex_hull, convex_pieces_intersect, polygon_kernel, ray_polygon_hits, ConvexPolygon,
    SimplePolygon,
};
pub use shape::{
    arc_union, classify_point, tangent_points_ellipse, tangent_points_polygon, Arc, ConvexShape,
    PointClass, Shape,
};

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Base relative tolerance for sign predicates.
pub const EPS: f64 = 1e-9;

/// Absolute tolerance for quantities of the given magnitude.
#[inline]
pub fn eps_for(magnitude: f64) -> f64 {
    EPS * magnitude.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

pub type Vector2 = Point2;

impl Point2 {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    /// Unit vector, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn lerp(self, o: Self, t: f64) -> Self {
        self + (o - self) * t
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Largest absolute coordinate, used to scale tolerances.
    #[inline]
    pub fn magnitude(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn approx_eq(self, o: Self, tol: f64) -> bool {
        (self - o).norm() <= tol
    }

    pub fn rotate(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.x / s, self.y / s)
    }
}

impl Neg for Point2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Orientation of the triple `a, b, c`.
///
/// The cross product is evaluated on the lexicographically sorted triple so the
/// result is exactly antisymmetric under argument swaps. The tolerance scales
/// with the squared diameter of the triple, which keeps the predicate
/// translation invariant.
pub fn orient(a: Point2, b: Point2, c: Point2) -> Orientation {
    let mut pts = [a, b, c];
    let mut parity = false;
    // three-element sorting network, tracking permutation parity
    for (i, j) in [(0, 1), (1, 2), (0, 1)] {
        if lex_gt(pts[i], pts[j]) {
            pts.swap(i, j);
            parity = !parity;
        }
    }
    let [p, q, r] = pts;
    let cross = (q - p).cross(r - p);
    let diam2 = (q - p).norm2().max((r - p).norm2()).max((r - q).norm2());
    let tol = EPS * diam2.max(1.0);
    let o = if cross > tol {
        Orientation::Ccw
    } else if cross < -tol {
        Orientation::Cw
    } else {
        Orientation::Collinear
    };
    if parity {
        o.reversed()
    } else {
        o
    }
}

fn lex_gt(a: Point2, b: Point2) -> bool {
    a.x > b.x || (a.x == b.x && a.y > b.y)
}

/// Normalizes an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Signed difference `b - a` wrapped to `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Point2,
    pub dir: Vector2,
}

impl Ray {
    /// Fails with `MalformedInput` for a zero or non-finite direction.
    pub fn new(origin: Point2, dir: Vector2) -> crate::Result<Self> {
        if !(dir.norm2() > 0.0) || !dir.is_finite() || !origin.is_finite() {
            return Err(crate::Error::MalformedInput("ray direction must be nonzero".into()));
        }
        Ok(Self { origin, dir })
    }

    pub fn through(origin: Point2, target: Point2) -> crate::Result<Self> {
        Self::new(origin, target - origin)
    }

    #[inline]
    pub fn at(&self, t: f64) -> Point2 {
        self.origin + self.dir * t
    }

    pub fn unit_dir(&self) -> Vector2 {
        self.dir / self.dir.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() <= eps_for(self.a.magnitude().max(self.b.magnitude()))
    }

    pub fn at(&self, t: f64) -> Point2 {
        self.a.lerp(self.b, t)
    }

    /// Distance from `p` to the closed segment.
    pub fn dist_to(&self, p: Point2) -> f64 {
        let d = self.b - self.a;
        let len2 = d.norm2();
        if len2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        p.dist(self.at(t))
    }

    /// Intersection of two closed segments.
    ///
    /// Returns the parameters along `self` and `other` and the point. Collinear
    /// overlaps report the overlap endpoint closest to `self.a`.
    pub fn intersect(&self, other: &Segment) -> Option<(f64, f64, Point2)> {
        let r = self.b - self.a;
        let s = other.b - other.a;
        let denom = r.cross(s);
        let qp = other.a - self.a;
        let scale = r.norm().max(s.norm()).max(qp.norm()).max(1.0);
        let tol = EPS * scale * scale;
        if denom.abs() <= tol {
            let rn = r.norm();
            let off_line = if rn > 0.0 {
                qp.cross(r).abs() / rn
            } else {
                other.dist_to(self.a)
            };
            if off_line > EPS * scale {
                return None;
            }
            return self.collinear_overlap(other);
        }
        let t = qp.cross(s) / denom;
        let u = qp.cross(r) / denom;
        let te = EPS * scale / r.norm().max(EPS);
        let ue = EPS * scale / s.norm().max(EPS);
        if t < -te || t > 1.0 + te || u < -ue || u > 1.0 + ue {
            return None;
        }
        let t = t.clamp(0.0, 1.0);
        let u = u.clamp(0.0, 1.0);
        Some((t, u, self.at(t)))
    }

    fn collinear_overlap(&self, other: &Segment) -> Option<(f64, f64, Point2)> {
        let r = self.b - self.a;
        let len2 = r.norm2();
        if len2 == 0.0 {
            let d = other.dist_to(self.a);
            if d <= eps_for(self.a.magnitude()) {
                let s = other.b - other.a;
                let u = if s.norm2() > 0.0 {
                    ((self.a - other.a).dot(s) / s.norm2()).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                return Some((0.0, u, self.a));
            }
            return None;
        }
        let t0 = (other.a - self.a).dot(r) / len2;
        let t1 = (other.b - self.a).dot(r) / len2;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let tol = EPS * self.length().max(1.0) / self.length().max(EPS);
        if hi < -tol || lo > 1.0 + tol {
            return None;
        }
        let t = lo.max(0.0).min(1.0);
        let p = self.at(t);
        let s = other.b - other.a;
        let u = if s.norm2() > 0.0 {
            ((p - other.a).dot(s) / s.norm2()).clamp(0.0, 1.0)
        } else {
            0.0
        };
        Some((t, u, p))
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn empty() -> Self {
        Self {
            min: Point2::new(f64::INFINITY, f64::INFINITY),
            max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn from_points<I: IntoIterator<Item = Point2>>(pts: I) -> Self {
        let mut b = Self::empty();
        for p in pts {
            b.include(p);
        }
        b
    }

    pub fn include(&mut self, p: Point2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, o: &Aabb) -> Aabb {
        let mut b = *self;
        b.include(o.min);
        b.include(o.max);
        b
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x || self.min.y > self.max.y
    }

    pub fn center(&self) -> Point2 {
        (self.min + self.max) * 0.5
    }

    pub fn diameter(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.min.dist(self.max)
        }
    }

    /// Box scaled about its center, with a floor on the half-extent.
    pub fn inflated(&self, factor: f64, min_half: f64) -> Aabb {
        let c = self.center();
        let hx = ((self.max.x - self.min.x) * 0.5 * factor).max(min_half);
        let hy = ((self.max.y - self.min.y) * 0.5 * factor).max(min_half);
        Aabb {
            min: Point2::new(c.x - hx, c.y - hy),
            max: Point2::new(c.x + hx, c.y + hy),
        }
    }

    pub fn expanded(&self, margin: f64) -> Aabb {
        Aabb {
            min: self.min - Point2::new(margin, margin),
            max: self.max + Point2::new(margin, margin),
        }
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }
}
