use super::{eps_for, Aabb, ConvexPolygon, Point2, Vector2};
use crate::{Error, Result};
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: Point2,
    /// Semi-axis lengths along the rotated x and y axes.
    pub semi_axes: (f64, f64),
    /// Rotation in radians.
    pub rotation: f64,
}

impl Ellipse {
    pub fn new(center: Point2, a: f64, b: f64, rotation: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::MalformedInput("ellipse semi-axes must be positive".into()));
        }
        if !center.is_finite() || !rotation.is_finite() {
            return Err(Error::MalformedInput("ellipse parameters must be finite".into()));
        }
        Ok(Self { center, semi_axes: (a, b), rotation })
    }

    pub fn circle(center: Point2, r: f64) -> Result<Self> {
        Self::new(center, r, r, 0.0)
    }

    /// Maps a world point to the frame where the ellipse is the unit circle.
    #[inline]
    pub fn to_local(&self, p: Point2) -> Point2 {
        let q = (p - self.center).rotate(-self.rotation);
        Point2::new(q.x / self.semi_axes.0, q.y / self.semi_axes.1)
    }

    #[inline]
    pub fn from_local(&self, q: Point2) -> Point2 {
        Point2::new(q.x * self.semi_axes.0, q.y * self.semi_axes.1).rotate(self.rotation) + self.center
    }

    fn local_dir(&self, d: Vector2) -> Vector2 {
        let q = d.rotate(-self.rotation);
        Point2::new(q.x / self.semi_axes.0, q.y / self.semi_axes.1)
    }

    pub fn min_axis(&self) -> f64 {
        self.semi_axes.0.min(self.semi_axes.1)
    }

    pub fn max_axis(&self) -> f64 {
        self.semi_axes.0.max(self.semi_axes.1)
    }

    pub fn tolerance(&self) -> f64 {
        eps_for(self.center.magnitude() + self.max_axis())
    }

    /// Approximate signed distance scaled by the smallest semi-axis.
    pub fn level(&self, p: Point2) -> f64 {
        (self.to_local(p).norm() - 1.0) * self.min_axis()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.level(p) <= self.tolerance().max(eps_for(p.magnitude()))
    }

    pub fn contains_strict(&self, p: Point2, margin: f64) -> bool {
        self.level(p) < -margin
    }

    pub fn boundary_point(&self, theta: f64) -> Point2 {
        self.from_local(Point2::from_angle(theta))
    }

    pub fn area(&self) -> f64 {
        PI * self.semi_axes.0 * self.semi_axes.1
    }

    pub fn bbox(&self) -> Aabb {
        let (s, c) = self.rotation.sin_cos();
        let (a, b) = self.semi_axes;
        let hx = ((a * c).powi(2) + (b * s).powi(2)).sqrt();
        let hy = ((a * s).powi(2) + (b * c).powi(2)).sqrt();
        Aabb {
            min: self.center - Point2::new(hx, hy),
            max: self.center + Point2::new(hx, hy),
        }
    }

    /// Regular `n`-gon inscribed in the ellipse (vertices on the boundary).
    pub fn inscribed_polygon(&self, n: usize) -> ConvexPolygon {
        let v = (0..n).map(|i| self.boundary_point(TAU * i as f64 / n as f64)).collect();
        ConvexPolygon::from_ccw_unchecked(v)
    }

    /// `n`-gon whose edges are tangent to the ellipse, so it contains it.
    pub fn circumscribed_polygon(&self, n: usize) -> ConvexPolygon {
        let s = 1.0 / (PI / n as f64).cos();
        let v = (0..n)
            .map(|i| self.from_local(Point2::from_angle(TAU * i as f64 / n as f64) * s))
            .collect();
        ConvexPolygon::from_ccw_unchecked(v)
    }

    /// Parameter interval where `origin + t·dir` is inside.
    pub fn ray_interval(&self, origin: Point2, dir: Vector2) -> Option<(f64, f64)> {
        let o = self.to_local(origin);
        let d = self.local_dir(dir);
        let a = d.norm2();
        if a == 0.0 {
            return None;
        }
        let b = o.dot(d);
        let c = o.norm2() - 1.0;
        let disc = b * b - a * c;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        // numerically stable roots
        let (t0, t1) = if b >= 0.0 {
            let q = -(b + sq);
            (q / a, if q != 0.0 { c / q } else { 0.0 })
        } else {
            let q = -b + sq;
            (c / q, q / a)
        };
        Some((t0.min(t1), t0.max(t1)))
    }

    /// Outward unit normal at (or radially nearest to) `p`.
    pub fn normal_at(&self, p: Point2) -> Vector2 {
        let q = self.to_local(p);
        let g = Point2::new(q.x / self.semi_axes.0, q.y / self.semi_axes.1).rotate(self.rotation);
        g.normalized().unwrap_or(Point2::new(1.0, 0.0))
    }

    /// End points of both principal axes.
    pub fn axis_extremes(&self) -> [Point2; 4] {
        [
            self.from_local(Point2::new(1.0, 0.0)),
            self.from_local(Point2::new(0.0, 1.0)),
            self.from_local(Point2::new(-1.0, 0.0)),
            self.from_local(Point2::new(0.0, -1.0)),
        ]
    }

    pub fn translated(&self, d: Vector2) -> Ellipse {
        Ellipse { center: self.center + d, ..*self }
    }

    pub fn sample_boundary(&self, n: usize) -> Vec<Point2> {
        (0..n).map(|i| self.boundary_point(TAU * i as f64 / n as f64)).collect()
    }
}
