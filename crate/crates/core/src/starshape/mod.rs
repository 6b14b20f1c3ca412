//! Starshaped hulls with respect to a point and with a specified kernel.

pub(crate) mod envelope;
mod polygon_hull;

pub use polygon_hull::{sh_kernel_polygon, HullSource, StarPolygon};

use crate::geom::{
    convex_hull, eps_for, Aabb, ConvexPolygon, ConvexShape, Point2, SimplePolygon, Vector2,
};
use crate::{Error, Result};
use std::sync::OnceLock;

/// Number of vertices used when an ellipse must be treated as a polygon.
pub const ELLIPSE_SEGMENTS: usize = 30;

/// The specified kernel `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub points: Vec<Point2>,
}

impl KernelSpec {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::MalformedInput("kernel needs at least one finite point".into()));
        }
        Ok(Self { points })
    }

    pub fn centroid(&self) -> Point2 {
        self.points.iter().fold(Point2::default(), |s, &p| s + p) / self.points.len() as f64
    }

    pub fn hull(&self) -> Result<ConvexPolygon> {
        convex_hull(&self.points)
    }

    /// Equilateral triangle with centroid `c`, side `side` and one vertex at
    /// angle `theta` from the centroid.
    pub fn triangle(c: Point2, side: f64, theta: f64) -> Self {
        let r = side / 3f64.sqrt();
        let points = (0..3)
            .map(|i| c + Point2::from_angle(theta + i as f64 * std::f64::consts::TAU / 3.0) * r)
            .collect();
        Self { points }
    }
}

/// One convex component of a star obstacle.
#[derive(Debug, Clone, PartialEq)]
pub enum StarPiece {
    /// An original convex obstacle.
    Original(ConvexShape),
    /// A polygon added by the hull construction.
    Hull(ConvexPolygon),
}

impl StarPiece {
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            StarPiece::Original(s) => s.contains(p),
            StarPiece::Hull(q) => q.contains(p),
        }
    }

    pub fn ray_interval(&self, origin: Point2, dir: Vector2) -> Option<(f64, f64)> {
        match self {
            StarPiece::Original(s) => s.ray_interval(origin, dir),
            StarPiece::Hull(q) => q.ray_interval(origin, dir),
        }
    }

    /// Polygon containing the piece, used for intersection tests.
    pub fn outer_polygon(&self) -> ConvexPolygon {
        match self {
            StarPiece::Original(s) => s.outer_polygon(ELLIPSE_SEGMENTS),
            StarPiece::Hull(q) => q.clone(),
        }
    }

    pub fn bbox(&self) -> Aabb {
        match self {
            StarPiece::Original(s) => s.bbox(),
            StarPiece::Hull(q) => q.bbox(),
        }
    }

    fn exit_normal(&self, origin: Point2, dir: Vector2, hit: Point2) -> Vector2 {
        match self {
            StarPiece::Original(ConvexShape::Ellipse(e)) => e.normal_at(hit),
            StarPiece::Original(ConvexShape::Polygon(q)) | StarPiece::Hull(q) => {
                q.exit_normal(origin, dir).unwrap_or_else(|| dir.normalized().unwrap_or_default())
            }
        }
    }

    pub fn translated(&self, d: Vector2) -> StarPiece {
        match self {
            StarPiece::Original(ConvexShape::Ellipse(e)) => StarPiece::Original(ConvexShape::Ellipse(e.translated(d))),
            StarPiece::Original(ConvexShape::Polygon(q)) => StarPiece::Original(ConvexShape::Polygon(q.translated(d))),
            StarPiece::Hull(q) => StarPiece::Hull(q.translated(d)),
        }
    }
}

/// Boundary crossing returned by [`StarObstacle::boundary_hit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryHit {
    /// Ray parameter in units of the direction vector.
    pub t: f64,
    pub point: Point2,
    /// Outward unit normal of the piece that attains the boundary.
    pub normal: Vector2,
}

/// A strictly starshaped obstacle stored as a union of convex pieces.
#[derive(Debug, Clone)]
pub struct StarObstacle {
    pieces: Vec<StarPiece>,
    kernel_spec: KernelSpec,
    kernel_hull: Option<ConvexPolygon>,
    boundary_cache: OnceLock<SimplePolygon>,
}

impl PartialEq for StarObstacle {
    fn eq(&self, o: &Self) -> bool {
        self.pieces == o.pieces && self.kernel_spec == o.kernel_spec
    }
}

impl StarObstacle {
    pub fn new(pieces: Vec<StarPiece>, kernel_spec: KernelSpec) -> Self {
        let kernel_hull = kernel_spec.hull().ok();
        Self { pieces, kernel_spec, kernel_hull, boundary_cache: OnceLock::new() }
    }

    /// Union of several stars sharing the same kernel.
    pub fn union(stars: Vec<StarObstacle>, kernel_spec: KernelSpec) -> Self {
        let pieces = stars.into_iter().flat_map(|s| s.pieces).collect();
        Self::new(pieces, kernel_spec)
    }

    pub fn pieces(&self) -> &[StarPiece] {
        &self.pieces
    }

    pub fn kernel_spec(&self) -> &KernelSpec {
        &self.kernel_spec
    }

    /// `CH(K)`, absent when `K` has no interior.
    pub fn kernel_hull(&self) -> Option<&ConvexPolygon> {
        self.kernel_hull.as_ref()
    }

    pub fn kernel_centroid(&self) -> Point2 {
        self.kernel_spec.centroid()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.pieces.iter().any(|q| q.contains(p))
    }

    pub fn bbox(&self) -> Aabb {
        self.pieces.iter().fold(Aabb::empty(), |b, p| b.union(&p.bbox()))
    }

    fn check_origin(&self, origin: Point2) -> Result<()> {
        let ok = match &self.kernel_hull {
            Some(h) => h.contains_strict(origin, eps_for(origin.magnitude())),
            None => self.kernel_spec.points.iter().any(|k| k.approx_eq(origin, eps_for(origin.magnitude()))),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OriginOutsideKernel)
        }
    }

    /// Farthest exit over all pieces along the ray, with the exit normal.
    pub fn boundary_hit(&self, origin: Point2, dir: Vector2) -> Result<BoundaryHit> {
        if !(dir.norm2() > 0.0) {
            return Err(Error::MalformedInput("direction must be nonzero".into()));
        }
        self.check_origin(origin)?;
        let mut best: Option<(f64, &StarPiece)> = None;
        for piece in &self.pieces {
            if let Some((_, t1)) = piece.ray_interval(origin, dir) {
                if t1 >= 0.0 && best.map_or(true, |(bt, _)| t1 > bt) {
                    best = Some((t1, piece));
                }
            }
        }
        let (t, piece) = best.ok_or(Error::OriginOutsideKernel)?;
        let point = origin + dir * t;
        Ok(BoundaryHit { t, point, normal: piece.exit_normal(origin, dir, point) })
    }

    /// Boundary polygon sampled by 360 rays from the kernel centroid, for
    /// rendering. Built once and cached.
    pub fn boundary_polygon(&self) -> &SimplePolygon {
        self.boundary_cache.get_or_init(|| {
            let c = self.kernel_centroid();
            let pts: Vec<Point2> = (0..360)
                .filter_map(|i| {
                    let u = Point2::from_angle(std::f64::consts::TAU * i as f64 / 360.0);
                    self.boundary_hit(c, u).ok().map(|h| h.point)
                })
                .collect();
            SimplePolygon::new(pts.clone()).unwrap_or_else(|_| SimplePolygon::from_ccw_unchecked(pts))
        })
    }

    pub fn translated(&self, d: Vector2) -> StarObstacle {
        let k = KernelSpec { points: self.kernel_spec.points.iter().map(|&p| p + d).collect() };
        StarObstacle::new(self.pieces.iter().map(|p| p.translated(d)).collect(), k)
    }
}

/// The boundary point of `s` along the ray from `origin`, which must lie in
/// the interior of `CH(K)`.
pub fn star_boundary_ray(s: &StarObstacle, origin: Point2, dir: Vector2) -> Result<Point2> {
    s.boundary_hit(origin, dir).map(|h| h.point)
}

/// `SH_x(A)` for a convex `A`: the set itself plus the tangent triangle.
pub fn sh_point_convex(a: &ConvexShape, x: Point2) -> StarObstacle {
    let k = KernelSpec { points: vec![x] };
    if a.contains(x) {
        return StarObstacle::new(vec![StarPiece::Original(a.clone())], k);
    }
    let mut pieces = vec![StarPiece::Original(a.clone())];
    if let Ok((t1, t2)) = a.tangent_points(x) {
        if let Ok(tri) = convex_hull(&[x, t1, t2]) {
            pieces.push(StarPiece::Hull(tri));
        }
    }
    StarObstacle::new(pieces, k)
}

/// `SH_kerK(A)` for a convex `A`: the set plus the hull of the kernel points
/// and their tangent points.
pub fn sh_kernel_convex(a: &ConvexShape, k: &KernelSpec) -> StarObstacle {
    let outside: Vec<Point2> = k.points.iter().copied().filter(|&p| !a.contains(p)).collect();
    if outside.is_empty() {
        return StarObstacle::new(vec![StarPiece::Original(a.clone())], k.clone());
    }
    let mut pts = k.points.clone();
    for &q in &outside {
        if let Ok((t1, t2)) = a.tangent_points(q) {
            pts.push(t1);
            pts.push(t2);
        }
    }
    let mut pieces = vec![StarPiece::Original(a.clone())];
    if let Ok(h) = convex_hull(&pts) {
        pieces.push(StarPiece::Hull(h));
    }
    StarObstacle::new(pieces, k.clone())
}

/// Whether `p` is starshaped with respect to `x`, i.e. `x` lies in every
/// inner half-plane of its edges.
pub fn is_starshaped_wrt(p: &SimplePolygon, x: Point2) -> bool {
    let tol = p.tolerance().max(eps_for(x.magnitude())) * 10.0;
    p.edges().all(|e| {
        let d = e.b - e.a;
        let len = d.norm();
        len == 0.0 || d.cross(x - e.a) / len >= -tol
    })
}

/// Star obstacle from a polygon starshaped with respect to every kernel
/// point: a triangle fan around the kernel centroid.
pub fn star_from_polygon(p: &StarPolygon) -> StarObstacle {
    let c = p.kernel_spec.centroid();
    let v = p.vertices.vertices();
    let n = v.len();
    let mut pieces = Vec::with_capacity(n);
    for i in 0..n {
        if let Ok(t) = convex_hull(&[c, v[i], v[(i + 1) % n]]) {
            pieces.push(StarPiece::Hull(t));
        }
    }
    StarObstacle::new(pieces, p.kernel_spec.clone())
}
