//! Admissible kernels: the points from which a starshaped hull keeps given
//! points outside.
//!
//! For a closed set `A` and an exterior point `x̄`, `x̄ ∈ SH_p(A)` exactly when
//! `p` lies on a ray leaving `x̄` in a direction `x̄ - y`, `y ∈ A`. The
//! inadmissible set is therefore a closed wedge at `x̄` spanning the reflected
//! blocked arc, and the admissible kernel is the open cone that remains.

use crate::geom::{
    arc_union, wrap_angle, Aabb, Arc, ConvexPolygon, Point2, Ray, Shape, Vector2,
};
use crate::geom::shape::arc_complement;
use std::f64::consts::{PI, TAU};

/// Factor by which the scene box is inflated to truncate unbounded kernels.
pub const BBOX_INFLATION: f64 = 10.0;

/// Inward margin applied to kernel regions, relative to the scene diameter.
pub const OPEN_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Openness {
    Open,
}

/// Open cone of all rays from `apex` swept counter-clockwise from
/// `right_ray` to `left_ray`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone2 {
    pub apex: Point2,
    pub right_ray: Ray,
    pub left_ray: Ray,
    pub openness: Openness,
}

impl Cone2 {
    fn from_arc(apex: Point2, arc: Arc) -> Self {
        Self {
            apex,
            right_ray: Ray { origin: apex, dir: Point2::from_angle(arc.start) },
            left_ray: Ray { origin: apex, dir: Point2::from_angle(arc.end()) },
            openness: Openness::Open,
        }
    }

    /// Angular width in `(0, 2π)`.
    pub fn width(&self) -> f64 {
        let w = (self.left_ray.dir.angle() - self.right_ray.dir.angle()).rem_euclid(TAU);
        if w == 0.0 {
            TAU
        } else {
            w
        }
    }

    pub fn arc(&self) -> Arc {
        Arc::new(self.right_ray.dir.angle(), self.width())
    }

    /// Strict membership; the apex and the bounding rays are excluded.
    pub fn contains(&self, p: Point2) -> bool {
        let d = p - self.apex;
        if d.norm2() == 0.0 {
            return false;
        }
        let rel = (d.angle() - self.right_ray.dir.angle()).rem_euclid(TAU);
        rel > 0.0 && rel < self.width()
    }
}

/// Admissible kernel of one shape for one excluding point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleKernel {
    /// The point is inside the shape or enclosed by it.
    Empty,
    /// Concave polygon case: the cone between the reflected tangent rays.
    Cone(Cone2),
    /// Convex case: everything except the closed shadow behind `x̄`. The
    /// stored cone is the admissible part, wider than `π`.
    FullPlaneMinusShadow(Cone2),
}

impl SingleKernel {
    pub fn is_empty(&self) -> bool {
        matches!(self, SingleKernel::Empty)
    }

    pub fn cone(&self) -> Option<&Cone2> {
        match self {
            SingleKernel::Empty => None,
            SingleKernel::Cone(c) | SingleKernel::FullPlaneMinusShadow(c) => Some(c),
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.cone().is_some_and(|c| c.contains(p))
    }
}

/// Excluding points `X̄`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExcludeSet {
    pub points: Vec<Point2>,
}

impl ExcludeSet {
    pub fn new(points: Vec<Point2>) -> Self {
        Self { points }
    }

    /// The robot and goal positions.
    pub fn robot_goal(x: Point2, x_goal: Point2) -> Self {
        Self { points: vec![x, x_goal] }
    }
}

/// Convex polygon approximation of an admissible kernel, stored as a union of
/// convex pieces (a cone wider than `π` is not convex).
#[derive(Debug, Clone, PartialEq)]
pub enum KernelRegion {
    Empty,
    Region {
        pieces: Vec<ConvexPolygon>,
        /// False when the truncating box cut the region.
        exact: bool,
    },
}

impl KernelRegion {
    pub fn is_empty(&self) -> bool {
        matches!(self, KernelRegion::Empty)
    }

    pub fn pieces(&self) -> &[ConvexPolygon] {
        match self {
            KernelRegion::Empty => &[],
            KernelRegion::Region { pieces, .. } => pieces,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.pieces().iter().any(|q| q.contains(p))
    }

    pub fn area(&self) -> f64 {
        self.pieces().iter().map(ConvexPolygon::area).sum()
    }
}

/// Directions from `xbar` toward the shape, or `None` unless `xbar` is a free
/// exterior point of it.
pub fn shadow_arc(shape: &Shape, xbar: Point2) -> Option<Arc> {
    shape.blocked_arc(xbar).ok()
}

pub fn admissible_kernel_single(shape: &Shape, xbar: Point2) -> SingleKernel {
    let Some(blocked) = shadow_arc(shape, xbar) else {
        return SingleKernel::Empty;
    };
    let refl = blocked.reflected();
    let adm = Arc::new(refl.end(), TAU - refl.width);
    let cone = Cone2::from_arc(xbar, adm);
    if shape.is_convex() {
        SingleKernel::FullPlaneMinusShadow(cone)
    } else {
        SingleKernel::Cone(cone)
    }
}

/// Box used to truncate kernels for a scene with bounding box `scene`.
pub fn kernel_bbox(scene: &Aabb) -> Aabb {
    scene.inflated(BBOX_INFLATION, 1.0)
}

/// Convex pieces of the cone `apex + arc` within `bbox`. An arc wider than
/// `π` is cut into equal sectors; for a single convex shape the cut then runs
/// away from the shape.
fn cone_pieces(apex: Point2, arc: Arc, bbox: &ConvexPolygon) -> Vec<ConvexPolygon> {
    let n = (arc.width / PI).ceil().max(1.0) as usize;
    let w = arc.width / n as f64;
    (0..n)
        .filter_map(|i| {
            let d1 = Point2::from_angle(arc.start + i as f64 * w);
            let d2 = Point2::from_angle(arc.start + (i + 1) as f64 * w);
            bbox.clip_left_of(apex, apex + d1).and_then(|q| q.clip_left_of(apex + d2, apex))
        })
        .collect()
}

/// Admissible directions at one excluder, given the blocked arcs of every
/// shape seen from it. `None` when some shape does not leave it free.
fn admissible_arcs(blocked: &[Option<Arc>]) -> Option<Vec<Arc>> {
    let arcs: Vec<Arc> = blocked.iter().copied().collect::<Option<_>>()?;
    let union = arc_union(&arcs);
    if union.len() == 1 && union[0].is_full() {
        return None;
    }
    let refl = arc_union(&union.iter().map(Arc::reflected).collect::<Vec<_>>());
    Some(arc_complement(&refl))
}

/// Intersection of the admissible kernels for excluders whose blocked arcs
/// are already known (one entry per shape). Arcs computed once per frame for
/// fixed excluders can be reused across clusters this way.
pub fn admissible_kernel_from_arcs(excluders: &[(Point2, Vec<Option<Arc>>)], bbox: &Aabb, delta: f64) -> KernelRegion {
    let frame = ConvexPolygon::from_aabb(bbox);
    let mut region = vec![frame.clone()];
    for (xbar, blocked) in excluders {
        let Some(adm) = admissible_arcs(blocked) else {
            return KernelRegion::Empty;
        };
        if adm.len() == 1 && adm[0].is_full() {
            continue;
        }
        let cones: Vec<ConvexPolygon> = adm.iter().flat_map(|&a| cone_pieces(*xbar, a, &frame)).collect();
        region = region
            .iter()
            .flat_map(|r| cones.iter().filter_map(move |c| r.intersection(c)))
            .collect();
        if region.is_empty() {
            return KernelRegion::Empty;
        }
    }
    let tol = frame.tolerance() * 10.0;
    let exact = !region.iter().flat_map(|q| q.vertices()).any(|&v| {
        (v.x - bbox.min.x).abs() <= tol
            || (v.x - bbox.max.x).abs() <= tol
            || (v.y - bbox.min.y).abs() <= tol
            || (v.y - bbox.max.y).abs() <= tol
    });
    let pieces: Vec<ConvexPolygon> = if delta > 0.0 {
        region.iter().filter_map(|q| q.shrink(delta)).collect()
    } else {
        region
    };
    if pieces.is_empty() {
        KernelRegion::Empty
    } else {
        KernelRegion::Region { pieces, exact }
    }
}

/// Admissible kernel of the union of `shapes` for all points of `xs`, cut to
/// `bbox` and shrunk by `OPEN_MARGIN` times the scene diameter (taken as the
/// box diameter over `BBOX_INFLATION`).
pub fn admissible_kernel(shapes: &[Shape], xs: &ExcludeSet, bbox: &Aabb) -> KernelRegion {
    let excluders: Vec<(Point2, Vec<Option<Arc>>)> = xs
        .points
        .iter()
        .map(|&x| (x, shapes.iter().map(|s| shadow_arc(s, x)).collect()))
        .collect();
    admissible_kernel_from_arcs(&excluders, bbox, open_margin(bbox))
}

/// `δ_open` for a kernel box built by [`kernel_bbox`].
pub fn open_margin(bbox: &Aabb) -> f64 {
    OPEN_MARGIN * bbox.diameter() / BBOX_INFLATION
}

/// Whether `x̄ ∈ SH_p(∪ shapes)`: some point of the union lies on the ray
/// from `p` through `x̄` at or beyond `x̄`.
pub fn in_point_hull(shapes: &[Shape], p: Point2, xbar: Point2) -> bool {
    let d: Vector2 = xbar - p;
    if d.norm2() == 0.0 {
        return shapes.iter().any(|s| s.contains(p));
    }
    shapes.iter().any(|s| match s {
        Shape::Ellipse(e) => e.ray_interval(p, d).is_some_and(|(_, t1)| t1 >= 1.0),
        Shape::Polygon(q) => {
            let r = Ray { origin: p, dir: d };
            q.contains(xbar) || crate::geom::ray_polygon_hits(&r, q).iter().any(|&(t, _)| t >= 1.0)
        }
    })
}

/// Angle of `p - apex` in `[0, 2π)`.
pub fn polar(apex: Point2, p: Point2) -> f64 {
    wrap_angle((p - apex).angle())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{classify_point, Ellipse, PointClass, SimplePolygon};

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn l_shape() -> Shape {
        Shape::Polygon(
            SimplePolygon::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 1.0), p(1.0, 1.0), p(1.0, 2.0), p(0.0, 2.0)]).unwrap(),
        )
    }

    #[test]
    fn circle_shadow() {
        let c = Shape::Ellipse(Ellipse::circle(p(0.0, 0.0), 1.0).unwrap());
        let k = admissible_kernel_single(&c, p(2.0, 0.0));
        assert!(matches!(k, SingleKernel::FullPlaneMinusShadow(_)));
        assert!(k.contains(p(0.0, 0.0)));
        assert!(k.contains(p(-5.0, 0.0)));
        assert!(!k.contains(p(5.0, 0.0)));
    }

    #[test]
    fn notch_cone() {
        let k = admissible_kernel_single(&l_shape(), p(1.5, 1.5));
        let SingleKernel::Cone(c) = k else { panic!("expected a cone, got {k:?}") };
        assert!(c.apex.approx_eq(p(1.5, 1.5), 0.0));
        assert!((c.width() - PI).abs() < 1e-9);
        assert!(c.contains(p(0.5, 0.5)));
        assert!(!c.contains(p(3.0, 3.0)));
        assert!(!in_point_hull(&[l_shape()], p(0.5, 0.5), p(1.5, 1.5)));
        assert!(in_point_hull(&[l_shape()], p(3.0, 3.0), p(1.5, 1.5)));
    }

    #[test]
    fn interior_point_is_empty() {
        assert!(admissible_kernel_single(&l_shape(), p(0.5, 0.5)).is_empty());
        let e = Shape::Ellipse(Ellipse::new(p(0.0, 0.0), 2.0, 1.0, 0.3).unwrap());
        assert!(admissible_kernel_single(&e, p(0.1, 0.1)).is_empty());
    }

    #[test]
    fn two_points_give_cone_intersection() {
        let l = l_shape();
        let (x1, x2) = (p(1.5, 1.5), p(3.0, 0.5));
        let bbox = kernel_bbox(&l.bbox().union(&Aabb::from_points([x1, x2])));
        let r = admissible_kernel(std::slice::from_ref(&l), &ExcludeSet::new(vec![x1, x2]), &bbox);
        let k1 = admissible_kernel_single(&l, x1);
        let k2 = admissible_kernel_single(&l, x2);
        assert!(!r.is_empty());
        let mut seen = 0;
        for i in 0..80 {
            for j in 0..80 {
                let q = p(-8.0 + i as f64 * 0.2, -8.0 + j as f64 * 0.2);
                if r.contains(q) {
                    seen += 1;
                    assert!(k1.contains(q) && k2.contains(q));
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn ring_surrounding_point_is_empty() {
        let shapes: Vec<Shape> = (0..8)
            .map(|i| {
                let th = i as f64 * TAU / 8.0;
                Shape::Ellipse(Ellipse::new(Point2::from_angle(th) * 3.0, 1.5, 0.5, th + PI / 2.0).unwrap())
            })
            .collect();
        assert_eq!(classify_point(&shapes, p(0.0, 0.0)), PointClass::BoundedExterior);
        let bbox = kernel_bbox(&Aabb::from_points([p(-4.0, -4.0), p(4.0, 4.0)]));
        assert!(admissible_kernel(&shapes, &ExcludeSet::new(vec![p(0.0, 0.0)]), &bbox).is_empty());
    }

    #[test]
    fn disjoint_circles_far_point() {
        let shapes = vec![
            Shape::Ellipse(Ellipse::circle(p(0.0, 0.0), 1.0).unwrap()),
            Shape::Ellipse(Ellipse::circle(p(4.0, 0.0), 1.0).unwrap()),
        ];
        let xbar = p(2.0, 10.0);
        let bbox = kernel_bbox(&Aabb::from_points([p(-1.0, -1.0), p(5.0, 10.0)]));
        let r = admissible_kernel(&shapes, &ExcludeSet::new(vec![xbar]), &bbox);
        assert!(!r.is_empty());
        let mut n = 0;
        let b = r.pieces()[0].bbox();
        let mut i = 0u32;
        while n < 100 && i < 100_000 {
            i += 1;
            let q = p(
                b.min.x + (b.max.x - b.min.x) * ((i * 37 % 101) as f64 / 101.0),
                b.min.y + (b.max.y - b.min.y) * ((i * 53 % 103) as f64 / 103.0),
            );
            if r.contains(q) {
                n += 1;
                assert!(!in_point_hull(&shapes, q, xbar), "{q:?}");
            }
        }
        assert_eq!(n, 100);
    }
}
