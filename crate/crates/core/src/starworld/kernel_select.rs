//! Kernel point selection for a cluster.

use crate::admker::KernelRegion;
use crate::geom::{
    convex_decomposition, convex_hull, orient, ConvexPolygon, Orientation, Point2, Shape,
};
use crate::starshape::{KernelSpec, ELLIPSE_SEGMENTS};
use crate::{Error, Result};

/// Kernel chosen for a cluster in an earlier frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PrevKernel {
    pub kernel: KernelSpec,
    pub centroid: Point2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSource {
    /// Chosen from scratch on the clockwise side of `l(x, x_g)`, or on the
    /// other side when that one is empty.
    Fresh,
    /// The previous kernel points, still admissible, reused as they were.
    ReusedKernel,
    /// A new triangle around the previous, still admissible, centroid.
    ReusedCentroid,
    /// The previous centroid left the kernel; a new one was chosen on its side.
    PreviousSide,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelChoice {
    pub kernel: KernelSpec,
    pub centroid: Point2,
    pub source: KernelSource,
}

/// Convex inner approximation of the cluster: ellipses as inscribed polygons,
/// concave polygons by convex decomposition.
pub(crate) fn cluster_parts(shapes: &[&Shape]) -> Vec<ConvexPolygon> {
    shapes
        .iter()
        .flat_map(|s| match s {
            Shape::Ellipse(e) => vec![e.inscribed_polygon(ELLIPSE_SEGMENTS)],
            Shape::Polygon(p) => convex_decomposition(p),
        })
        .collect()
}

fn triangle_fits(piece: &ConvexPolygon, k: &KernelSpec) -> bool {
    k.points.iter().all(|&q| piece.inner_distance(q) >= 0.0)
}

/// Largest equilateral triangle with side at most `l` and centroid `c` inside
/// `piece`, at the fixed orientation `theta`.
pub(crate) fn fit_triangle(piece: &ConvexPolygon, c: Point2, l: f64, theta: f64) -> Option<KernelSpec> {
    let fits = |s: f64| {
        let k = KernelSpec::triangle(c, s, theta);
        triangle_fits(piece, &k).then_some(k)
    };
    if let Some(k) = fits(l) {
        return Some(k);
    }
    let lo = l * 2f64.powi(-10);
    if fits(lo).is_some() {
        let (mut a, mut b) = (lo, l);
        for _ in 0..40 {
            let m = 0.5 * (a + b);
            if fits(m).is_some() {
                a = m;
            } else {
                b = m;
            }
        }
        return fits(a);
    }
    let floor = 1e-9 * c.magnitude().max(1.0);
    let mut s = lo;
    while s > floor {
        s *= 0.5;
        if let Some(k) = fits(s) {
            return Some(k);
        }
    }
    None
}

/// Kernel piece holding `c` deepest, if any.
fn host_of(pieces: &[ConvexPolygon], c: Point2) -> Option<&ConvexPolygon> {
    pieces
        .iter()
        .map(|q| (q.inner_distance(c), q))
        .filter(|(d, _)| *d >= 0.0)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, q)| q)
}

fn triangle_at(pieces: &[ConvexPolygon], host: &ConvexPolygon, c: Point2, l: f64) -> Option<KernelSpec> {
    fit_triangle(host, c, l, host.principal_angle()).or_else(|| {
        pieces
            .iter()
            .filter(|q| q.inner_distance(c) >= 0.0)
            .find_map(|q| fit_triangle(q, c, l, q.principal_angle()))
    })
}

/// Selects `K` for a cluster with shapes `shapes` and admissible kernel
/// `region`.
///
/// `S` is the kernel intersected with the cluster, or with its convex hull,
/// or the kernel itself, whichever is first nonempty. `S` is split by
/// `l(x, x_g)`; the clockwise side is preferred unless the previous centroid
/// was on the other one. `k_c` is the centroid of the largest piece on the
/// chosen side and `K` the largest equilateral triangle around it with side
/// at most `l` inside the kernel.
pub fn select_kernel_points(
    shapes: &[&Shape],
    region: &KernelRegion,
    prev: Option<&PrevKernel>,
    x: Point2,
    x_g: Point2,
    l: f64,
) -> Result<KernelChoice> {
    let pieces = region.pieces();
    if pieces.is_empty() {
        return Err(Error::EmptyKernel);
    }
    if !(l > 0.0) {
        return Err(Error::MalformedInput("kernel side length must be positive".into()));
    }

    if let Some(pk) = prev {
        if let Some(host) = host_of(pieces, pk.centroid) {
            if pieces.iter().any(|q| triangle_fits(q, &pk.kernel)) {
                return Ok(KernelChoice { kernel: pk.kernel.clone(), centroid: pk.centroid, source: KernelSource::ReusedKernel });
            }
            if let Some(kernel) = triangle_at(pieces, host, pk.centroid, l) {
                return Ok(KernelChoice { kernel, centroid: pk.centroid, source: KernelSource::ReusedCentroid });
            }
        }
    }

    let parts = cluster_parts(shapes);
    let mut s: Vec<ConvexPolygon> = pieces.iter().flat_map(|q| parts.iter().filter_map(move |c| q.intersection(c))).collect();
    if s.is_empty() {
        let pts: Vec<Point2> = parts.iter().flat_map(|c| c.vertices().iter().copied()).collect();
        if let Ok(ch) = convex_hull(&pts) {
            s = pieces.iter().filter_map(|q| q.intersection(&ch)).collect();
        }
    }
    if s.is_empty() {
        s = pieces.to_vec();
    }

    let ccw_side = prev.is_some_and(|pk| orient(x, x_g, pk.centroid) == Orientation::Ccw);
    let (cw, ccw): (Vec<ConvexPolygon>, Vec<ConvexPolygon>) = if x.approx_eq(x_g, 0.0) {
        (s, Vec::new())
    } else {
        (
            s.iter().filter_map(|q| q.clip_left_of(x_g, x)).collect(),
            s.iter().filter_map(|q| q.clip_left_of(x, x_g)).collect(),
        )
    };
    let (first, second) = if ccw_side { (&ccw, &cw) } else { (&cw, &ccw) };
    let largest = |v: &[ConvexPolygon]| v.iter().max_by(|a, b| a.area().total_cmp(&b.area())).cloned();
    let side = largest(first).or_else(|| largest(second)).ok_or(Error::EmptyKernel)?;
    let kc = side.centroid();
    let host = host_of(pieces, kc).ok_or(Error::EmptyKernel)?;
    let kernel = triangle_at(pieces, host, kc, l).ok_or(Error::EmptyKernel)?;
    let source = if prev.is_some() { KernelSource::PreviousSide } else { KernelSource::Fresh };
    Ok(KernelChoice { kernel, centroid: kc, source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admker::{admissible_kernel, kernel_bbox, ExcludeSet};
    use crate::geom::{Aabb, Ellipse, SimplePolygon};

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn setup(shape: &Shape, x: Point2, xg: Point2) -> KernelRegion {
        let bbox = kernel_bbox(&shape.bbox().union(&Aabb::from_points([x, xg])));
        admissible_kernel(std::slice::from_ref(shape), &ExcludeSet::robot_goal(x, xg), &bbox)
    }

    #[test]
    fn convex_obstacle_gets_triangle_inside() {
        let sq = Shape::Polygon(SimplePolygon::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 2.0), p(0.0, 2.0)]).unwrap());
        let (x, xg) = (p(-3.0, 1.0), p(5.0, 1.0));
        let region = setup(&sq, x, xg);
        let k = select_kernel_points(&[&sq], &region, None, x, xg, 0.1).unwrap();
        assert!(k.kernel.points.iter().all(|&q| sq.contains(q)));
        let side = k.kernel.points[0].dist(k.kernel.points[1]);
        assert!((side - 0.1).abs() < 1e-12);
        // clockwise side of the robot-goal line is below it
        assert_eq!(orient(x, xg, k.centroid), Orientation::Cw);
        assert_eq!(k.source, KernelSource::Fresh);
    }

    #[test]
    fn admissible_previous_centroid_is_kept() {
        let e = Shape::Ellipse(Ellipse::new(p(0.0, 0.0), 2.0, 1.0, 0.2).unwrap());
        let (x, xg) = (p(-4.0, 0.0), p(4.0, 0.5));
        let region = setup(&e, x, xg);
        let prev = PrevKernel { kernel: KernelSpec::triangle(p(0.3, 0.4), 0.1, 0.0), centroid: p(0.3, 0.4) };
        let k = select_kernel_points(&[&e], &region, Some(&prev), x, xg, 0.1).unwrap();
        assert_eq!(k.kernel, prev.kernel);
        assert_eq!(k.centroid, prev.centroid);
    }

    #[test]
    fn previous_side_is_kept() {
        // the robot-goal line runs through the obstacle, so both sides exist
        let sq = Shape::Polygon(SimplePolygon::new(vec![p(0.0, -1.0), p(2.0, -1.0), p(2.0, 1.0), p(0.0, 1.0)]).unwrap());
        let (x, xg) = (p(-3.0, 0.0), p(5.0, 0.0));
        let region = setup(&sq, x, xg);
        // a previous centroid on the counter-clockwise side, far outside the kernel
        let far = p(1.0, 40.0);
        assert!(!region.contains(far));
        let prev = PrevKernel { kernel: KernelSpec::triangle(far, 0.1, 0.0), centroid: far };
        let k = select_kernel_points(&[&sq], &region, Some(&prev), x, xg, 0.1).unwrap();
        assert_eq!(orient(x, xg, k.centroid), Orientation::Ccw);
        assert_eq!(k.source, KernelSource::PreviousSide);
        let fresh = select_kernel_points(&[&sq], &region, None, x, xg, 0.1).unwrap();
        assert_eq!(orient(x, xg, fresh.centroid), Orientation::Cw);
    }

    #[test]
    fn thin_kernel_gets_smaller_triangle() {
        let piece = ConvexPolygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.02), p(0.0, 0.02)]).unwrap();
        let k = fit_triangle(&piece, p(0.5, 0.01), 0.1, piece.principal_angle()).unwrap();
        assert!(k.points.iter().all(|&q| piece.contains(q)));
        let side = k.points[0].dist(k.points[1]);
        assert!(side < 0.1 && side > 0.01);
    }
}
