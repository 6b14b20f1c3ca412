mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use starworlds::admker::*;
use starworlds::geom::{classify_point, Aabb, ConvexPolygon, Point2, PointClass, Shape};

struct Instance {
    shapes: Vec<Shape>,
    xs: Vec<Point2>,
    bbox: Aabb,
}

fn instance(seed: u64) -> Instance {
    let mut r = rng(seed);
    let shapes: Vec<Shape> = (0..r.gen_range(1..5))
        .map(|_| {
            let c = p(r.gen_range(-4.0..4.0), r.gen_range(-4.0..4.0));
            let rad = r.gen_range(0.8..2.5);
            random_shape(&mut r, c, rad)
        })
        .collect();
    let xs: Vec<Point2> = (0..r.gen_range(1..4)).map(|_| p(r.gen_range(-7.0..7.0), r.gen_range(-7.0..7.0))).collect();
    let scene = shapes.iter().fold(Aabb::from_points(xs.iter().copied()), |b, s| b.union(&s.bbox()));
    Instance { shapes, xs, bbox: kernel_bbox(&scene) }
}

fn dist_to_region(q: Point2, pieces: &[ConvexPolygon]) -> f64 {
    pieces
        .iter()
        .map(|c| if c.contains(q) { 0.0 } else { c.edges().map(|e| e.dist_to(q)).fold(f64::INFINITY, f64::min) })
        .fold(f64::INFINITY, f64::min)
}

fn intersect(a: &[ConvexPolygon], b: &[ConvexPolygon]) -> Vec<ConvexPolygon> {
    a.iter().flat_map(|x| b.iter().filter_map(move |y| x.intersection(y))).collect()
}

/// One-sided Hausdorff distance estimated on vertices and a grid.
fn excess(a: &[ConvexPolygon], b: &[ConvexPolygon], bbox: &Aabb) -> f64 {
    let mut worst = 0.0f64;
    for q in a.iter().flat_map(|c| c.vertices().iter().copied()) {
        worst = worst.max(dist_to_region(q, b));
    }
    let n = 60;
    for i in 0..=n {
        for j in 0..=n {
            let q = p(
                bbox.min.x + (bbox.max.x - bbox.min.x) * i as f64 / n as f64,
                bbox.min.y + (bbox.max.y - bbox.min.y) * j as f64 / n as f64,
            );
            if a.iter().any(|c| c.contains(q)) {
                worst = worst.max(dist_to_region(q, b));
            }
        }
    }
    worst
}

fn arcs_for(shapes: &[Shape], xs: &[Point2]) -> Vec<(Point2, Vec<Option<starworlds::geom::Arc>>)> {
    xs.iter().map(|&x| (x, shapes.iter().map(|s| shadow_arc(s, x)).collect())).collect()
}

fn raw(shapes: &[Shape], xs: &[Point2], bbox: &Aabb) -> Vec<ConvexPolygon> {
    admissible_kernel_from_arcs(&arcs_for(shapes, xs), bbox, 0.0).pieces().to_vec()
}

fn free(shapes: &[Shape], xs: &[Point2]) -> bool {
    xs.iter().all(|&x| classify_point(shapes, x) == PointClass::FreeExterior)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_region_points_are_admissible(seed in any::<u64>()) {
        let inst = instance(seed);
        let region = admissible_kernel(&inst.shapes, &ExcludeSet::new(inst.xs.clone()), &inst.bbox);
        let reach = 4.0 * inst.bbox.diameter();
        if !free(&inst.shapes, &inst.xs) {
            prop_assert!(region.is_empty());
            return Ok(());
        }
        let mut r = rng(seed ^ 0x5eed);
        for piece in region.pieces() {
            for _ in 0..20 {
                let Some(q) = sample_in(&mut r, piece) else { break };
                for &x in &inst.xs {
                    prop_assert!(!excluded_by_hull(&inst.shapes, q, x, reach), "{q:?} sees {x:?} in its hull");
                }
            }
        }
    }

    #[test]
    fn empty_only_without_robust_admissible_points(seed in any::<u64>()) {
        let inst = instance(seed);
        if !free(&inst.shapes, &inst.xs) {
            return Ok(());
        }
        let region = admissible_kernel(&inst.shapes, &ExcludeSet::new(inst.xs.clone()), &inst.bbox);
        if !region.is_empty() {
            return Ok(());
        }
        let reach = 4.0 * inst.bbox.diameter();
        let b = inst.bbox;
        let n = 80;
        let h = 1e-3 * b.diameter();
        for i in 1..n {
            for j in 1..n {
                let q = p(b.min.x + (b.max.x - b.min.x) * i as f64 / n as f64, b.min.y + (b.max.y - b.min.y) * j as f64 / n as f64);
                let robust = [p(0.0, 0.0), p(h, 0.0), p(-h, 0.0), p(0.0, h), p(0.0, -h)]
                    .iter()
                    .all(|&d| inst.xs.iter().all(|&x| !excluded_by_hull(&inst.shapes, q + d, x, reach)));
                prop_assert!(!robust, "empty region but {q:?} is admissible");
            }
        }
    }

    #[test]
    fn union_of_shapes_intersects_kernels(seed in any::<u64>()) {
        let inst = instance(seed);
        prop_assume!(inst.shapes.len() >= 2);
        let (a, b) = inst.shapes.split_at(1);
        let whole = raw(&inst.shapes, &inst.xs, &inst.bbox);
        let split = intersect(&raw(a, &inst.xs, &inst.bbox), &raw(b, &inst.xs, &inst.bbox));
        let tol = 1e-9 * inst.bbox.diameter();
        prop_assert!(excess(&whole, &split, &inst.bbox) <= tol);
        prop_assert!(excess(&split, &whole, &inst.bbox) <= tol);
    }

    #[test]
    fn excluders_intersect_kernels(seed in any::<u64>()) {
        let inst = instance(seed);
        prop_assume!(inst.xs.len() >= 2);
        let whole = raw(&inst.shapes, &inst.xs, &inst.bbox);
        let split = inst.xs.iter().skip(1).fold(raw(&inst.shapes, &inst.xs[..1], &inst.bbox), |acc, &x| {
            intersect(&acc, &raw(&inst.shapes, &[x], &inst.bbox))
        });
        let tol = 1e-9 * inst.bbox.diameter();
        prop_assert!(excess(&whole, &split, &inst.bbox) <= tol);
        prop_assert!(excess(&split, &whole, &inst.bbox) <= tol);
    }

    #[test]
    fn empty_single_kernel_iff_not_free(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_shape(&mut r, p(0.0, 0.0), 2.0);
        let x = p(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let k = admissible_kernel_single(&s, x);
        let class = classify_point(std::slice::from_ref(&s), x);
        prop_assert_eq!(k.is_empty(), class != PointClass::FreeExterior);
    }

    #[test]
    fn cone_boundary_is_not_admissible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_shape(&mut r, p(0.0, 0.0), 2.0);
        let x = p(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
        let Some(cone) = admissible_kernel_single(&s, x).cone().copied() else { return Ok(()) };
        let bbox = kernel_bbox(&s.bbox().union(&Aabb::from_points([x])));
        let region = admissible_kernel(std::slice::from_ref(&s), &ExcludeSet::new(vec![x]), &bbox);
        let reach = 4.0 * bbox.diameter();
        for (ray, sign) in [(cone.right_ray, -1.0), (cone.left_ray, 1.0)] {
            let dist = r.gen_range(0.5..4.0);
            let on = x + ray.dir.rotate(sign * 1e-9) * dist;
            prop_assert!(excluded_by_hull(std::slice::from_ref(&s), on, x, reach));
            prop_assert!(!region.contains(on));
            let inside = x + ray.dir.rotate(-sign * 1e-3) * dist;
            if region.contains(inside) {
                prop_assert!(!excluded_by_hull(std::slice::from_ref(&s), inside, x, reach));
            }
        }
    }
}
