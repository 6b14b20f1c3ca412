mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use starworlds::admker::{admissible_kernel, kernel_bbox, ExcludeSet};
use starworlds::geom::{orient, Aabb, Ellipse, Orientation, Point2, Shape};
use starworlds::scenario::generate_scene_at;
use starworlds::starshape::{sh_kernel_convex, KernelSpec};
use starworlds::starworld::*;
use std::f64::consts::TAU;

fn scene(seed: u64) -> (Vec<Obstacle>, Point2, Point2) {
    let mut r = rng(seed);
    let n = r.gen_range(2..16);
    let s = generate_scene_at(n, seed, 0).unwrap();
    (s.obstacles, s.robot, s.goal)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn formed_worlds_validate(seed in any::<u64>()) {
        let (obs, x, xg) = scene(seed);
        let w = form_star_world(&obs, x, xg, &FormOptions::default(), None).unwrap();
        let rep = validate_world(&w, &obs, x, xg);
        prop_assert!(rep.all_pass(), "{:?}", rep.failures);
        prop_assert!(w.iterations >= 1 && w.iterations <= FormOptions::default().max_iterations);
        if w.status == WorldStatus::Disjoint {
            // clusters partition the obstacles
            let mut all: Vec<usize> = w.clusters.iter().flat_map(|c| c.members.clone()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..obs.len()).collect::<Vec<_>>());
            prop_assert_eq!(w.clusters.len(), w.obstacles.len());
            for (i, o) in obs.iter().enumerate() {
                let c = w.cluster_map[&o.id];
                prop_assert!(w.clusters[c].members.contains(&i));
            }
        }
    }

    #[test]
    fn unchanged_scene_reproduces_the_world(seed in any::<u64>()) {
        let (obs, x, xg) = scene(seed);
        let opts = FormOptions::default();
        let w = form_star_world(&obs, x, xg, &opts, None).unwrap();
        prop_assume!(w.status == WorldStatus::Disjoint);
        let again = form_star_world(&obs, x, xg, &opts, Some(&w)).unwrap();
        prop_assert_eq!(w.obstacles.len(), again.obstacles.len());
        for (a, b) in w.obstacles.iter().zip(&again.obstacles) {
            let bits = |k: &KernelSpec| k.points.iter().map(|q| (q.x.to_bits(), q.y.to_bits())).collect::<Vec<_>>();
            prop_assert_eq!(bits(a.kernel_spec()), bits(b.kernel_spec()));
            prop_assert_eq!(a.pieces(), b.pieces());
        }
    }

    #[test]
    fn clustering_never_grows_and_joins_intersecting_stars(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..12);
        let stars: Vec<_> = (0..n)
            .map(|_| {
                let c = p(r.gen_range(-6.0..6.0), r.gen_range(-6.0..6.0));
                let e = Ellipse::circle(c, r.gen_range(0.5..2.0)).unwrap();
                let k = KernelSpec::triangle(c, 0.1, 0.0);
                sh_kernel_convex(&Shape::Ellipse(e).as_convex().unwrap(), &k)
            })
            .collect();
        let members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let groups = cluster_star_obstacles(&stars, &members);
        prop_assert!(groups.len() <= n);
        let mut all: Vec<usize> = groups.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        let group_of = |i: usize| groups.iter().position(|g| g.contains(&i)).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                if stars_intersect(&stars[i], &stars[j]) {
                    prop_assert_eq!(group_of(i), group_of(j));
                }
            }
        }
        // grouping is deterministic
        let again = cluster_star_obstacles(&stars, &members);
        prop_assert_eq!(groups, again);
    }

    #[test]
    fn lost_centroid_keeps_its_side(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = p(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let poly = random_convex(&mut r, c, 2.0);
        let shape = Shape::Polygon(poly.as_simple());
        let th = r.gen_range(0.0..TAU);
        let x = c + Point2::from_angle(th) * 6.0;
        let xg = c - Point2::from_angle(th + r.gen_range(-0.2..0.2)) * 6.0;
        prop_assume!(classify_ok(&shape, x, xg));
        let bbox = kernel_bbox(&Aabb::from_points([x, xg]).union(&shape.bbox()));
        let region = admissible_kernel(std::slice::from_ref(&shape), &ExcludeSet::robot_goal(x, xg), &bbox);
        prop_assume!(!region.is_empty());
        let side = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let normal = (xg - x).perp().normalized().unwrap();
        let far = c + normal * (side * 10.0 * bbox.diameter());
        prop_assume!(!region.contains(far));
        let want = orient(x, xg, far);
        // the kernel part inside the obstacle must reach the wanted side
        let (a, b) = if want == Orientation::Ccw { (x, xg) } else { (xg, x) };
        let has_side = region
            .pieces()
            .iter()
            .filter_map(|q| q.intersection(&poly))
            .filter_map(|q| q.clip_left_of(a, b))
            .any(|q| q.area() > 1e-9);
        prop_assume!(has_side);
        let prev = PrevKernel { kernel: KernelSpec::triangle(far, 0.1, 0.0), centroid: far };
        let k = select_kernel_points(&[&shape], &region, Some(&prev), x, xg, 0.1).unwrap();
        prop_assert_eq!(orient(x, xg, k.centroid), want);
        prop_assert!(k.kernel.points.iter().all(|&q| region.contains(q)));
    }
}

fn classify_ok(s: &Shape, x: Point2, xg: Point2) -> bool {
    !s.contains(x) && !s.contains(xg) && orient(x, xg, s.bbox().center()) != Orientation::Collinear
}
