mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use starworlds::geom::{orient, Orientation, Point2};
use starworlds::planner::*;
use starworlds::scenario::{from_text, generate_scene_at};
use starworlds::starworld::{form_star_world, FormOptions, StarWorld, WorldStatus};
use std::f64::consts::TAU;

fn disjoint_world(seed: u64, max_n: usize) -> Option<(starworlds::scenario::Scenario, StarWorld)> {
    let n = rng(seed).gen_range(2..=max_n);
    let s = generate_scene_at(n, seed, 1).ok()?;
    let w = form_star_world(&s.obstacles, s.robot, s.goal, &s.form, None).ok()?;
    (w.status == WorldStatus::Disjoint).then_some((s, w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn velocity_is_tangent_on_the_boundary(seed in any::<u64>()) {
        let found = disjoint_world(seed, 12);
        prop_assume!(found.is_some());
        let (s, w) = found.unwrap();
        let mut r = rng(seed);
        let i = r.gen_range(0..w.len());
        let star = &w.obstacles[i];
        let c0 = star.kernel_centroid();
        let hit = star.boundary_hit(c0, Point2::from_angle(r.gen_range(0.0..TAU))).unwrap();
        let x = hit.point;
        // the boundary point must be clear of the other stars
        prop_assume!(w.obstacles.iter().enumerate().all(|(j, o)| j == i || !o.contains(x)));
        prop_assume!(orient(x, s.goal, c0) != Orientation::Collinear);
        let centers: Vec<Point2> = w.obstacles.iter().map(|o| center_point(o, x, s.goal)).collect();
        let g = gamma(star, centers[i], x).unwrap();
        prop_assert!((g - 1.0).abs() < 1e-9, "Γ = {g}");
        let v = modulated_velocity(x, s.goal, &w, &centers, 1.0).unwrap();
        let n = star.boundary_hit(centers[i], x - centers[i]).unwrap().normal;
        prop_assert!(v.dot(n) <= 1e-7 * v.norm().max(1.0), "v·n = {}", v.dot(n));
    }

    #[test]
    fn gamma_grows_along_rays(seed in any::<u64>()) {
        let found = disjoint_world(seed, 8);
        prop_assume!(found.is_some());
        let (s, w) = found.unwrap();
        let mut r = rng(seed);
        for star in &w.obstacles {
            let c = center_point(star, s.robot, s.goal);
            let d = Point2::from_angle(r.gen_range(0.0..TAU));
            let b = star.boundary_hit(c, d).unwrap();
            let mut last = 0.0;
            for k in 1..40 {
                let g = gamma(star, c, c + d * (b.t * k as f64 / 20.0)).unwrap();
                prop_assert!(g >= last);
                last = g;
            }
            prop_assert!((gamma(star, c, b.point).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn traces_are_safe_and_bounded(seed in any::<u64>()) {
        let found = disjoint_world(seed, 10);
        prop_assume!(found.is_some());
        let (s, _) = found.unwrap();
        let params = PlannerParams { max_steps: 1500, ..s.planner.clone() };
        let mut min_gamma = f64::INFINITY;
        let mut centers_ok = true;
        let trace = simulate_with(&s.obstacles, s.robot, s.goal, &s.form, &params, |_, w, x| {
            if w.status == WorldStatus::Disjoint {
                for st in &w.obstacles {
                    let c = center_point(st, x, s.goal);
                    let inside = st.kernel_hull().map_or(true, |h| h.contains_strict(c, 0.0));
                    centers_ok &= inside && orient(x, s.goal, c) != Orientation::Collinear;
                }
                min_gamma = gammas_at(w, x, s.goal).unwrap().into_iter().fold(min_gamma, f64::min);
            }
        })
        .unwrap();
        prop_assert!(min_gamma >= 1.0 - 1e-6, "min Γ {min_gamma}");
        prop_assert!(centers_ok);
        for q in trace.positions.windows(2) {
            prop_assert!(q[0].dist(q[1]) <= params.v_max * params.dt * (1.0 + 1e-12));
        }
    }
}

#[test]
fn most_small_scenes_reach_the_goal() {
    let mut tried = 0;
    let mut reached = 0;
    let mut seed = 0;
    while tried < 50 {
        seed += 1;
        let Some((s, _)) = disjoint_world(seed, 10) else { continue };
        tried += 1;
        let t = simulate(&s.obstacles, s.robot, s.goal, &s.form, &s.planner).unwrap();
        reached += (t.termination == Termination::GoalReached) as usize;
    }
    assert!(reached >= 48, "{reached}/50 reached the goal");
}

#[test]
fn moving_scene_reaches_the_goal() {
    let s = from_text(include_str!("../scenes/moving.txt")).unwrap();
    let obs = s.inflated_obstacles().unwrap();
    let t = simulate(&obs, s.robot, s.goal, &s.form, &s.planner).unwrap();
    assert_eq!(t.termination, Termination::GoalReached);
    assert!(t.frames.iter().all(|f| f.status == WorldStatus::Disjoint));
}

#[test]
fn no_obstacles_goes_straight() {
    let (x, xg) = (p(0.0, 0.0), p(3.0, 4.0));
    let t = simulate(&[], x, xg, &FormOptions::default(), &PlannerParams::default()).unwrap();
    assert_eq!(t.termination, Termination::GoalReached);
    for q in &t.positions {
        assert_eq!(orient(x, xg, *q), Orientation::Collinear);
    }
}
