//! Programmatic checks of the star world conditions.

use super::{stars_intersect, Obstacle, StarWorld, WorldStatus};
use crate::geom::Point2;
use crate::starshape::StarObstacle;
use std::fmt::Write as _;

const BOUNDARY_SAMPLES: usize = 500;
const RAYS: usize = 720;

/// Outcome of the five checks. For a fallback world `disjoint` is reported
/// but not required.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub status: WorldStatus,
    pub coverage: bool,
    pub strict_star: bool,
    pub robot_excluded: bool,
    pub goal_excluded: bool,
    pub disjoint: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    /// Whether every condition required for the world's status holds.
    pub fn all_pass(&self) -> bool {
        let base = self.coverage && self.strict_star && self.robot_excluded && self.goal_excluded;
        match self.status {
            WorldStatus::Disjoint => base && self.disjoint,
            WorldStatus::IntersectingFallback => base,
        }
    }

    /// `key=value` lines.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let status = match self.status {
            WorldStatus::Disjoint => "disjoint",
            WorldStatus::IntersectingFallback => "intersecting_fallback",
        };
        let _ = writeln!(s, "status={status}");
        let _ = writeln!(s, "coverage={}", self.coverage);
        let _ = writeln!(s, "strict_star={}", self.strict_star);
        let _ = writeln!(s, "robot_excluded={}", self.robot_excluded);
        let _ = writeln!(s, "goal_excluded={}", self.goal_excluded);
        let _ = writeln!(s, "disjoint={}", self.disjoint);
        let _ = writeln!(s, "pass={}", self.all_pass());
        for f in &self.failures {
            let _ = writeln!(s, "failure={f}");
        }
        s
    }
}

/// Whether every ray from the kernel centroid leaves the star exactly once:
/// along each ray the piece intervals must merge into one interval that
/// starts at the origin.
pub fn single_crossing(star: &StarObstacle, rays: usize) -> bool {
    let c = star.kernel_centroid();
    if !star.contains(c) {
        return false;
    }
    let tol = 1e-9 * star.bbox().diameter().max(1.0);
    (0..rays).all(|i| {
        let u = Point2::from_angle(std::f64::consts::TAU * i as f64 / rays as f64);
        let mut iv: Vec<(f64, f64)> = star.pieces().iter().filter_map(|p| p.ray_interval(c, u)).filter(|&(_, t1)| t1 >= 0.0).collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let Some(&(t0, mut reach)) = iv.first() else { return false };
        if t0 > tol {
            return false;
        }
        for &(a, b) in &iv[1..] {
            if a > reach + tol {
                return false;
            }
            reach = reach.max(b);
        }
        // the boundary point must not be a grazing touch of a zero-length ray
        reach > tol
    })
}

fn star_of<'a>(world: &'a StarWorld, o: &Obstacle) -> Vec<&'a StarObstacle> {
    match world.status {
        WorldStatus::Disjoint => world.cluster_map.get(&o.id).map(|&i| vec![&world.obstacles[i]]).unwrap_or_default(),
        // decomposed pieces are not tracked one by one; any piece may cover
        WorldStatus::IntersectingFallback => world.obstacles.iter().collect(),
    }
}

pub fn validate_world(world: &StarWorld, originals: &[Obstacle], x: Point2, x_g: Point2) -> ValidationReport {
    let mut failures = Vec::new();

    let mut coverage = true;
    for o in originals {
        let stars = star_of(world, o);
        let missed = o
            .shape
            .sample_boundary(BOUNDARY_SAMPLES)
            .into_iter()
            .filter(|&q| !stars.iter().any(|s| s.contains(q)))
            .count();
        if missed > 0 {
            coverage = false;
            failures.push(format!("coverage:{}:{missed}", o.id));
        }
    }

    let mut strict_star = true;
    for (i, s) in world.obstacles.iter().enumerate() {
        if !single_crossing(s, RAYS) {
            strict_star = false;
            failures.push(format!("strict_star:{i}"));
        }
    }

    let robot_excluded = !world.obstacles.iter().any(|s| s.contains(x));
    if !robot_excluded {
        failures.push("robot_excluded".into());
    }
    let goal_excluded = !world.obstacles.iter().any(|s| s.contains(x_g));
    if !goal_excluded {
        failures.push("goal_excluded".into());
    }

    let mut disjoint = true;
    let n = world.obstacles.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if stars_intersect(&world.obstacles[i], &world.obstacles[j]) {
                disjoint = false;
                if world.status == WorldStatus::Disjoint {
                    failures.push(format!("disjoint:{i}:{j}"));
                }
            }
        }
    }

    ValidationReport { status: world.status, coverage, strict_star, robot_excluded, goal_excluded, disjoint, failures }
}
