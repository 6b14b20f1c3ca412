//! A reactive planner over a star world: the attractor `x_g - x` is
//! modulated near each star obstacle so the flow slides along its boundary.
//!
//! This is a compact stand-in for a full modulated dynamical system; the
//! eigenvalues and weights are the usual ones, the rest is kept minimal.

use crate::geom::{orient, Orientation, Point2, Vector2};
use crate::starshape::StarObstacle;
use crate::starworld::{convex_decomposition_world, form_star_world, FormOptions, Obstacle, StarWorld, WorldStatus};
use crate::{Error, Result};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerParams {
    pub dt: f64,
    pub v_max: f64,
    pub max_steps: usize,
    pub goal_tolerance: f64,
    /// Feed the obstacles through star world formation; when false, each
    /// obstacle is only split into convex parts.
    pub form_star_world: bool,
    /// Steps over which a displacement below `stall_tolerance` ends the run.
    pub stall_window: usize,
    pub stall_tolerance: f64,
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            dt: 0.02,
            v_max: 1.0,
            max_steps: 10_000,
            goal_tolerance: 0.05,
            form_star_world: true,
            stall_window: 100,
            stall_tolerance: 1e-9,
        }
    }
}

/// `Γ - 1` below which the inward velocity component is dropped.
pub const BOUNDARY_LAYER: f64 = 1e-6;

/// Reference point of a star obstacle: the kernel centroid, moved off the
/// line through robot and goal when it lies on it.
pub fn center_point(s: &StarObstacle, x: Point2, x_g: Point2) -> Point2 {
    let c = s.kernel_centroid();
    if orient(x, x_g, c) != Orientation::Collinear {
        return c;
    }
    let (Some(hull), Some(d)) = (s.kernel_hull(), (x_g - x).normalized()) else {
        return c;
    };
    let depth = hull.inner_distance(c);
    if depth <= 0.0 {
        return c;
    }
    // clockwise side of the robot-goal line, as preferred by kernel selection
    c - d.perp() * (0.5 * depth)
}

/// `Γ(p) = (|p - c| / |b - c|)²` with `b` the boundary point on the ray from
/// `c` through `p`.
pub fn gamma(s: &StarObstacle, c: Point2, p: Point2) -> Result<f64> {
    let d = p - c;
    if d.norm2() == 0.0 {
        return Ok(0.0);
    }
    let hit = s.boundary_hit(c, d)?;
    Ok(1.0 / (hit.t * hit.t))
}

struct Local {
    gamma: f64,
    r: Vector2,
    normal: Vector2,
}

fn local(s: &StarObstacle, c: Point2, x: Point2) -> Result<Local> {
    let d = x - c;
    let hit = s.boundary_hit(c, d)?;
    let r = d.normalized().unwrap_or(Point2::new(1.0, 0.0));
    Ok(Local { gamma: 1.0 / (hit.t * hit.t), r, normal: hit.normal })
}

/// `M f` with `M = E D E⁻¹`, `E = [r, e]`, `D = diag(1 - 1/Γ, 1 + 1/Γ)`.
/// `e` is tangent to the boundary at `Γ = 1` and turns toward `r⊥` far away.
fn modulate(l: &Local, f: Vector2) -> Vector2 {
    let inv = 1.0 / l.gamma;
    let m = (l.normal * inv + l.r * (1.0 - inv)).normalized().unwrap_or(l.r);
    let mut e = m.perp();
    let mut det = l.r.cross(e);
    if det.abs() < 1e-6 {
        e = l.r.perp();
        det = 1.0;
    }
    // f = a r + b e
    let a = f.cross(e) / det;
    let b = l.r.cross(f) / det;
    l.r * (a * (1.0 - inv)) + e * (b * (1.0 + inv))
}

/// Normalized weights `w_i ∝ Π_{j≠i} (Γ_j - 1) / ((Γ_i - 1) + (Γ_j - 1))`,
/// evaluated in log space. A touched obstacle takes all the weight.
fn weights(gammas: &[f64]) -> Vec<f64> {
    let d: Vec<f64> = gammas.iter().map(|g| (g - 1.0).max(0.0)).collect();
    let touched = d.iter().filter(|&&x| x == 0.0).count();
    if touched > 0 {
        return d.iter().map(|&x| if x == 0.0 { 1.0 / touched as f64 } else { 0.0 }).collect();
    }
    let logs: Vec<f64> = (0..d.len())
        .map(|i| (0..d.len()).filter(|&j| j != i).map(|j| d[j].ln() - (d[i] + d[j]).ln()).sum())
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|w| w / sum).collect()
}

/// Planner velocity at `x`, clamped to `v_max`.
pub fn modulated_velocity(x: Point2, x_g: Point2, world: &StarWorld, centers: &[Point2], v_max: f64) -> Result<Vector2> {
    let f = x_g - x;
    let mut locals = Vec::with_capacity(world.len());
    for (i, (s, &c)) in world.obstacles.iter().zip(centers).enumerate() {
        let l = local(s, c, x)?;
        if l.gamma < 1.0 - 1e-9 {
            return Err(Error::InsideObstacle { index: i, gamma: l.gamma });
        }
        locals.push(l);
    }
    let v = if locals.is_empty() {
        f
    } else {
        let w = weights(&locals.iter().map(|l| l.gamma).collect::<Vec<_>>());
        locals.iter().zip(&w).fold(Point2::default(), |acc, (l, &wi)| acc + modulate(l, f) * wi)
    };
    let n = v.norm();
    Ok(if n > v_max { v * (v_max / n) } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GoalReached,
    MaxSteps,
    /// Displacement over the stall window fell below the tolerance.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameSummary {
    pub obstacles: usize,
    pub status: WorldStatus,
    pub iterations: usize,
    pub compute_ms: f64,
    /// Smallest `Γ` at the robot position.
    pub min_gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    pub positions: Vec<Point2>,
    pub frames: Vec<FrameSummary>,
    pub termination: Termination,
}

fn world_for(obstacles: &[Obstacle], x: Point2, x_g: Point2, form: &FormOptions, params: &PlannerParams, prev: Option<&StarWorld>) -> Result<StarWorld> {
    if params.form_star_world {
        form_star_world(obstacles, x, x_g, form, prev)
    } else {
        // raw obstacles may pin the robot to a boundary point; only the interior is refused
        for o in obstacles {
            if o.shape.contains_strict(x, crate::geom::eps_for(x.magnitude())) {
                return Err(Error::RobotInsideObstacle(o.id.clone()));
            }
        }
        Ok(convex_decomposition_world(obstacles))
    }
}

/// Runs the planner from `x0` to `x_g`. `on_frame` sees every frame's world
/// and robot position before the step is taken.
pub fn simulate_with(
    obstacles: &[Obstacle],
    x0: Point2,
    x_g: Point2,
    form: &FormOptions,
    params: &PlannerParams,
    mut on_frame: impl FnMut(usize, &StarWorld, Point2),
) -> Result<SimulationTrace> {
    if !(params.dt > 0.0 && params.v_max > 0.0) {
        return Err(Error::MalformedInput("dt and v_max must be positive".into()));
    }
    let moving = obstacles.iter().any(|o| o.velocity.is_some());
    let mut obs = obstacles.to_vec();
    let mut x = x0;
    let mut t = 0.0;
    let mut trace = SimulationTrace { times: vec![t], positions: vec![x], frames: Vec::new(), termination: Termination::MaxSteps };
    let mut world: Option<StarWorld> = None;
    for step in 0..params.max_steps {
        if x.dist(x_g) < params.goal_tolerance {
            trace.termination = Termination::GoalReached;
            return Ok(trace);
        }
        let start = Instant::now();
        // a static world stays valid while the robot is outside every star by Γ
        let reuse = !moving && world.as_ref().is_some_and(|w| gammas_at(w, x, x_g).is_ok_and(|g| g.iter().all(|&g| g >= 1.0)));
        if !reuse {
            world = Some(world_for(&obs, x, x_g, form, params, world.as_ref())?);
        }
        let w = world.as_ref().expect("world was just formed");
        let centers: Vec<Point2> = w.obstacles.iter().map(|s| center_point(s, x, x_g)).collect();
        let compute_ms = start.elapsed().as_secs_f64() * 1e3;
        on_frame(step, w, x);

        let g0: Vec<f64> = w.obstacles.iter().zip(&centers).map(|(s, &c)| gamma(s, c, x)).collect::<Result<_>>()?;
        let mut v = modulated_velocity(x, x_g, w, &centers, params.v_max)?;
        // inside the boundary layer slide along the boundary instead of creeping into it
        for ((s, &c), &g) in w.obstacles.iter().zip(&centers).zip(&g0) {
            if g - 1.0 < BOUNDARY_LAYER && x != c {
                let n = s.boundary_hit(c, x - c)?.normal;
                let vn = v.dot(n);
                if vn < 0.0 {
                    v = v - n * vn;
                }
            }
        }
        // halve the step until no obstacle is approached by more than half its margin
        let mut h = params.dt;
        let safe = |q: Point2| {
            w.obstacles.iter().zip(&centers).zip(&g0).all(|((s, &c), &g)| {
                gamma(s, c, q).map_or(false, |gn| gn >= g || gn - 1.0 >= 0.5 * (g - 1.0))
            })
        };
        let mut next = x + v * h;
        let mut tries = 0;
        while !safe(next) {
            tries += 1;
            if tries > 40 {
                // no safe step along v: stay put
                next = x;
                break;
            }
            h *= 0.5;
            next = x + v * h;
        }
        trace.frames.push(FrameSummary {
            obstacles: w.len(),
            status: w.status,
            iterations: w.iterations,
            compute_ms,
            min_gamma: g0.iter().copied().fold(f64::INFINITY, f64::min),
        });
        x = next;
        t += params.dt;
        if moving {
            obs = obs.iter().map(|o| o.advanced(params.dt)).collect();
        }
        trace.times.push(t);
        trace.positions.push(x);
        let n = trace.positions.len();
        if n > params.stall_window {
            let back = trace.positions[n - 1 - params.stall_window];
            if back.dist(x) < params.stall_tolerance {
                trace.termination = Termination::Stalled;
                return Ok(trace);
            }
        }
    }
    if x.dist(x_g) < params.goal_tolerance {
        trace.termination = Termination::GoalReached;
    }
    Ok(trace)
}

pub fn simulate(obstacles: &[Obstacle], x0: Point2, x_g: Point2, form: &FormOptions, params: &PlannerParams) -> Result<SimulationTrace> {
    simulate_with(obstacles, x0, x_g, form, params, |_, _, _| {})
}

/// `Γ` of the robot against every star, for safety checks on a trace.
pub fn gammas_at(world: &StarWorld, x: Point2, x_g: Point2) -> Result<Vec<f64>> {
    world.obstacles.iter().map(|s| gamma(s, center_point(s, x, x_g), x)).collect()
}
