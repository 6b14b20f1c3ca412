//! The pipelines behind the command line: form and write a star world, or
//! simulate the planner and write the trace.

use crate::geom::{ConvexShape, Point2};
use crate::planner::{simulate_with, SimulationTrace, Termination};
use crate::render::{render_svg, Picture};
use crate::scenario::{write_atomic, Scenario};
use crate::starshape::StarPiece;
use crate::starworld::{form_star_world, validate_world, Obstacle, StarWorld, ValidationReport, WorldStatus};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct Starified {
    /// Inflated obstacles the world was formed from.
    pub obstacles: Vec<Obstacle>,
    pub world: StarWorld,
    pub report: ValidationReport,
}

pub fn status_str(s: WorldStatus) -> &'static str {
    match s {
        WorldStatus::Disjoint => "disjoint",
        WorldStatus::IntersectingFallback => "intersecting_fallback",
    }
}

pub fn starify(s: &Scenario) -> Result<Starified> {
    let obstacles = s.inflated_obstacles()?;
    let world = form_star_world(&obstacles, s.robot, s.goal, &s.form, None)?;
    let report = validate_world(&world, &obstacles, s.robot, s.goal);
    Ok(Starified { obstacles, world, report })
}

fn pts(v: &[Point2]) -> String {
    v.iter().map(|p| format!("{},{}", p.x, p.y)).collect::<Vec<_>>().join(";")
}

/// Plain text dump of a star world: one `star` line per obstacle followed by
/// its `piece` lines.
pub fn world_to_text(world: &StarWorld) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status {}", status_str(world.status));
    let _ = writeln!(out, "iterations {}", world.iterations);
    let _ = writeln!(out, "obstacles {}", world.len());
    for (i, s) in world.obstacles.iter().enumerate() {
        let members = world.clusters.get(i).map(|c| c.member_ids.join(",")).unwrap_or_default();
        let c = s.kernel_centroid();
        let _ = writeln!(out, "star {i} members={members} kernel={} centroid={},{}", pts(&s.kernel_spec().points), c.x, c.y);
        for p in s.pieces() {
            let _ = match p {
                StarPiece::Original(ConvexShape::Ellipse(e)) => writeln!(
                    out,
                    "piece {i} ellipse center={},{} axes={},{} rot={}",
                    e.center.x, e.center.y, e.semi_axes.0, e.semi_axes.1, e.rotation
                ),
                StarPiece::Original(ConvexShape::Polygon(q)) => writeln!(out, "piece {i} polygon verts={}", pts(q.vertices())),
                StarPiece::Hull(q) => writeln!(out, "piece {i} hull verts={}", pts(q.vertices())),
            };
        }
    }
    out
}

fn check(report: &ValidationReport) -> Result<()> {
    if report.all_pass() {
        Ok(())
    } else {
        Err(Error::ValidationFailed(report.to_kv()))
    }
}

/// Forms the star world and writes `world.txt`, `validation.txt` and
/// `world.svg`. Nothing is written unless the world validates.
pub fn run_starify(s: &Scenario, out_dir: &Path) -> Result<Starified> {
    let r = starify(s)?;
    check(&r.report)?;
    std::fs::create_dir_all(out_dir)?;
    write_atomic(&out_dir.join("world.txt"), world_to_text(&r.world).as_bytes())?;
    write_atomic(&out_dir.join("validation.txt"), r.report.to_kv().as_bytes())?;
    let pic = Picture { originals: &r.obstacles, world: Some(&r.world), robot: s.robot, goal: s.goal, trajectory: &[] };
    write_atomic(&out_dir.join("world.svg"), render_svg(&pic).as_bytes())?;
    Ok(r)
}

pub fn termination_str(t: Termination) -> &'static str {
    match t {
        Termination::GoalReached => "goal_reached",
        Termination::MaxSteps => "max_steps",
        Termination::Stalled => "stalled",
    }
}

pub fn trajectory_csv(trace: &SimulationTrace) -> String {
    let mut s = String::from("t,x,y\n");
    for (t, p) in trace.times.iter().zip(&trace.positions) {
        let _ = writeln!(s, "{t},{},{}", p.x, p.y);
    }
    s
}

pub fn frames_csv(trace: &SimulationTrace) -> String {
    let mut s = String::from("step,obstacles,status,iterations,compute_ms,min_gamma\n");
    for (k, f) in trace.frames.iter().enumerate() {
        let _ = writeln!(
            s,
            "{k},{},{},{},{:.3},{}",
            f.obstacles,
            status_str(f.status),
            f.iterations,
            f.compute_ms,
            f.min_gamma
        );
    }
    s
}

/// Simulates the scenario and writes `trajectory.csv`, `frames.csv`,
/// `summary.txt`, `trajectory.svg` and every `frame_every`-th frame as
/// `frames/frame_NNNNN.svg`. Each rendered world is validated first.
pub fn run_simulate(s: &Scenario, out_dir: &Path, frame_every: usize) -> Result<SimulationTrace> {
    let obstacles = s.inflated_obstacles()?;
    let frame_every = frame_every.max(1);
    let frames_dir = out_dir.join("frames");
    std::fs::create_dir_all(&frames_dir)?;

    let mut current = obstacles.clone();
    let mut last: Option<(StarWorld, Vec<Obstacle>)> = None;
    let mut failure: Option<Error> = None;
    let trace = simulate_with(&obstacles, s.robot, s.goal, &s.form, &s.planner, |step, world, x| {
        if step > 0 {
            current = current.iter().map(|o| o.advanced(s.planner.dt)).collect();
        }
        if failure.is_some() {
            return;
        }
        if step % frame_every == 0 {
            let report = validate_world(world, &current, x, s.goal);
            if let Err(e) = check(&report) {
                failure = Some(e);
                return;
            }
            let pic = Picture { originals: &current, world: Some(world), robot: x, goal: s.goal, trajectory: &[] };
            if let Err(e) = write_atomic(&frames_dir.join(format!("frame_{step:05}.svg")), render_svg(&pic).as_bytes()) {
                failure = Some(e);
            }
        }
        last = Some((world.clone(), current.clone()));
    })?;
    if let Some(e) = failure {
        return Err(e);
    }

    write_atomic(&out_dir.join("trajectory.csv"), trajectory_csv(&trace).as_bytes())?;
    write_atomic(&out_dir.join("frames.csv"), frames_csv(&trace).as_bytes())?;
    let end = trace.positions.last().copied().unwrap_or(s.robot);
    let summary = format!(
        "termination={}\nsteps={}\nfinal={},{}\ndistance_to_goal={}\n",
        termination_str(trace.termination),
        trace.frames.len(),
        end.x,
        end.y,
        end.dist(s.goal)
    );
    write_atomic(&out_dir.join("summary.txt"), summary.as_bytes())?;
    let (world, originals) = match &last {
        Some((w, o)) => (Some(w), o.as_slice()),
        None => (None, obstacles.as_slice()),
    };
    let pic = Picture { originals, world, robot: s.robot, goal: s.goal, trajectory: &trace.positions };
    write_atomic(&out_dir.join("trajectory.svg"), render_svg(&pic).as_bytes())?;
    Ok(trace)
}
