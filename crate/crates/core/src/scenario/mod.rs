//! Scenario files: a line oriented text format.
//!
//! ```text
//! version 1
//! seed 42
//! robot -4 0
//! goal 4 0.5
//! inflation 0
//! option kernel_side_length 0.1
//! ellipse id=e1 center=0,0 axes=2,1 rot=0.3 vel=0.1,0
//! polygon id=p1 verts=0,0;2,0;2,2;0,2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `seed`, `inflation`,
//! the options and `vel=` are optional. Saving writes every option and uses
//! shortest round-trip float formatting, so `save(load(save(s))) == save(s)`.

mod random;

pub use random::{generate_random_scene, generate_scene_at, scene_side, valtr_polygon, VALTR_MEAN_AREA};

use crate::geom::{convex_decomposition, convex_hull, Ellipse, Point2, Shape, SimplePolygon};
use crate::planner::PlannerParams;
use crate::starworld::{FormOptions, Obstacle};
use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Directions of the disc polygon used to inflate polygons.
const INFLATION_SIDES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub seed: Option<u64>,
    pub robot: Point2,
    pub goal: Point2,
    /// Robot radius; obstacles are grown by it before planning.
    pub inflation: f64,
    pub obstacles: Vec<Obstacle>,
    pub form: FormOptions,
    pub planner: PlannerParams,
}

impl Scenario {
    pub fn new(robot: Point2, goal: Point2, obstacles: Vec<Obstacle>) -> Self {
        Self {
            seed: None,
            robot,
            goal,
            inflation: 0.0,
            obstacles,
            form: FormOptions::default(),
            planner: PlannerParams::default(),
        }
    }

    /// The obstacles grown by the inflation radius. Concave polygons are split
    /// into convex parts first; part `k` of obstacle `id` is named `id.k`.
    pub fn inflated_obstacles(&self) -> Result<Vec<Obstacle>> {
        let r = self.inflation;
        if r == 0.0 {
            return Ok(self.obstacles.clone());
        }
        let mut out = Vec::new();
        for o in &self.obstacles {
            match &o.shape {
                Shape::Ellipse(e) => {
                    let grown = Ellipse::new(e.center, e.semi_axes.0 + r, e.semi_axes.1 + r, e.rotation)?;
                    out.push(Obstacle { shape: Shape::Ellipse(grown), ..o.clone() });
                }
                Shape::Polygon(p) if p.is_convex() => {
                    out.push(Obstacle { shape: inflate_convex(p.vertices(), r)?, ..o.clone() });
                }
                Shape::Polygon(p) => {
                    for (k, part) in convex_decomposition(p).iter().enumerate() {
                        out.push(Obstacle {
                            id: format!("{}.{k}", o.id),
                            shape: inflate_convex(part.vertices(), r)?,
                            velocity: o.velocity,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Hull of the vertices offset along 16 directions by the circumradius of a
/// 16-gon around a disc of radius `r`, which contains the exact offset.
fn inflate_convex(verts: &[Point2], r: f64) -> Result<Shape> {
    let rr = r / (std::f64::consts::PI / INFLATION_SIDES as f64).cos();
    let pts: Vec<Point2> = verts
        .iter()
        .flat_map(|&v| {
            (0..INFLATION_SIDES).map(move |k| {
                v + Point2::from_angle(std::f64::consts::TAU * k as f64 / INFLATION_SIDES as f64) * rr
            })
        })
        .collect();
    let hull = convex_hull(&pts)?;
    Ok(Shape::Polygon(hull.as_simple()))
}

fn fmt_pt(p: Point2) -> String {
    format!("{},{}", p.x, p.y)
}

/// Canonical text of a scenario.
pub fn to_text(s: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "version {SCHEMA_VERSION}");
    if let Some(seed) = s.seed {
        let _ = writeln!(out, "seed {seed}");
    }
    let _ = writeln!(out, "robot {} {}", s.robot.x, s.robot.y);
    let _ = writeln!(out, "goal {} {}", s.goal.x, s.goal.y);
    let _ = writeln!(out, "inflation {}", s.inflation);
    let f = &s.form;
    let p = &s.planner;
    let _ = writeln!(out, "option exclude_obstacle_points {}", f.exclude_obstacle_points);
    let _ = writeln!(out, "option kernel_side_length {}", f.kernel_side_length);
    let _ = writeln!(out, "option max_iterations {}", f.max_iterations);
    let _ = writeln!(out, "option dt {}", p.dt);
    let _ = writeln!(out, "option v_max {}", p.v_max);
    let _ = writeln!(out, "option max_steps {}", p.max_steps);
    let _ = writeln!(out, "option goal_tolerance {}", p.goal_tolerance);
    let _ = writeln!(out, "option form_star_world {}", p.form_star_world);
    let _ = writeln!(out, "option stall_window {}", p.stall_window);
    let _ = writeln!(out, "option stall_tolerance {}", p.stall_tolerance);
    for o in &s.obstacles {
        match &o.shape {
            Shape::Ellipse(e) => {
                let _ = write!(
                    out,
                    "ellipse id={} center={} axes={},{} rot={}",
                    o.id,
                    fmt_pt(e.center),
                    e.semi_axes.0,
                    e.semi_axes.1,
                    e.rotation
                );
            }
            Shape::Polygon(poly) => {
                let verts: Vec<String> = poly.vertices().iter().map(|&v| fmt_pt(v)).collect();
                let _ = write!(out, "polygon id={} verts={}", o.id, verts.join(";"));
            }
        }
        if let Some(v) = o.velocity {
            let _ = write!(out, " vel={}", fmt_pt(v));
        }
        out.push('\n');
    }
    out
}

struct LineCtx {
    line: usize,
}

impl LineCtx {
    fn err(&self, field: &str, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, field: field.into(), message: message.into() }
    }

    fn num<T: std::str::FromStr>(&self, field: &str, s: &str) -> Result<T> {
        s.trim().parse().map_err(|_| self.err(field, format!("invalid number `{s}`")))
    }

    fn float(&self, field: &str, s: &str) -> Result<f64> {
        let v: f64 = self.num(field, s)?;
        if !v.is_finite() {
            return Err(self.err(field, format!("not finite `{s}`")));
        }
        Ok(v)
    }

    fn pair(&self, field: &str, s: &str) -> Result<Point2> {
        let (a, b) = s.split_once(',').ok_or_else(|| self.err(field, format!("expected `x,y`, got `{s}`")))?;
        Ok(Point2::new(self.float(field, a)?, self.float(field, b)?))
    }

    fn xy(&self, field: &str, rest: &[&str]) -> Result<Point2> {
        match rest {
            [a, b] => Ok(Point2::new(self.float(field, a)?, self.float(field, b)?)),
            _ => Err(self.err(field, "expected two numbers")),
        }
    }
}

fn parse_obstacle(ctx: &LineCtx, kind: &str, rest: &[&str]) -> Result<Obstacle> {
    let mut id = None;
    let mut center = None;
    let mut axes = None;
    let mut rot = 0.0;
    let mut verts = None;
    let mut vel = None;
    for tok in rest {
        let (k, v) = tok.split_once('=').ok_or_else(|| ctx.err(kind, format!("expected key=value, got `{tok}`")))?;
        match (kind, k) {
            (_, "id") => id = Some(v.to_string()),
            (_, "vel") => vel = Some(ctx.pair("vel", v)?),
            ("ellipse", "center") => center = Some(ctx.pair("center", v)?),
            ("ellipse", "axes") => axes = Some(ctx.pair("axes", v)?),
            ("ellipse", "rot") => rot = ctx.float("rot", v)?,
            ("polygon", "verts") => {
                verts = Some(v.split(';').map(|q| ctx.pair("verts", q)).collect::<Result<Vec<_>>>()?)
            }
            _ => return Err(ctx.err(k, format!("unknown {kind} field"))),
        }
    }
    let id = id.ok_or_else(|| ctx.err("id", "missing obstacle id"))?;
    let named = |field: &str, e: Error| match e {
        Error::MalformedInput(m) => ctx.err(field, format!("obstacle `{id}`: {m}")),
        e => e,
    };
    let shape = if kind == "ellipse" {
        let c = center.ok_or_else(|| ctx.err("center", format!("obstacle `{id}`: missing center")))?;
        let ab = axes.ok_or_else(|| ctx.err("axes", format!("obstacle `{id}`: missing axes")))?;
        Shape::Ellipse(Ellipse::new(c, ab.x, ab.y, rot).map_err(|e| named("axes", e))?)
    } else {
        let v = verts.ok_or_else(|| ctx.err("verts", format!("obstacle `{id}`: missing verts")))?;
        Shape::Polygon(SimplePolygon::new(v).map_err(|e| named("verts", e))?)
    };
    Ok(Obstacle { id, shape, velocity: vel })
}

fn set_option(ctx: &LineCtx, s: &mut Scenario, key: &str, v: &str) -> Result<()> {
    let flag = |v: &str| match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ctx.err(key, format!("expected true or false, got `{v}`"))),
    };
    match key {
        "exclude_obstacle_points" => s.form.exclude_obstacle_points = flag(v)?,
        "kernel_side_length" => s.form.kernel_side_length = ctx.float(key, v)?,
        "max_iterations" => s.form.max_iterations = ctx.num(key, v)?,
        "dt" => s.planner.dt = ctx.float(key, v)?,
        "v_max" => s.planner.v_max = ctx.float(key, v)?,
        "max_steps" => s.planner.max_steps = ctx.num(key, v)?,
        "goal_tolerance" => s.planner.goal_tolerance = ctx.float(key, v)?,
        "form_star_world" => s.planner.form_star_world = flag(v)?,
        "stall_window" => s.planner.stall_window = ctx.num(key, v)?,
        "stall_tolerance" => s.planner.stall_tolerance = ctx.float(key, v)?,
        _ => return Err(ctx.err(key, "unknown option")),
    }
    Ok(())
}

pub fn from_text(text: &str) -> Result<Scenario> {
    let mut s = Scenario::new(Point2::new(0.0, 0.0), Point2::new(0.0, 0.0), Vec::new());
    let mut version = None;
    let (mut robot, mut goal) = (None, None);
    let mut ids = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let ctx = LineCtx { line: i + 1 };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (head, rest) = (toks[0], &toks[1..]);
        if version.is_none() && head != "version" {
            return Err(ctx.err("version", "file must start with `version`"));
        }
        match head {
            "version" => {
                let [v] = rest else { return Err(ctx.err("version", "expected one number")) };
                let v: u32 = ctx.num("version", v)?;
                if v != SCHEMA_VERSION {
                    return Err(Error::SchemaVersion(v));
                }
                version = Some(v);
            }
            "seed" => {
                let [v] = rest else { return Err(ctx.err("seed", "expected one number")) };
                s.seed = Some(ctx.num("seed", v)?);
            }
            "robot" => robot = Some(ctx.xy("robot", rest)?),
            "goal" => goal = Some(ctx.xy("goal", rest)?),
            "inflation" => {
                let [v] = rest else { return Err(ctx.err("inflation", "expected one number")) };
                let r = ctx.float("inflation", v)?;
                if r < 0.0 {
                    return Err(ctx.err("inflation", "must be nonnegative"));
                }
                s.inflation = r;
            }
            "option" => {
                let [k, v] = rest else { return Err(ctx.err("option", "expected `option key value`")) };
                set_option(&ctx, &mut s, k, v)?;
            }
            "ellipse" | "polygon" => {
                let o = parse_obstacle(&ctx, head, rest)?;
                if !ids.insert(o.id.clone()) {
                    return Err(ctx.err("id", format!("duplicate obstacle id `{}`", o.id)));
                }
                s.obstacles.push(o);
            }
            _ => return Err(ctx.err(head, "unknown record")),
        }
    }
    let end = LineCtx { line: text.lines().count() };
    if version.is_none() {
        return Err(end.err("version", "missing version line"));
    }
    s.robot = robot.ok_or_else(|| end.err("robot", "missing robot position"))?;
    s.goal = goal.ok_or_else(|| end.err("goal", "missing goal position"))?;
    Ok(s)
}

/// Writes `contents` to a sibling temporary file, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    from_text(&std::fs::read_to_string(path)?)
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<()> {
    write_atomic(path, to_text(s).as_bytes())
}
