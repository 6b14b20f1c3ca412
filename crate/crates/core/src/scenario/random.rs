//! Random scenes: half ellipses, half random convex 10-gons, scattered in a
//! square sized so the obstacles cover about a quarter of it.

use super::Scenario;
use crate::geom::{ConvexPolygon, Ellipse, Point2, Shape};
use crate::starworld::Obstacle;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;

/// Mean area of a [`valtr_polygon`] with 10 vertices in a 2×2 box
/// (Monte Carlo over 2·10⁵ samples, standard error 1e-3).
pub const VALTR_MEAN_AREA: f64 = 1.8236;

const POLYGON_VERTICES: usize = 10;
const POLYGON_BOX: f64 = 2.0;
const TARGET_COVERAGE: f64 = 0.25;
const COVERAGE_RANGE: (f64, f64) = (0.2, 0.3);
const MIN_SEMI_AXIS: f64 = 0.2;
const MAX_TRIES: usize = 10_000;

/// Random convex polygon with `n` vertices inside `[0, size]²`, uniform over
/// such polygons (Valtr's construction).
pub fn valtr_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize, size: f64) -> ConvexPolygon {
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut ys: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);

    // split the sorted coordinates into two monotone chains between the extremes
    let mut chains = |v: &[f64]| -> Vec<f64> {
        let (lo, hi) = (v[0], v[n - 1]);
        let (mut a, mut b) = (lo, lo);
        let mut out = Vec::with_capacity(n);
        for &t in &v[1..n - 1] {
            if rng.gen::<bool>() {
                out.push(t - a);
                a = t;
            } else {
                out.push(b - t);
                b = t;
            }
        }
        out.push(hi - a);
        out.push(b - hi);
        out
    };
    let dx = chains(&xs);
    let mut dy = chains(&ys);
    dy.shuffle(rng);

    let mut vecs: Vec<Point2> = dx.iter().zip(&dy).map(|(&x, &y)| Point2::new(x, y)).collect();
    vecs.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
    let mut pts = Vec::with_capacity(n);
    let mut cur = Point2::new(0.0, 0.0);
    for v in vecs {
        cur = cur + v;
        pts.push(cur);
    }
    let (mx, my) = pts.iter().fold((f64::INFINITY, f64::INFINITY), |(a, b), p| (a.min(p.x), b.min(p.y)));
    let shift = Point2::new(xs[0] - mx, ys[0] - my);
    let verts: Vec<Point2> = pts.into_iter().map(|p| (p + shift) * size).collect();
    ConvexPolygon::new(verts).expect("edge vectors sorted by angle form a convex polygon")
}

enum Draft {
    Ellipse(f64, f64, f64),
    Polygon(ConvexPolygon),
}

impl Draft {
    fn area(&self) -> f64 {
        match self {
            Draft::Ellipse(a, b, _) => PI * a * b,
            Draft::Polygon(p) => p.area(),
        }
    }
}

/// Scene `index` of the stream for `seed`; each index has its own RNG
/// stream, so any one scene can be regenerated alone.
pub fn generate_scene_at(n: usize, seed: u64, index: u64) -> Result<Scenario> {
    if n == 0 {
        return Err(Error::MalformedInput("a random scene needs at least one obstacle".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);

    let n_ell = n.div_ceil(2);
    let n_poly = n / 2;
    let side = scene_side(n);
    let axis: Normal<f64> = Normal::new(1.0, 0.2).expect("valid normal");

    let mut drafts = None;
    for _ in 0..MAX_TRIES {
        let mut d: Vec<Draft> = Vec::with_capacity(n);
        for _ in 0..n_ell {
            let a = axis.sample(&mut rng).max(MIN_SEMI_AXIS);
            let b = axis.sample(&mut rng).max(MIN_SEMI_AXIS);
            d.push(Draft::Ellipse(a, b, rng.gen_range(0.0..PI)));
        }
        for _ in 0..n_poly {
            d.push(Draft::Polygon(valtr_polygon(&mut rng, POLYGON_VERTICES, POLYGON_BOX)));
        }
        let ratio = d.iter().map(Draft::area).sum::<f64>() / (side * side);
        if (COVERAGE_RANGE.0..=COVERAGE_RANGE.1).contains(&ratio) {
            drafts = Some(d);
            break;
        }
    }
    let drafts = drafts.ok_or_else(|| Error::PlacementFailure("obstacles with the target coverage".into()))?;

    let mut obstacles = Vec::with_capacity(n);
    for (i, d) in drafts.into_iter().enumerate() {
        let c = Point2::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
        let (id, shape) = match d {
            Draft::Ellipse(a, b, rot) => (format!("e{i}"), Shape::Ellipse(Ellipse::new(c, a, b, rot)?)),
            Draft::Polygon(p) => {
                (format!("p{}", i - n_ell), Shape::Polygon(p.translated(c - p.centroid()).as_simple()))
            }
        };
        obstacles.push(Obstacle::new(id, shape));
    }

    let clearance = 1e-3 * side;
    let free_point = |rng: &mut ChaCha8Rng, what: &str| -> Result<Point2> {
        for _ in 0..MAX_TRIES {
            let q = Point2::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
            let blocked = obstacles.iter().any(|o| {
                o.shape.contains(q)
                    || (0..8).any(|k| o.shape.contains(q + Point2::from_angle(k as f64 * PI / 4.0) * clearance))
            });
            if !blocked {
                return Ok(q);
            }
        }
        Err(Error::PlacementFailure(what.into()))
    };
    let robot = free_point(&mut rng, "the robot")?;
    let mut goal = free_point(&mut rng, "the goal")?;
    let mut tries = 0;
    while goal.dist(robot) < clearance {
        tries += 1;
        if tries > MAX_TRIES {
            return Err(Error::PlacementFailure("the goal".into()));
        }
        goal = free_point(&mut rng, "the goal")?;
    }

    let mut s = Scenario::new(robot, goal, obstacles);
    s.seed = Some(seed);
    Ok(s)
}

pub fn generate_random_scene(n: usize, seed: u64) -> Result<Scenario> {
    generate_scene_at(n, seed, 0)
}

/// Side of the square scene generated for `n` obstacles.
pub fn scene_side(n: usize) -> f64 {
    let expected = n.div_ceil(2) as f64 * PI + (n / 2) as f64 * VALTR_MEAN_AREA;
    (expected / TARGET_COVERAGE).sqrt()
}
