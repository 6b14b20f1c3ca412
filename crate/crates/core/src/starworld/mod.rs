//! Forming disjoint star worlds from possibly intersecting obstacles.

mod kernel_select;
pub mod validate;

pub use kernel_select::{select_kernel_points, KernelChoice, KernelSource, PrevKernel};
pub use validate::{validate_world, ValidationReport};

use crate::admker::{admissible_kernel_from_arcs, kernel_bbox, open_margin, shadow_arc, KernelRegion};
use crate::geom::{
    classify_point, convex_decomposition, convex_pieces_intersect, Aabb, Arc, ConvexPolygon, ConvexShape, Point2,
    PointClass, Shape, Vector2,
};
use crate::starshape::{
    sh_kernel_convex, sh_kernel_polygon, star_from_polygon, KernelSpec, StarObstacle, StarPiece,
};
use crate::{Error, Result};
use kernel_select::fit_triangle;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub id: String,
    pub shape: Shape,
    pub velocity: Option<Vector2>,
}

impl Obstacle {
    pub fn new(id: impl Into<String>, shape: Shape) -> Self {
        Self { id: id.into(), shape, velocity: None }
    }

    pub fn with_velocity(mut self, v: Vector2) -> Self {
        self.velocity = Some(v);
        self
    }

    /// The obstacle moved by its velocity over `dt`.
    pub fn advanced(&self, dt: f64) -> Obstacle {
        match self.velocity {
            Some(v) => Obstacle { shape: self.shape.translated(v * dt), ..self.clone() },
            None => self.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Sorted ids of the member obstacles.
    pub member_ids: Vec<String>,
    /// Indices of the members in the obstacle list, ascending.
    pub members: Vec<usize>,
    pub kernel_region: KernelRegion,
    pub star: Option<StarObstacle>,
}

impl Cluster {
    fn new(members: Vec<usize>, obstacles: &[Obstacle]) -> Self {
        let mut member_ids: Vec<String> = members.iter().map(|&i| obstacles[i].id.clone()).collect();
        member_ids.sort();
        Self { member_ids, members, kernel_region: KernelRegion::Empty, star: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorldStatus {
    Disjoint,
    IntersectingFallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormOptions {
    pub exclude_obstacle_points: bool,
    /// Largest side of the kernel triangle.
    pub kernel_side_length: f64,
    pub max_iterations: usize,
}

impl Default for FormOptions {
    fn default() -> Self {
        Self { exclude_obstacle_points: false, kernel_side_length: 0.1, max_iterations: 10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarWorld {
    pub obstacles: Vec<StarObstacle>,
    pub status: WorldStatus,
    /// Number of passes of the clustering loop.
    pub iterations: usize,
    /// Final clusters; `clusters[i]` produced `obstacles[i]` for a disjoint
    /// world. Empty for a fallback world.
    pub clusters: Vec<Cluster>,
    /// Obstacle id to index into `obstacles` (the first piece for a
    /// decomposed obstacle).
    pub cluster_map: BTreeMap<String, usize>,
    /// Kernels by sorted member ids, for reuse in the next frame.
    pub prev_kernels: BTreeMap<Vec<String>, PrevKernel>,
}

impl StarWorld {
    pub fn len(&self) -> usize {
        self.obstacles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obstacles.is_empty()
    }

    pub fn is_disjoint(&self) -> bool {
        self.status == WorldStatus::Disjoint
    }
}

/// Points representing an obstacle when it must stay out of other hulls:
/// polygon vertices or ellipse axis extremes.
pub fn exclusion_points_for(obstacle: &Obstacle) -> Vec<Point2> {
    match &obstacle.shape {
        Shape::Polygon(p) => p.vertices().to_vec(),
        Shape::Ellipse(e) => e.axis_extremes().to_vec(),
    }
}

/// Small kernel triangle inside a convex piece, at its centroid.
fn inner_kernel(piece: &ConvexShape, l: f64) -> KernelSpec {
    let poly = piece.inner_polygon(crate::starshape::ELLIPSE_SEGMENTS);
    let c = poly.centroid();
    fit_triangle(&poly, c, l, poly.principal_angle()).unwrap_or_else(|| KernelSpec { points: vec![c] })
}

/// Every obstacle split into convex parts, each its own star obstacle.
pub fn convex_decomposition_world(obstacles: &[Obstacle]) -> StarWorld {
    convex_decomposition_world_with(obstacles, FormOptions::default().kernel_side_length)
}

fn convex_decomposition_world_with(obstacles: &[Obstacle], l: f64) -> StarWorld {
    let mut stars = Vec::new();
    let mut cluster_map = BTreeMap::new();
    for o in obstacles {
        cluster_map.insert(o.id.clone(), stars.len());
        let parts: Vec<ConvexShape> = match o.shape.as_convex() {
            Some(c) => vec![c],
            None => match &o.shape {
                Shape::Polygon(p) => convex_decomposition(p).into_iter().map(ConvexShape::Polygon).collect(),
                Shape::Ellipse(_) => unreachable!("ellipses are convex"),
            },
        };
        for part in parts {
            let k = inner_kernel(&part, l);
            stars.push(StarObstacle::new(vec![StarPiece::Original(part)], k));
        }
    }
    StarWorld {
        obstacles: stars,
        status: WorldStatus::IntersectingFallback,
        iterations: 0,
        clusters: Vec::new(),
        cluster_map,
        prev_kernels: BTreeMap::new(),
    }
}

/// `SH_kerK(cl)` as the union of the hulls of its members.
fn cluster_hull(shapes: &[&Shape], k: &KernelSpec) -> Result<StarObstacle> {
    let mut stars = Vec::with_capacity(shapes.len());
    for s in shapes {
        let star = match s.as_convex() {
            Some(c) => sh_kernel_convex(&c, k),
            None => match s {
                Shape::Polygon(p) => star_from_polygon(&sh_kernel_polygon(p, k)?),
                Shape::Ellipse(_) => unreachable!("ellipses are convex"),
            },
        };
        stars.push(star);
    }
    Ok(StarObstacle::union(stars, k.clone()))
}

struct PieceCache {
    bbox: Aabb,
    polys: Vec<(Aabb, ConvexPolygon)>,
}

impl PieceCache {
    fn new(star: &StarObstacle) -> Self {
        let polys: Vec<(Aabb, ConvexPolygon)> = star
            .pieces()
            .iter()
            .map(|p| {
                let q = p.outer_polygon();
                (q.bbox(), q)
            })
            .collect();
        let bbox = polys.iter().fold(Aabb::empty(), |b, (pb, _)| b.union(pb));
        Self { bbox, polys }
    }

    fn intersects(&self, o: &PieceCache) -> bool {
        self.bbox.overlaps(&o.bbox)
            && self.polys.iter().any(|(ab, a)| {
                o.polys.iter().any(|(bb, b)| ab.overlaps(bb) && convex_pieces_intersect(a, b))
            })
    }
}

/// Whether two star obstacles intersect, judged piecewise on polygons that
/// contain the pieces.
pub fn stars_intersect(a: &StarObstacle, b: &StarObstacle) -> bool {
    PieceCache::new(a).intersects(&PieceCache::new(b))
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let n = parent[j];
        parent[j] = r;
        j = n;
    }
    r
}

/// Groups star obstacles into connected components of the intersection
/// graph. `members[i]` lists the originals inside `stars[i]`; the result
/// merges those lists, sorted by smallest member.
pub fn cluster_star_obstacles(stars: &[StarObstacle], members: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let caches: Vec<PieceCache> = stars.iter().map(PieceCache::new).collect();
    let n = stars.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if find(&mut parent, i) != find(&mut parent, j) && caches[i].intersects(&caches[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().extend(members[i].iter().copied());
    }
    let mut out: Vec<Vec<usize>> = groups
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    out.sort_by_key(|g| g[0]);
    out
}

/// Builds a disjoint star world containing `obstacles` with `x` and `x_g`
/// outside every star, or the convex decomposition of the obstacles when a
/// cluster leaves no admissible kernel.
pub fn form_star_world(
    obstacles: &[Obstacle],
    x: Point2,
    x_g: Point2,
    opts: &FormOptions,
    prev: Option<&StarWorld>,
) -> Result<StarWorld> {
    if x.approx_eq(x_g, 0.0) {
        return Err(Error::MalformedInput("robot and goal coincide".into()));
    }
    if !(opts.kernel_side_length > 0.0) {
        return Err(Error::MalformedInput("kernel side length must be positive".into()));
    }
    for o in obstacles {
        if o.shape.contains(x) {
            return Err(Error::RobotInsideObstacle(o.id.clone()));
        }
        if o.shape.contains(x_g) {
            return Err(Error::GoalInsideObstacle(o.id.clone()));
        }
    }
    let scene = obstacles.iter().fold(Aabb::from_points([x, x_g]), |b, o| b.union(&o.shape.bbox()));
    let bbox = kernel_bbox(&scene);
    let delta = open_margin(&bbox);
    // blocked arcs seen from the robot and the goal, computed once
    let arcs: Vec<[Option<Arc>; 2]> = obstacles.iter().map(|o| [shadow_arc(&o.shape, x), shadow_arc(&o.shape, x_g)]).collect();
    let prev_kernels = prev.map(|w| &w.prev_kernels);

    let fallback = |reason: &str| {
        log::info!("falling back to convex decomposition: {reason}");
        let mut w = convex_decomposition_world_with(obstacles, opts.kernel_side_length);
        if let Some(p) = prev {
            w.prev_kernels = p.prev_kernels.clone();
        }
        w
    };

    let mut clusters: Vec<Cluster> = (0..obstacles.len()).map(|i| Cluster::new(vec![i], obstacles)).collect();
    let mut passes = 0;
    loop {
        passes += 1;
        if passes > opts.max_iterations {
            return Err(Error::IterationLimit(opts.max_iterations));
        }
        let count = clusters.len();
        let mut kernels = BTreeMap::new();
        for cl in clusters.iter_mut() {
            let base: Vec<(Point2, Vec<Option<Arc>>)> = vec![
                (x, cl.members.iter().map(|&i| arcs[i][0]).collect()),
                (x_g, cl.members.iter().map(|&i| arcs[i][1]).collect()),
            ];
            let base_region = || admissible_kernel_from_arcs(&base, &bbox, delta);
            let region = if opts.exclude_obstacle_points {
                let shapes: Vec<Shape> = cl.members.iter().map(|&i| obstacles[i].shape.clone()).collect();
                let mut ex = base.clone();
                for (j, o) in obstacles.iter().enumerate() {
                    if cl.members.binary_search(&j).is_ok() {
                        continue;
                    }
                    for q in exclusion_points_for(o) {
                        // points inside or enclosed by the cluster cannot be excluded
                        if classify_point(&shapes, q) == PointClass::FreeExterior {
                            ex.push((q, shapes.iter().map(|s| shadow_arc(s, q)).collect()));
                        }
                    }
                }
                match admissible_kernel_from_arcs(&ex, &bbox, delta) {
                    KernelRegion::Empty => base_region(),
                    r => r,
                }
            } else {
                base_region()
            };
            if region.is_empty() {
                return Ok(fallback("empty admissible kernel"));
            }
            let shapes: Vec<&Shape> = cl.members.iter().map(|&i| &obstacles[i].shape).collect();
            let pk = prev_kernels.and_then(|m| m.get(&cl.member_ids));
            let choice = match select_kernel_points(&shapes, &region, pk, x, x_g, opts.kernel_side_length) {
                Ok(c) => c,
                Err(e) => return Ok(fallback(&e.to_string())),
            };
            let star = match cluster_hull(&shapes, &choice.kernel) {
                Ok(s) => s,
                Err(e) => return Ok(fallback(&e.to_string())),
            };
            kernels.insert(cl.member_ids.clone(), PrevKernel { kernel: choice.kernel, centroid: choice.centroid });
            cl.kernel_region = region;
            cl.star = Some(star);
        }
        let stars: Vec<StarObstacle> = clusters.iter().filter_map(|c| c.star.clone()).collect();
        let members: Vec<Vec<usize>> = clusters.iter().map(|c| c.members.clone()).collect();
        let groups = cluster_star_obstacles(&stars, &members);
        log::debug!("pass {passes}: {count} clusters -> {}", groups.len());
        if groups.len() == count {
            let mut cluster_map = BTreeMap::new();
            for (i, cl) in clusters.iter().enumerate() {
                for id in &cl.member_ids {
                    cluster_map.insert(id.clone(), i);
                }
            }
            return Ok(StarWorld {
                obstacles: stars,
                status: WorldStatus::Disjoint,
                iterations: passes,
                clusters,
                cluster_map,
                prev_kernels: kernels,
            });
        }
        clusters = groups.into_iter().map(|g| Cluster::new(g, obstacles)).collect();
    }
}
