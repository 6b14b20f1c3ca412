#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starworlds::geom::{convex_hull, ConvexPolygon, Ellipse, Point2, Segment, Shape, SimplePolygon};
use std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

pub fn random_convex(rng: &mut ChaCha8Rng, c: Point2, r: f64) -> ConvexPolygon {
    loop {
        let pts: Vec<Point2> = (0..rng.gen_range(3..9))
            .map(|_| c + Point2::from_angle(rng.gen_range(0.0..TAU)) * (r * rng.gen_range(0.3..1.0)))
            .collect();
        if let Ok(h) = convex_hull(&pts) {
            if h.area() > 0.05 * r * r {
                return h;
            }
        }
    }
}

pub fn random_ellipse(rng: &mut ChaCha8Rng, c: Point2, r: f64) -> Ellipse {
    Ellipse::new(c, r * rng.gen_range(0.4..1.0), r * rng.gen_range(0.2..0.8), rng.gen_range(0.0..TAU)).unwrap()
}

/// Random polygon that is starshaped about `c` and usually concave.
pub fn random_star_polygon(rng: &mut ChaCha8Rng, c: Point2, r: f64) -> SimplePolygon {
    loop {
        let n = rng.gen_range(5..13);
        let pts: Vec<Point2> = (0..n)
            .map(|i| {
                let th = TAU * (i as f64 + rng.gen_range(0.1..0.9)) / n as f64;
                c + Point2::from_angle(th) * (r * rng.gen_range(0.25..1.0))
            })
            .collect();
        if let Ok(q) = SimplePolygon::new(pts) {
            if !q.is_convex() {
                return q;
            }
        }
    }
}

pub fn random_shape(rng: &mut ChaCha8Rng, c: Point2, r: f64) -> Shape {
    match rng.gen_range(0..3) {
        0 => Shape::Ellipse(random_ellipse(rng, c, r)),
        1 => Shape::Polygon(random_convex(rng, c, r).as_simple()),
        _ => Shape::Polygon(random_star_polygon(rng, c, r)),
    }
}

pub fn sample_in(rng: &mut ChaCha8Rng, q: &ConvexPolygon) -> Option<Point2> {
    let b = q.bbox();
    for _ in 0..10_000 {
        let s = p(rng.gen_range(b.min.x..=b.max.x), rng.gen_range(b.min.y..=b.max.y));
        if q.contains(s) {
            return Some(s);
        }
    }
    None
}

/// Whether the closed segment `a b` meets the shape.
pub fn segment_meets(shape: &Shape, a: Point2, b: Point2) -> bool {
    match shape {
        Shape::Ellipse(e) => {
            // local frame where the ellipse is the unit circle
            let to_unit = |q: Point2| {
                let l = (q - e.center).rotate(-e.rotation);
                p(l.x / e.semi_axes.0, l.y / e.semi_axes.1)
            };
            let (ua, ub) = (to_unit(a), to_unit(b));
            let d = ub - ua;
            let t = if d.norm2() == 0.0 { 0.0 } else { (-ua.dot(d) / d.norm2()).clamp(0.0, 1.0) };
            (ua + d * t).norm() <= 1.0 + 1e-12
        }
        Shape::Polygon(q) => {
            let s = Segment::new(a, b);
            q.contains(a) || q.contains(b) || q.edges().any(|e| s.intersect(&e).is_some())
        }
    }
}

/// Segment-membership oracle for `x̄ ∈ SH_p(∪ shapes)`: some shape point lies
/// on the ray from `p` through `x̄`, at or beyond `x̄`.
pub fn excluded_by_hull(shapes: &[Shape], p0: Point2, xbar: Point2, reach: f64) -> bool {
    let d = xbar - p0;
    let n = d.norm();
    if n == 0.0 {
        return true;
    }
    let far = xbar + d * (reach / n);
    shapes.iter().any(|s| segment_meets(s, xbar, far))
}

/// Square raster over a box; a pixel is in a set when its centre is.
pub struct Raster {
    pub n: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub bits: Vec<bool>,
}

impl Raster {
    pub fn new(b: &starworlds::geom::Aabb, n: usize) -> Self {
        let b = b.expanded(0.02 * b.diameter());
        Self {
            n,
            x0: b.min.x,
            y0: b.min.y,
            dx: (b.max.x - b.min.x) / n as f64,
            dy: (b.max.y - b.min.y) / n as f64,
            bits: vec![false; n * n],
        }
    }

    fn row_y(&self, j: usize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy
    }

    fn fill_span(&mut self, j: usize, xl: f64, xr: f64) {
        let lo = ((xl - self.x0) / self.dx - 0.5).ceil().max(0.0) as usize;
        let hi = ((xr - self.x0) / self.dx - 0.5).floor();
        if hi < 0.0 {
            return;
        }
        let hi = (hi as usize).min(self.n - 1);
        for i in lo..=hi {
            self.bits[j * self.n + i] = true;
        }
    }

    pub fn fill_triangle(&mut self, a: Point2, b: Point2, c: Point2) {
        self.fill_polygon(&[a, b, c]);
    }

    /// Even-odd scanline fill of a closed ring; convex rings give one span.
    pub fn fill_polygon(&mut self, ring: &[Point2]) {
        let (ymin, ymax) = ring.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), q| (a.min(q.y), b.max(q.y)));
        let j0 = ((ymin - self.y0) / self.dy - 0.5).ceil().max(0.0) as usize;
        let j1 = ((ymax - self.y0) / self.dy - 0.5).floor();
        if j1 < 0.0 {
            return;
        }
        let j1 = (j1 as usize).min(self.n - 1);
        let m = ring.len();
        let mut xs = Vec::new();
        for j in j0..=j1 {
            let y = self.row_y(j);
            xs.clear();
            for i in 0..m {
                let (a, b) = (ring[i], ring[(i + 1) % m]);
                if (a.y <= y && y < b.y) || (b.y <= y && y < a.y) {
                    xs.push(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
                }
            }
            xs.sort_by(f64::total_cmp);
            for pair in xs.chunks(2) {
                if let [l, r] = pair {
                    self.fill_span(j, *l, *r);
                }
            }
        }
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn iou(&self, o: &Raster) -> f64 {
        let (mut i, mut u) = (0usize, 0usize);
        for (a, b) in self.bits.iter().zip(&o.bits) {
            i += (*a && *b) as usize;
            u += (*a || *b) as usize;
        }
        if u == 0 {
            1.0
        } else {
            i as f64 / u as f64
        }
    }
}

/// Uniform point in the triangle `a b c`.
pub fn sample_triangle(rng: &mut ChaCha8Rng, a: Point2, b: Point2, c: Point2) -> Point2 {
    let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    a + (b - a) * u + (c - a) * v
}

/// `∪_{k} SH_k(P)` for polygons, drawn directly from the definition: the
/// hull of a polygon from `k` is the fan of triangles from `k` over its edges.
pub fn raster_hull_from_points(r: &mut Raster, polys: &[&[Point2]], ks: &[Point2]) {
    for ring in polys {
        r.fill_polygon(ring);
        for &k in ks {
            let m = ring.len();
            for i in 0..m {
                r.fill_triangle(k, ring[i], ring[(i + 1) % m]);
            }
        }
    }
}
