//! Timing of star world formation over random scenes.

use crate::scenario::generate_scene_at;
use crate::starworld::{form_star_world, FormOptions, WorldStatus};
use crate::Error;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub scenes: usize,
    pub min_obstacles: usize,
    pub max_obstacles: usize,
    pub seed: u64,
    pub form: FormOptions,
    /// Timed runs per scene after one warm-up run; the median is reported.
    pub repeats: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { scenes: 100, min_obstacles: 5, max_obstacles: 50, seed: 0, form: FormOptions::default(), repeats: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BenchStatus {
    Disjoint,
    Fallback,
    IterationLimit,
    GenerationFailed,
    Failed,
}

impl BenchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchStatus::Disjoint => "disjoint",
            BenchStatus::Fallback => "intersecting_fallback",
            BenchStatus::IterationLimit => "iteration_limit",
            BenchStatus::GenerationFailed => "generation_failed",
            BenchStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scene: usize,
    pub n: usize,
    /// Clustering passes; `None` when no world was formed.
    pub iterations: Option<usize>,
    pub status: BenchStatus,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucketStats {
    pub n: usize,
    pub count: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub median_ms: f64,
    pub max_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub seed: u64,
    pub exclude_obstacle_points: bool,
}

pub fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Obstacle count of scene `k`: the range is cycled through.
pub fn obstacles_for_scene(k: usize, min: usize, max: usize) -> usize {
    min + k % (max - min + 1)
}

pub fn run_scene(k: usize, opts: &BenchOptions) -> BenchRow {
    let n = obstacles_for_scene(k, opts.min_obstacles, opts.max_obstacles);
    let scene = match generate_scene_at(n, opts.seed, k as u64) {
        Ok(s) => s,
        Err(e) => {
            log::warn!("scene {k}: {e}");
            return BenchRow { scene: k, n, iterations: None, status: BenchStatus::GenerationFailed, ms: f64::NAN };
        }
    };
    let form = || form_star_world(&scene.obstacles, scene.robot, scene.goal, &opts.form, None);
    let first = form();
    let mut times = Vec::with_capacity(opts.repeats);
    for _ in 0..opts.repeats.max(1) {
        let t = Instant::now();
        let w = form();
        times.push(t.elapsed().as_secs_f64() * 1e3);
        debug_assert_eq!(w.is_ok(), first.is_ok());
    }
    let ms = median(&mut times);
    match first {
        Ok(w) => {
            let status = match w.status {
                WorldStatus::Disjoint => BenchStatus::Disjoint,
                WorldStatus::IntersectingFallback => BenchStatus::Fallback,
            };
            BenchRow { scene: k, n, iterations: Some(w.iterations), status, ms }
        }
        Err(Error::IterationLimit(m)) => BenchRow { scene: k, n, iterations: Some(m + 1), status: BenchStatus::IterationLimit, ms },
        Err(e) => {
            log::warn!("scene {k}: {e}");
            BenchRow { scene: k, n, iterations: None, status: BenchStatus::Failed, ms }
        }
    }
}

/// Runs every scene in order on one thread, so timings do not compete.
pub fn bench(opts: &BenchOptions) -> crate::Result<BenchReport> {
    if opts.scenes == 0 || opts.min_obstacles == 0 || opts.min_obstacles > opts.max_obstacles {
        return Err(Error::MalformedInput("bench needs scenes ≥ 1 and 1 ≤ min ≤ max obstacles".into()));
    }
    let rows = (0..opts.scenes)
        .map(|k| {
            let r = run_scene(k, opts);
            log::debug!("scene {k}: n={} M={:?} {} {:.3} ms", r.n, r.iterations, r.status.as_str(), r.ms);
            r
        })
        .collect();
    Ok(BenchReport { rows, seed: opts.seed, exclude_obstacle_points: opts.form.exclude_obstacle_points })
}

impl BenchReport {
    pub fn buckets(&self) -> Vec<BucketStats> {
        let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for r in &self.rows {
            if r.ms.is_finite() {
                by_n.entry(r.n).or_default().push(r.ms);
            }
        }
        by_n.into_iter()
            .map(|(n, mut v)| {
                let count = v.len();
                let mean = v.iter().sum::<f64>() / count as f64;
                let var = v.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / count as f64;
                let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                BucketStats { n, count, mean_ms: mean, std_ms: var.sqrt(), median_ms: median(&mut v), max_ms: max }
            })
            .collect()
    }

    /// Number of scenes per clustering pass count.
    pub fn iteration_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for m in self.rows.iter().filter_map(|r| r.iterations) {
            *h.entry(m).or_insert(0) += 1;
        }
        h
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("scene,n,M,status,ms\n");
        for r in &self.rows {
            let m = r.iterations.map(|m| m.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{},{:.3}", r.scene, r.n, m, r.status.as_str(), r.ms);
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenes={} seed={} exclude_obstacle_points={}", self.rows.len(), self.seed, self.exclude_obstacle_points);
        let mut status: BTreeMap<BenchStatus, usize> = BTreeMap::new();
        for r in &self.rows {
            *status.entry(r.status).or_insert(0) += 1;
        }
        for (k, v) in status {
            let _ = writeln!(s, "status {}={v}", k.as_str());
        }
        for (m, c) in self.iteration_histogram() {
            let _ = writeln!(s, "M={m}: {c}");
        }
        let _ = writeln!(s, "n,count,mean_ms,std_ms,median_ms,max_ms");
        for b in self.buckets() {
            let _ = writeln!(s, "{},{},{:.3},{:.3},{:.3},{:.3}", b.n, b.count, b.mean_ms, b.std_ms, b.median_ms, b.max_ms);
        }
        s
    }
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(n, t)| (n.ln(), t.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
