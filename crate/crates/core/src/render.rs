//! SVG pictures of scenes and star worlds.

use crate::geom::{Aabb, Point2, Shape};
use crate::starworld::{Obstacle, StarWorld};
use std::fmt::Write as _;

/// Fill colours of successive clusters.
pub const PALETTE: [&str; 8] = ["#e6194b", "#3cb44b", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe"];

const ORIGINAL_FILL: &str = "#8c8c8c";
const KERNEL_FILL: &str = "#1f3fbf";
const PIXELS: f64 = 800.0;

pub struct Picture<'a> {
    pub originals: &'a [Obstacle],
    pub world: Option<&'a StarWorld>,
    pub robot: Point2,
    pub goal: Point2,
    pub trajectory: &'a [Point2],
}

fn pt(p: Point2) -> String {
    // y grows upwards in the scene, downwards in SVG
    format!("{:.5},{:.5}", p.x, -p.y)
}

fn points(v: &[Point2]) -> String {
    v.iter().map(|&p| pt(p)).collect::<Vec<_>>().join(" ")
}

fn bounds(pic: &Picture) -> Aabb {
    let mut b = Aabb::from_points([pic.robot, pic.goal]);
    for o in pic.originals {
        b = b.union(&o.shape.bbox());
    }
    if let Some(w) = pic.world {
        for s in &w.obstacles {
            b = b.union(&s.bbox());
        }
    }
    for &p in pic.trajectory {
        b.include(p);
    }
    b.expanded(0.05 * b.diameter().max(1.0))
}

fn shape_element(out: &mut String, s: &Shape, attrs: &str) {
    match s {
        Shape::Ellipse(e) => {
            let _ = writeln!(
                out,
                r#"<ellipse cx="{:.5}" cy="{:.5}" rx="{:.5}" ry="{:.5}" transform="rotate({:.5} {:.5} {:.5})" {attrs}/>"#,
                e.center.x,
                -e.center.y,
                e.semi_axes.0,
                e.semi_axes.1,
                -e.rotation.to_degrees(),
                e.center.x,
                -e.center.y,
            );
        }
        Shape::Polygon(p) => {
            let _ = writeln!(out, r#"<polygon points="{}" {attrs}/>"#, points(p.vertices()));
        }
    }
}

/// Stars in cluster colours, originals in gray on top, kernels in blue,
/// the robot in red and the goal in black. Output depends only on the input.
pub fn render_svg(pic: &Picture) -> String {
    let b = bounds(pic);
    let (w, h) = (b.max.x - b.min.x, b.max.y - b.min.y);
    let unit = b.diameter() / 400.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{:.5} {:.5} {:.5} {:.5}">"#,
        PIXELS,
        PIXELS * h / w,
        b.min.x,
        -b.max.y,
        w,
        h
    );
    let _ = writeln!(out, r#"<rect x="{:.5}" y="{:.5}" width="{:.5}" height="{:.5}" fill="white"/>"#, b.min.x, -b.max.y, w, h);

    if let Some(world) = pic.world {
        for (i, s) in world.obstacles.iter().enumerate() {
            let c = PALETTE[i % PALETTE.len()];
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="{c}" fill-opacity="0.45" stroke="{c}" stroke-width="{:.5}"/>"#,
                points(s.boundary_polygon().vertices()),
                unit
            );
        }
    }
    let attrs = format!(r##"fill="{ORIGINAL_FILL}" fill-opacity="0.9" stroke="#404040" stroke-width="{unit:.5}""##);
    for o in pic.originals {
        shape_element(&mut out, &o.shape, &attrs);
    }
    if let Some(world) = pic.world {
        for s in &world.obstacles {
            match s.kernel_hull() {
                Some(k) => {
                    let _ = writeln!(out, r#"<polygon points="{}" fill="{KERNEL_FILL}"/>"#, points(k.vertices()));
                }
                None => {
                    let c = s.kernel_centroid();
                    let _ = writeln!(out, r#"<circle cx="{:.5}" cy="{:.5}" r="{:.5}" fill="{KERNEL_FILL}"/>"#, c.x, -c.y, unit);
                }
            }
        }
    }
    if pic.trajectory.len() > 1 {
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#202020" stroke-width="{:.5}"/>"##,
            points(pic.trajectory),
            unit
        );
    }
    let _ = writeln!(out, r#"<circle cx="{:.5}" cy="{:.5}" r="{:.5}" fill="red"/>"#, pic.robot.x, -pic.robot.y, 3.0 * unit);
    let _ = writeln!(out, r#"<circle cx="{:.5}" cy="{:.5}" r="{:.5}" fill="black"/>"#, pic.goal.x, -pic.goal.y, 3.0 * unit);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Ellipse;
    use crate::starworld::{form_star_world, FormOptions};

    #[test]
    fn deterministic_and_complete() {
        let p = Point2::new;
        let obs = vec![
            Obstacle::new("a", Shape::Ellipse(Ellipse::new(p(0.0, 0.0), 2.0, 1.0, 0.3).unwrap())),
            Obstacle::new("b", Shape::Ellipse(Ellipse::new(p(1.5, 0.5), 1.0, 1.0, 0.0).unwrap())),
        ];
        let (x, xg) = (p(-5.0, 0.0), p(5.0, 0.0));
        let w = form_star_world(&obs, x, xg, &FormOptions::default(), None).unwrap();
        let pic = Picture { originals: &obs, world: Some(&w), robot: x, goal: xg, trajectory: &[x, p(-4.0, 0.5)] };
        let a = render_svg(&pic);
        assert_eq!(a, render_svg(&pic));
        assert_eq!(a.matches("<ellipse").count(), 2);
        assert!(a.contains(KERNEL_FILL) && a.contains("fill=\"red\"") && a.contains("<polyline"));
        assert!(a.trim_end().ends_with("</svg>"));
    }
}
