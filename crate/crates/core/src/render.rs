//! Deterministic SVG pictures of two-dimensional scenes.
//!
//! Flat charts draw in their own coordinates; the sphere draws through the
//! central projection onto the tangent plane at the first coordinate axis,
//! dropping samples too close to the horizon; the hyperbolic sheet draws in
//! the projective ball model. Geometry is emitted in world coordinates
//! inside a single scaling group, every number is printed with six decimal
//! places, and iteration follows name order, so equal scenes and options
//! produce byte-identical files.

use std::fmt::Write as _;

use crate::body::ConvexBody;
use crate::chart::{Chart, ChartKind, Point, Vector};
use crate::desitter::null_directions;
use crate::error::{Error, Result};
use crate::length::directional_functional;
use crate::order::{ContextKind, TimelikeContext};
use crate::ray::GeodesicRay;
use crate::scene::Scene;

/// What to draw besides the bodies, curves, and named points of the scene.
#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Number of fan directions used for boundary tracing.
    pub rays: usize,
    /// Names of points whose timelike cone boundary is drawn.
    pub cone_from: Vec<String>,
    /// Name of the base point for dilation spheres.
    pub sphere_from: Option<String>,
    /// Radii of the dilation spheres drawn around `sphere_from`.
    pub sphere_radii: Vec<f64>,
    /// Names of points whose null directions are marked.
    pub null_from: Vec<String>,
    /// Pixel size of the output image.
    pub width: f64,
    /// Pixel size of the output image.
    pub height: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            rays: 720,
            cone_from: Vec::new(),
            sphere_from: None,
            sphere_radii: Vec::new(),
            null_from: Vec::new(),
            width: 640.0,
            height: 640.0,
        }
    }
}

/// Horizon cutoff for the spherical central projection: samples with first
/// coordinate at or below this value are dropped instead of projected.
const HORIZON_CUTOFF: f64 = 0.05;

struct Figure {
    /// (class, world points, closed)
    paths: Vec<(&'static str, Vec<(f64, f64)>, bool)>,
    /// (world position, label)
    dots: Vec<((f64, f64), String)>,
}

fn project(chart: Chart, p: &Point) -> Option<(f64, f64)> {
    match chart.kind() {
        ChartKind::Euclidean => Some((p[0], p[1])),
        ChartKind::Spherical => {
            if p[0] > HORIZON_CUTOFF {
                Some((p[1] / p[0], p[2] / p[0]))
            } else {
                None
            }
        }
        ChartKind::Hyperbolic => Some((p[1] / p[0], p[2] / p[0])),
    }
}

/// Two orthonormal tangent directions at `p`, fixed by Gram-Schmidt over the
/// ambient basis in index order.
fn tangent_frame(chart: Chart, p: &Point) -> Vec<Vector> {
    let ambient = chart.ambient_len();
    let mut frame: Vec<Vector> = Vec::with_capacity(2);
    for i in 0..ambient {
        if frame.len() == 2 {
            break;
        }
        let mut v = Vector::zeros(ambient);
        v[i] = 1.0;
        let mut v = chart.project_tangent(p, &v);
        for f in &frame {
            v -= f * chart.form_dot(f, &v);
        }
        let n = chart.tangent_norm(&v);
        if n > 1e-9 {
            frame.push(v / n);
        }
    }
    frame
}

fn fan_direction(frame: &[Vector], theta: f64) -> Vector {
    &frame[0] * theta.cos() + &frame[1] * theta.sin()
}

/// Splits fan samples into contiguous polylines, merging across the angular
/// wrap so a boundary visible on both sides of the cut stays in one piece.
fn collect_runs(samples: Vec<Option<(f64, f64)>>) -> Vec<(Vec<(f64, f64)>, bool)> {
    let n = samples.len();
    let mut runs: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    let mut starts_at_zero = false;
    for (k, sample) in samples.into_iter().enumerate() {
        match sample {
            Some(xy) => {
                if current.is_empty() && k == 0 {
                    starts_at_zero = true;
                }
                current.push(xy);
            }
            None => {
                if !current.is_empty() {
                    runs.push(std::mem::take(&mut current));
                }
            }
        }
    }
    if !current.is_empty() {
        let ends_at_last = true;
        if runs.is_empty() && current.len() == n {
            // Every direction produced a point: one closed loop.
            return vec![(current, true)];
        }
        if starts_at_zero && ends_at_last && !runs.is_empty() {
            // The run wraps around the angular cut; prepend it to the first.
            let mut first = runs.remove(0);
            current.append(&mut first);
            runs.insert(0, current);
        } else {
            runs.push(current);
        }
    }
    runs.into_iter().map(|r| (r, false)).collect()
}

fn trace_body(chart: Chart, body: &ConvexBody, rays: usize) -> Result<Vec<(Vec<(f64, f64)>, bool)>> {
    let witness = body.witness().clone();
    let frame = tangent_frame(chart, &witness);
    let mut samples = Vec::with_capacity(rays);
    for k in 0..rays {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (rays as f64);
        let ray = GeodesicRay::new(chart, witness.clone(), fan_direction(&frame, theta))?;
        let sample = body
            .boundary_exit(&ray)?
            .and_then(|hit| project(chart, &hit.point));
        samples.push(sample);
    }
    Ok(collect_runs(samples))
}

fn trace_dilation_sphere(
    ctx: &TimelikeContext,
    base: &Point,
    radius: f64,
    rays: usize,
) -> Result<Vec<(Vec<(f64, f64)>, bool)>> {
    let chart = ctx.chart();
    if ctx.kind() != ContextKind::Funk {
        return Err(Error::UnsupportedContext {
            op: "dilation sphere rendering",
            expected: "one-sided",
        });
    }
    if chart.kind() != ChartKind::Euclidean {
        return Err(Error::UnsupportedChart {
            op: "dilation sphere rendering",
            chart: chart.kind(),
        });
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::OutOfDomain {
            what: "dilation radius",
        });
    }
    let shrink = 1.0 - (-radius).exp();
    let frame = tangent_frame(chart, base);
    let mut samples = Vec::with_capacity(rays);
    for k in 0..rays {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (rays as f64);
        let ray = GeodesicRay::new(chart, base.clone(), fan_direction(&frame, theta))?;
        let sample = ctx
            .future_body()
            .ray_first_hit(&ray)?
            .filter(|hit| hit.transversal)
            .map(|hit| &hit.point * shrink + base * (1.0 - shrink))
            .and_then(|q| project(chart, &q));
        samples.push(sample);
    }
    Ok(collect_runs(samples))
}

fn trace_cone(
    ctx: &TimelikeContext,
    p: &Point,
    rays: usize,
) -> Result<Vec<Vec<(f64, f64)>>> {
    let chart = ctx.chart();
    let frame = tangent_frame(chart, p);
    let member = |theta: f64| -> bool {
        directional_functional(ctx, p, &fan_direction(&frame, theta)).is_ok()
    };
    let step = 2.0 * std::f64::consts::PI / (rays as f64);
    let membership: Vec<bool> = (0..rays).map(|k| member(step * k as f64)).collect();
    let mut edges = Vec::new();
    for k in 0..rays {
        let next = (k + 1) % rays;
        if membership[k] == membership[next] {
            continue;
        }
        let mut a = step * k as f64;
        let mut b = a + step;
        let inside_a = membership[k];
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if member(mid) == inside_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        let boundary = 0.5 * (a + b);
        let inside = if inside_a { a } else { b };
        // Visual length of the edge: distance to the future boundary along
        // the nearby timelike direction.
        let inside_ray = GeodesicRay::new(chart, p.clone(), fan_direction(&frame, inside))?;
        let reach = match ctx.future_body().ray_first_hit(&inside_ray)? {
            Some(hit) if hit.t.is_finite() => hit.t,
            _ => 1.0,
        };
        let edge_ray = GeodesicRay::new(chart, p.clone(), fan_direction(&frame, boundary))?;
        let mut polyline = Vec::with_capacity(65);
        for s in 0..=64 {
            let t = reach * (s as f64) / 64.0;
            if let Some(xy) = project(chart, &edge_ray.point_at(t)) {
                polyline.push(xy);
            }
        }
        if polyline.len() >= 2 {
            edges.push(polyline);
        }
    }
    Ok(edges)
}

fn trace_null_markers(
    ctx: &TimelikeContext,
    p: &Point,
) -> Result<Vec<Vec<(f64, f64)>>> {
    let chart = ctx.chart();
    let dirs = null_directions(ctx, p)?;
    let mut markers = Vec::with_capacity(dirs.len());
    for dir in dirs {
        let ray = GeodesicRay::new(chart, p.clone(), dir)?;
        let mut polyline = Vec::with_capacity(17);
        for s in 0..=16 {
            let t = 0.25 * (s as f64) / 16.0;
            if let Some(xy) = project(chart, &ray.point_at(t)) {
                polyline.push(xy);
            }
        }
        if polyline.len() >= 2 {
            markers.push(polyline);
        }
    }
    Ok(markers)
}

fn named_point<'a>(scene: &'a Scene, name: &str) -> Result<&'a Point> {
    scene.points.get(name).ok_or_else(|| Error::SceneInvalid {
        message: format!("no point named '{name}'"),
    })
}

fn fmt(x: f64) -> String {
    let snapped = if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{snapped:.6}")
}

/// Renders a two-dimensional scene to an SVG document.
pub fn render_svg(scene: &Scene, options: &RenderOptions) -> Result<String> {
    let chart = scene.chart;
    if chart.dim() != 2 {
        return Err(Error::OutOfDomain {
            what: "render chart dimension (must be 2)",
        });
    }
    if options.rays < 8 {
        return Err(Error::OutOfDomain {
            what: "render ray count (must be at least 8)",
        });
    }
    let mut figure = Figure {
        paths: Vec::new(),
        dots: Vec::new(),
    };

    if chart.kind() == ChartKind::Hyperbolic {
        let horizon: Vec<(f64, f64)> = (0..256)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / 256.0;
                (theta.cos(), theta.sin())
            })
            .collect();
        figure.paths.push(("horizon", horizon, true));
    }

    for body in scene.bodies.values() {
        for (run, closed) in trace_body(chart, body, options.rays)? {
            figure.paths.push(("body", run, closed));
        }
    }
    if scene.context.kind() == ContextKind::ProjectiveDesitter {
        // The mirrored second body is derived by the context and does not
        // appear in the scene's body table; draw it as well.
        for (run, closed) in trace_body(chart, scene.context.future_body(), options.rays)? {
            figure.paths.push(("body", run, closed));
        }
    }

    if let Some(name) = &options.sphere_from {
        let base = named_point(scene, name)?;
        for &radius in &options.sphere_radii {
            for (run, closed) in trace_dilation_sphere(&scene.context, base, radius, options.rays)? {
                figure.paths.push(("sphere", run, closed));
            }
        }
    }

    for name in &options.cone_from {
        let p = named_point(scene, name)?;
        for run in trace_cone(&scene.context, p, options.rays)? {
            figure.paths.push(("cone", run, false));
        }
    }

    for name in &options.null_from {
        let p = named_point(scene, name)?;
        for run in trace_null_markers(&scene.context, p)? {
            figure.paths.push(("null", run, false));
        }
    }

    for curve in scene.curves.values() {
        let samples: Vec<Option<(f64, f64)>> = (0..=256)
            .map(|s| {
                let (point, _) = curve.evaluate(s as f64 / 256.0);
                project(chart, &point)
            })
            .collect();
        let mut current: Vec<(f64, f64)> = Vec::new();
        for sample in samples {
            match sample {
                Some(xy) => current.push(xy),
                None => {
                    if current.len() >= 2 {
                        figure.paths.push(("curve", std::mem::take(&mut current), false));
                    } else {
                        current.clear();
                    }
                }
            }
        }
        if current.len() >= 2 {
            figure.paths.push(("curve", current, false));
        }
    }

    for (name, point) in &scene.points {
        if let Some(xy) = project(chart, point) {
            figure.dots.push((xy, name.clone()));
        }
    }

    // World bounding box over everything drawn.
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut touch = |&(x, y): &(f64, f64)| {
        lo.0 = lo.0.min(x);
        lo.1 = lo.1.min(y);
        hi.0 = hi.0.max(x);
        hi.1 = hi.1.max(y);
    };
    for (_, run, _) in &figure.paths {
        run.iter().for_each(&mut touch);
    }
    for (xy, _) in &figure.dots {
        touch(xy);
    }
    if !(lo.0.is_finite() && hi.0.is_finite()) {
        return Err(Error::SceneInvalid {
            message: "nothing to draw".to_string(),
        });
    }
    let pad = 0.08 * ((hi.0 - lo.0).max(hi.1 - lo.1)).max(1e-6);
    lo = (lo.0 - pad, lo.1 - pad);
    hi = (hi.0 + pad, hi.1 + pad);
    let scale = (options.width / (hi.0 - lo.0)).min(options.height / (hi.1 - lo.1));
    let cx = 0.5 * (lo.0 + hi.0);
    let cy = 0.5 * (lo.1 + hi.1);
    let tx = 0.5 * options.width - scale * cx;
    let ty = 0.5 * options.height + scale * cy;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n",
        fmt(options.width),
        fmt(options.height)
    );
    svg.push_str(
        "<style>\n\
         .horizon { stroke: #9aa0a6; stroke-dasharray: 0.02 0.02; }\n\
         .body { stroke: #1a6fb5; }\n\
         .sphere { stroke: #7b4fa6; }\n\
         .cone { stroke: #2c8a4b; }\n\
         .null { stroke: #d97706; }\n\
         .curve { stroke: #b33636; }\n\
         .dot { fill: #202124; stroke: none; }\n\
         text { font-family: monospace; font-size: 13px; fill: #202124; }\n\
         </style>\n",
    );
    let _ = write!(
        svg,
        "<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(options.width),
        fmt(options.height)
    );
    let _ = write!(
        svg,
        "<g transform=\"matrix({} 0 0 {} {} {})\" fill=\"none\" stroke-width=\"{}\">\n",
        fmt(scale),
        fmt(-scale),
        fmt(tx),
        fmt(ty),
        fmt(2.0 / scale)
    );
    for (class, run, closed) in &figure.paths {
        let tag = if *closed { "polygon" } else { "polyline" };
        let _ = write!(svg, "<{tag} class=\"{class}\" points=\"");
        for (i, (x, y)) in run.iter().enumerate() {
            if i > 0 {
                svg.push(' ');
            }
            let _ = write!(svg, "{},{}", fmt(*x), fmt(*y));
        }
        svg.push_str("\"/>\n");
    }
    for ((x, y), _) in &figure.dots {
        let _ = write!(
            svg,
            "<circle class=\"dot\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
            fmt(*x),
            fmt(*y),
            fmt(3.5 / scale)
        );
    }
    svg.push_str("</g>\n");
    for ((x, y), label) in &figure.dots {
        let px = scale * x + tx;
        let py = -scale * y + ty;
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\">{}</text>\n",
            fmt(px + 6.0),
            fmt(py - 6.0),
            label
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    const FLAT_SCENE: &str = r#"{
        "chart": { "kind": "euclidean", "dimension": 2 },
        "bodies": {
            "wall": {
                "type": "hpolytope",
                "faces": [ { "normal": [1.0, 0.0], "offset": -2.0 } ],
                "witness": [-3.0, 0.0]
            }
        },
        "context": { "kind": "funk", "body": "wall" },
        "points": { "p": [-1.0, 0.0] }
    }"#;

    #[test]
    fn rendering_is_byte_deterministic() {
        let scene = parse_scene(FLAT_SCENE).unwrap();
        let options = RenderOptions {
            cone_from: vec!["p".to_string()],
            sphere_from: Some("p".to_string()),
            sphere_radii: vec![2.0f64.ln()],
            ..RenderOptions::default()
        };
        let first = render_svg(&scene, &options).unwrap();
        let second = render_svg(&scene, &options).unwrap();
        assert_eq!(first, second);
        assert!(first.starts_with("<svg"));
        assert!(first.contains("class=\"body\""));
        assert!(first.contains("class=\"sphere\""));
        assert!(first.contains("class=\"cone\""));
    }

    #[test]
    fn dilation_sphere_passes_through_the_known_midpoint() {
        // Base (-1, 0), wall at x = -2, radius ln 2: the sample straight
        // toward the wall lands at (-1.5, 0).
        let scene = parse_scene(FLAT_SCENE).unwrap();
        let options = RenderOptions {
            sphere_from: Some("p".to_string()),
            sphere_radii: vec![2.0f64.ln()],
            ..RenderOptions::default()
        };
        let svg = render_svg(&scene, &options).unwrap();
        assert!(svg.contains("-1.500000,0.000000"));
    }

    #[test]
    fn spherical_scene_renders_through_the_central_projection() {
        let text = r#"{
            "chart": { "kind": "spherical", "dimension": 2 },
            "bodies": {
                "south": { "type": "cap", "center": [-1.0, 0.0, 0.0], "radius": 0.7853981633974483 }
            },
            "context": { "kind": "projective_desitter", "body": "south" },
            "points": { "p": [0.2, 1.0, 0.0] }
        }"#;
        let scene = parse_scene(text).unwrap();
        let options = RenderOptions {
            null_from: vec!["p".to_string()],
            cone_from: vec!["p".to_string()],
            ..RenderOptions::default()
        };
        let svg = render_svg(&scene, &options).unwrap();
        assert!(svg.contains("class=\"null\""));
        assert!(svg.contains("class=\"body\""));
    }

    #[test]
    fn unknown_point_names_are_reported() {
        let scene = parse_scene(FLAT_SCENE).unwrap();
        let options = RenderOptions {
            cone_from: vec!["missing".to_string()],
            ..RenderOptions::default()
        };
        assert!(matches!(
            render_svg(&scene, &options),
            Err(Error::SceneInvalid { .. })
        ));
    }
}
