//! Textual scene descriptions: a chart, named bodies, an order context, and
//! optional named points and curves, parsed from JSON.
//!
//! Hyperbolic points may be given either as ambient coordinates (one more
//! than the chart dimension) or as ball-model coordinates (exactly the chart
//! dimension), which are lifted. Spherical points are given in ambient
//! coordinates and renormalized; flat points use the chart dimension.
//!
//! Polytope faces are written as a normal vector and an offset: the face is
//! the set where `normal . x = offset` and the body's interior lies on the
//! side where `normal . x < offset`. Curved charts require offset zero.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::body::ConvexBody;
use crate::chart::{klein_to_hyperboloid, Chart, ChartKind, Point};
use crate::error::{Error, Result};
use crate::hyperplane::Hyperplane;
use crate::length::{geodesic_between, polyline, TimelikeCurve};
use crate::order::TimelikeContext;

/// A fully built scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub chart: Chart,
    pub context: TimelikeContext,
    pub bodies: BTreeMap<String, ConvexBody>,
    pub points: BTreeMap<String, Point>,
    pub curves: BTreeMap<String, TimelikeCurve>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    chart: RawChart,
    bodies: BTreeMap<String, RawBody>,
    context: RawContext,
    #[serde(default)]
    points: BTreeMap<String, Vec<f64>>,
    #[serde(default)]
    curves: BTreeMap<String, RawCurve>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    kind: ChartKind,
    dimension: usize,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawBody {
    Hpolytope {
        faces: Vec<RawFace>,
        #[serde(default)]
        witness: Option<Vec<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// Spherical ball under its traditional name; spherical charts only.
    Cap {
        center: Vec<f64>,
        radius: f64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFace {
    normal: Vec<f64>,
    #[serde(default)]
    offset: f64,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawContext {
    Funk {
        #[serde(alias = "future")]
        body: String,
    },
    Hilbert {
        past: String,
        future: String,
    },
    SphericalHilbert {
        past: String,
        future: String,
    },
    ProjectiveDesitter {
        #[serde(alias = "past")]
        body: String,
    },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawCurve {
    Polyline { points: Vec<Vec<f64>> },
    Geodesic { from: Vec<f64>, to: Vec<f64> },
}

/// Converts scene coordinates to a chart point, accepting the ball model
/// for hyperbolic charts.
pub fn scene_point(chart: Chart, coords: &[f64]) -> Result<Point> {
    let ambient = chart.ambient_len();
    let lifted = match chart.kind() {
        ChartKind::Euclidean => {
            if coords.len() != ambient {
                return Err(Error::SceneInvalid {
                    message: format!(
                        "flat point needs {ambient} coordinates, got {}",
                        coords.len()
                    ),
                });
            }
            Point::from_column_slice(coords)
        }
        ChartKind::Spherical => {
            if coords.len() != ambient {
                return Err(Error::SceneInvalid {
                    message: format!(
                        "spherical point needs {ambient} ambient coordinates, got {}",
                        coords.len()
                    ),
                });
            }
            let x = Point::from_column_slice(coords);
            let n = x.norm();
            if !n.is_finite() || n <= 1e-12 {
                return Err(Error::SceneInvalid {
                    message: "spherical point has no usable direction".to_string(),
                });
            }
            x / n
        }
        ChartKind::Hyperbolic => {
            if coords.len() == ambient {
                let x = Point::from_column_slice(coords);
                let m = -crate::chart::minkowski_dot(&x, &x);
                if !m.is_finite() || m <= 0.0 || x[0] <= 0.0 {
                    return Err(Error::SceneInvalid {
                        message: "hyperbolic ambient point must lie inside the future \
                                  light cone"
                            .to_string(),
                    });
                }
                x / m.sqrt()
            } else if coords.len() == chart.dim() {
                klein_to_hyperboloid(coords)?
            } else {
                return Err(Error::SceneInvalid {
                    message: format!(
                        "hyperbolic point needs {} ball-model or {ambient} ambient \
                         coordinates, got {}",
                        chart.dim(),
                        coords.len()
                    ),
                });
            }
        }
    };
    chart.normalize_point(lifted)
}

fn build_body(chart: Chart, name: &str, raw: &RawBody) -> Result<ConvexBody> {
    let body = match raw {
        RawBody::Hpolytope { faces, witness } => {
            let mut planes = Vec::with_capacity(faces.len());
            for face in faces {
                if face.normal.len() != chart.ambient_len() {
                    return Err(Error::SceneInvalid {
                        message: format!(
                            "body '{name}': face normal needs {} coordinates, got {}",
                            chart.ambient_len(),
                            face.normal.len()
                        ),
                    });
                }
                planes.push(Hyperplane::new(
                    chart,
                    Point::from_column_slice(&face.normal),
                    face.offset,
                )?);
            }
            let witness = match witness {
                Some(coords) => Some(scene_point(chart, coords)?),
                None => None,
            };
            ConvexBody::polytope(chart, planes, witness)?
        }
        RawBody::Ball { center, radius } => {
            ConvexBody::ball(chart, scene_point(chart, center)?, *radius)?
        }
        RawBody::Cap { center, radius } => {
            if chart.kind() != ChartKind::Spherical {
                return Err(Error::SceneInvalid {
                    message: format!("body '{name}': cap bodies need a spherical chart"),
                });
            }
            ConvexBody::ball(chart, scene_point(chart, center)?, *radius)?
        }
    };
    Ok(body)
}

fn pick_body(bodies: &BTreeMap<String, ConvexBody>, id: &str) -> Result<ConvexBody> {
    bodies
        .get(id)
        .cloned()
        .ok_or_else(|| Error::UnknownBody { id: id.to_string() })
}

/// Parses and validates a JSON scene. Syntax problems carry the line and
/// column; semantic problems explain themselves in plain text.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let raw: RawScene = serde_json::from_str(text).map_err(|e| Error::SceneParse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let chart = Chart::new(raw.chart.kind, raw.chart.dimension)?;
    let mut bodies = BTreeMap::new();
    for (name, body) in &raw.bodies {
        bodies.insert(name.clone(), build_body(chart, name, body)?);
    }
    let context = match &raw.context {
        RawContext::Funk { body } => TimelikeContext::funk(pick_body(&bodies, body)?)?,
        RawContext::Hilbert { past, future } => {
            TimelikeContext::hilbert(pick_body(&bodies, past)?, pick_body(&bodies, future)?)?
        }
        RawContext::SphericalHilbert { past, future } => TimelikeContext::spherical_hilbert(
            pick_body(&bodies, past)?,
            pick_body(&bodies, future)?,
        )?,
        RawContext::ProjectiveDesitter { body } => {
            TimelikeContext::projective_desitter(pick_body(&bodies, body)?)?
        }
    };
    let mut points = BTreeMap::new();
    for (name, coords) in &raw.points {
        points.insert(name.clone(), scene_point(chart, coords)?);
    }
    let mut curves = BTreeMap::new();
    for (name, curve) in &raw.curves {
        let built = match curve {
            RawCurve::Polyline { points } => {
                let mut pts = Vec::with_capacity(points.len());
                for coords in points {
                    pts.push(scene_point(chart, coords)?);
                }
                polyline(chart, &pts)?
            }
            RawCurve::Geodesic { from, to } => {
                let a = scene_point(chart, from)?;
                let b = scene_point(chart, to)?;
                geodesic_between(chart, &a, &b)?
            }
        };
        curves.insert(name.clone(), built);
    }
    Ok(Scene {
        chart,
        context,
        bodies,
        points,
        curves,
    })
}
