//! Timelike curves and their Finsler length.
//!
//! A curve is a parametrized path with an explicit derivative. Its length
//! integrates the context's directional functional along the tangent, which
//! makes geodesics length maximizers: any timelike detour between the same
//! endpoints comes out shorter. The integrator is adaptive Simpson with a
//! Richardson correction on a fixed initial partition.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::chart::{minkowski_dot, Chart, ChartKind, Point, Vector};
use crate::error::{Error, Result};
use crate::funk::{funk_distance, funk_functional, FinslerValue};
use crate::hilbert::{hilbert_distance, hilbert_functional};
use crate::order::TimelikeContext;
use crate::ray::GeodesicRay;
use crate::tol;

/// Parametrized curve on a chart: maps `t` in `[0, 1]` to a point and the
/// derivative of the parametrization at that point.
#[derive(Clone)]
pub struct TimelikeCurve {
    chart: Chart,
    evaluator: Arc<dyn Fn(f64) -> (Point, Vector) + Send + Sync>,
    samples_hint: usize,
}

impl fmt::Debug for TimelikeCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimelikeCurve")
            .field("chart", &self.chart)
            .field("samples_hint", &self.samples_hint)
            .finish_non_exhaustive()
    }
}

/// Result of sampling a curve's tangents against the order cone.
#[derive(Clone, Copy, Debug)]
pub struct TimelikeCheck {
    /// Whether every sampled tangent was timelike (zero tangents are
    /// skipped).
    pub timelike: bool,
    /// Parameter of the first failing sample, if any.
    pub first_failure: Option<f64>,
}

/// Aggregate of a maximality comparison: perturbed connecting curves against
/// the metric distance of the endpoints.
#[derive(Clone, Debug)]
pub struct MaximalityReport {
    /// Metric distance between the endpoints, the value to beat.
    pub reference: f64,
    /// Number of perturbed curves generated.
    pub attempted: usize,
    /// Curves that stayed timelike and produced a length.
    pub accepted: usize,
    /// Curves discarded because some tangent left the cone.
    pub rejected: usize,
    /// Largest accepted length.
    pub max_length: Option<f64>,
    /// Whether any accepted length exceeded the reference beyond the
    /// allowed slack.
    pub exceeded: bool,
}

impl TimelikeCurve {
    /// Wraps an evaluator as a curve. The evaluator must return on-chart
    /// points and matching derivatives for `t` in `[0, 1]`.
    pub fn new(
        chart: Chart,
        evaluator: Arc<dyn Fn(f64) -> (Point, Vector) + Send + Sync>,
    ) -> Self {
        TimelikeCurve {
            chart,
            evaluator,
            samples_hint: 2048,
        }
    }

    /// Sets how densely validation passes sample the curve.
    pub fn with_samples_hint(mut self, samples_hint: usize) -> Self {
        self.samples_hint = samples_hint.max(2);
        self
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn samples_hint(&self) -> usize {
        self.samples_hint
    }

    /// Point and derivative at parameter `t`.
    pub fn evaluate(&self, t: f64) -> (Point, Vector) {
        (self.evaluator)(t)
    }
}

/// The geodesic from `p` to `q`, parametrized on `[0, 1]` at constant speed.
pub fn geodesic_between(chart: Chart, p: &Point, q: &Point) -> Result<TimelikeCurve> {
    let (ray, d) = GeodesicRay::through(chart, p, q)?;
    let evaluator = move |t: f64| {
        let point = ray.point_at(t * d);
        let velocity = ray.tangent_at(t * d) * d;
        (point, velocity)
    };
    Ok(TimelikeCurve::new(chart, Arc::new(evaluator)))
}

/// The piecewise geodesic through the given points, parametrized on
/// `[0, 1]` with equal parameter share per segment. At segment junctions the
/// derivative of the incoming segment on the left and the outgoing one on
/// the right differ, which is fine for length integration.
pub fn polyline(chart: Chart, points: &[Point]) -> Result<TimelikeCurve> {
    if points.len() < 2 {
        return Err(Error::OutOfDomain {
            what: "polyline needs at least two points",
        });
    }
    let mut segments = Vec::with_capacity(points.len() - 1);
    for pair in points.windows(2) {
        segments.push(GeodesicRay::through(chart, &pair[0], &pair[1])?);
    }
    let n = segments.len() as f64;
    let evaluator = move |t: f64| {
        let scaled = (t.clamp(0.0, 1.0) * n).min(n - 1e-12).max(0.0);
        let index = scaled.floor() as usize;
        let local = scaled - index as f64;
        let (ray, d) = &segments[index];
        let point = ray.point_at(local * d);
        let velocity = ray.tangent_at(local * d) * (d * n);
        (point, velocity)
    };
    Ok(TimelikeCurve::new(chart, Arc::new(evaluator)))
}

/// The geodesic from `p` to `q` displaced sideways by a smooth bump that
/// vanishes at both endpoints: `scale` times the normalized superposition of
/// the modes `sin(j pi t)` weighted by `shape`. Curved charts displace in
/// the ambient space and rescale back onto the chart, with exact
/// derivatives.
pub fn perturbed_geodesic(
    chart: Chart,
    p: &Point,
    q: &Point,
    scale: f64,
    shape: &[f64],
) -> Result<TimelikeCurve> {
    if !scale.is_finite() || shape.is_empty() || shape.iter().any(|a| !a.is_finite()) {
        return Err(Error::OutOfDomain {
            what: "perturbation scale and shape must be finite and nonempty",
        });
    }
    let weight: f64 = shape.iter().map(|a| a.abs()).sum();
    if weight <= f64::MIN_POSITIVE {
        return Err(Error::OutOfDomain {
            what: "perturbation shape must have a nonzero coefficient",
        });
    }
    chart.check_point(p)?;
    chart.check_point(q)?;
    let coefficients: Vec<f64> = shape.iter().map(|a| scale * a / weight).collect();
    let side = sideways_direction(chart, p, q)?;
    let p = p.clone();
    let q = q.clone();
    let bump = move |t: f64| {
        let mut value = 0.0;
        let mut slope = 0.0;
        for (j, a) in coefficients.iter().enumerate() {
            let omega = (j as f64 + 1.0) * std::f64::consts::PI;
            value += a * (omega * t).sin();
            slope += a * omega * (omega * t).cos();
        }
        (value, slope)
    };
    let evaluator = move |t: f64| {
        let (b, db) = bump(t);
        let chord = &q - &p;
        let y = &p + &chord * t + &side * b;
        let dy = chord + &side * db;
        match chart.kind() {
            ChartKind::Euclidean => (y, dy),
            ChartKind::Spherical => {
                let s = y.norm();
                let radial = y.dot(&dy);
                let sigma = &y / s;
                let dsigma = &dy / s - &y * (radial / (s * s * s));
                (sigma, dsigma)
            }
            ChartKind::Hyperbolic => {
                let s = (-minkowski_dot(&y, &y)).sqrt();
                let radial = minkowski_dot(&y, &dy);
                let sigma = &y / s;
                let dsigma = &dy / s + &y * (radial / (s * s * s));
                (sigma, dsigma)
            }
        }
    };
    Ok(TimelikeCurve::new(chart, Arc::new(evaluator)))
}

/// An ambient unit vector suitable as a sideways displacement direction:
/// orthogonal to the chord for flat charts, orthogonal to the plane of the
/// two points for curved ones.
fn sideways_direction(chart: Chart, p: &Point, q: &Point) -> Result<Vector> {
    let mut anchors: Vec<Vector> = Vec::new();
    match chart.kind() {
        ChartKind::Euclidean => anchors.push(q - p),
        _ => {
            anchors.push(p.clone());
            anchors.push(q.clone());
        }
    }
    for a in &mut anchors {
        let n = a.norm();
        if n > f64::MIN_POSITIVE {
            *a /= n;
        }
    }
    // Orthonormalize the anchors so the projections below are exact.
    if anchors.len() == 2 {
        let overlap = anchors[0].dot(&anchors[1]);
        let second = &anchors[1] - &anchors[0] * overlap;
        let n = second.norm();
        if n > 1e-12 {
            anchors[1] = second / n;
        } else {
            anchors.pop();
        }
    }
    let len = p.len();
    for i in 0..len {
        let mut w = Vector::zeros(len);
        w[i] = 1.0;
        for a in &anchors {
            let overlap = a.dot(&w);
            w -= a * overlap;
        }
        let n = w.norm();
        if n > 1e-6 {
            return Ok(w / n);
        }
    }
    Err(Error::OutOfDomain {
        what: "no sideways direction: the chart has no room orthogonal to the chord",
    })
}

/// The context's directional functional, one or two sided as appropriate.
pub fn directional_functional(
    ctx: &TimelikeContext,
    p: &Point,
    v: &Vector,
) -> Result<FinslerValue> {
    if ctx.past_body().is_some() {
        hilbert_functional(ctx, p, v)
    } else {
        funk_functional(ctx, p, v)
    }
}

fn cone_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NotTimelikeDirection | Error::PointNotExterior { .. } | Error::NoBoundaryHit
    )
}

/// Samples the curve's tangents at `samples` evenly spaced parameters and
/// checks each against the context's cone. Zero tangents are skipped.
pub fn is_timelike(
    ctx: &TimelikeContext,
    curve: &TimelikeCurve,
    samples: usize,
) -> Result<TimelikeCheck> {
    if ctx.chart() != curve.chart() {
        return Err(Error::ChartMismatch);
    }
    let n = samples.max(2);
    for k in 0..n {
        let t = k as f64 / (n - 1) as f64;
        let (point, velocity) = curve.evaluate(t);
        if ctx.chart().tangent_norm(&velocity) == 0.0 {
            continue;
        }
        match directional_functional(ctx, &point, &velocity) {
            Ok(_) => {}
            Err(e) if cone_failure(&e) => {
                return Ok(TimelikeCheck {
                    timelike: false,
                    first_failure: Some(t),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(TimelikeCheck {
        timelike: true,
        first_failure: None,
    })
}

/// Length of the curve: the integral of the directional functional along
/// the tangent. The curve is first validated at `samples_hint` parameters;
/// a tangent leaving the cone there or during refinement fails with
/// `NotTimelikeCurve` at the offending parameter.
pub fn curve_length(ctx: &TimelikeContext, curve: &TimelikeCurve) -> Result<f64> {
    if ctx.chart() != curve.chart() {
        return Err(Error::ChartMismatch);
    }
    let mut integrand = |t: f64| -> Result<f64> {
        let (point, velocity) = curve.evaluate(t);
        match directional_functional(ctx, &point, &velocity) {
            Ok(value) => Ok(value.value),
            Err(e) if cone_failure(&e) => Err(Error::NotTimelikeCurve { parameter: t }),
            Err(e) => Err(e),
        }
    };
    let n = curve.samples_hint();
    for k in 0..=n {
        let t = k as f64 / n as f64;
        integrand(t)?;
    }
    // Fixed initial partition so segment junctions of moderate polylines do
    // not hide inside a single panel, then adaptive refinement per panel.
    let panels = 64;
    let panel_tolerance = tol::QUADRATURE / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = k as f64 / panels as f64;
        let b = (k + 1) as f64 / panels as f64;
        let fa = integrand(a)?;
        let fm = integrand(0.5 * (a + b))?;
        let fb = integrand(b)?;
        let whole = simpson(a, b, fa, fm, fb);
        total += refine(&mut integrand, a, b, fa, fm, fb, whole, panel_tolerance, 32)?;
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &mut impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tolerance: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let split = left + right;
    let difference = split - whole;
    if depth == 0 || difference.abs() <= 15.0 * tolerance {
        return Ok(split + difference / 15.0);
    }
    let half = 0.5 * tolerance;
    Ok(refine(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}

/// Generates `attempts` randomly perturbed curves between `p` and `q`,
/// measures the ones that stay timelike, and compares their lengths against
/// the metric distance of the endpoints.
pub fn maximality_check<R: Rng + ?Sized>(
    ctx: &TimelikeContext,
    p: &Point,
    q: &Point,
    attempts: usize,
    rng: &mut R,
) -> Result<MaximalityReport> {
    let chart = ctx.chart();
    let reference = if ctx.past_body().is_some() {
        hilbert_distance(ctx, p, q)?.distance
    } else {
        funk_distance(ctx, p, q)?.distance
    };
    let d = chart.distance(p, q);
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut max_length = f64::NEG_INFINITY;
    for _ in 0..attempts {
        let modes = rng.random_range(1..=3);
        let shape: Vec<f64> = (0..modes).map(|_| rng.random_range(-1.0..1.0)).collect();
        if shape.iter().map(|a| a.abs()).sum::<f64>() <= 1e-3 {
            rejected += 1;
            continue;
        }
        let scale = d * rng.random_range(0.005..0.08);
        let curve = perturbed_geodesic(chart, p, q, scale, &shape)?.with_samples_hint(512);
        match curve_length(ctx, &curve) {
            Ok(length) => {
                accepted += 1;
                max_length = max_length.max(length);
            }
            Err(Error::NotTimelikeCurve { .. }) => rejected += 1,
            Err(e) => return Err(e),
        }
    }
    let max_length = if accepted > 0 { Some(max_length) } else { None };
    let exceeded = match max_length {
        Some(value) => value > reference + tol::MAXIMALITY_SLACK,
        None => false,
    };
    Ok(MaximalityReport {
        reference,
        attempted: attempts,
        accepted,
        rejected,
        max_length,
        exceeded,
    })
}
