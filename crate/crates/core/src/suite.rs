//! Randomized self-check battery over the metric, order, and projection
//! layers.
//!
//! Every property draws its cases from a counter-mode generator seeded with
//! the configured seed and a per-property stream index, so reports are
//! reproducible, independent of which property subset runs, and stable
//! byte-for-byte when formatted.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::ConvexBody;
use crate::chart::{Chart, ChartKind, Point, Vector};
use crate::cross_ratio::chord_cross_ratio;
use crate::desitter::{
    desitter_distance, null_directions, projective_hilbert_distance, sphere_to_desitter,
};
use crate::desitter::{desitter_to_sphere, gnomonic_project};
use crate::error::{Error, Result};
use crate::funk::{
    funk_distance, funk_distance_variational, funk_functional, funk_functional_variational,
    funk_monotonicity_check, future_sphere_sample,
};
use crate::hilbert::{hilbert_distance, hilbert_distance_cross_ratio, hilbert_functional};
use crate::hyperplane::Hyperplane;
use crate::length::{curve_length, geodesic_between};
use crate::order::{PairClass, TimelikeContext};
use crate::ray::GeodesicRay;

/// Which property group to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Funk,
    Hilbert,
    Spherical,
    Hyperbolic,
    Desitter,
    All,
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "funk" => SuiteKind::Funk,
            "hilbert" => SuiteKind::Hilbert,
            "spherical" => SuiteKind::Spherical,
            "hyperbolic" => SuiteKind::Hyperbolic,
            "desitter" => SuiteKind::Desitter,
            "all" => SuiteKind::All,
            _ => {
                return Err(Error::SceneInvalid {
                    message: format!(
                        "unknown suite '{s}' (expected funk, hilbert, spherical, \
                         hyperbolic, desitter, or all)"
                    ),
                })
            }
        })
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteKind::Funk => "funk",
            SuiteKind::Hilbert => "hilbert",
            SuiteKind::Spherical => "spherical",
            SuiteKind::Hyperbolic => "hyperbolic",
            SuiteKind::Desitter => "desitter",
            SuiteKind::All => "all",
        })
    }
}

/// Suite parameters. `tol` replaces the per-property default threshold for
/// every property that has a nonzero one; exact properties keep zero.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub tol: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            cases: 250,
            tol: None,
        }
    }
}

/// Outcome of one property.
#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
    pub note: String,
}

/// Outcome of a suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub kind: SuiteKind,
    pub seed: u64,
    pub requested_cases: usize,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

/// Raw numbers a property hands back before thresholds are applied.
struct Outcome {
    cases: usize,
    violations: usize,
    max_deviation: f64,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            cases: 0,
            violations: 0,
            max_deviation: 0.0,
            note: String::new(),
        }
    }

    /// Records one measured deviation against a threshold.
    fn record(&mut self, deviation: f64, threshold: f64) {
        self.cases += 1;
        if !(deviation <= threshold) {
            self.violations += 1;
        }
        if deviation > self.max_deviation || deviation.is_nan() {
            self.max_deviation = deviation;
        }
    }

    /// Records a case that must simply hold.
    fn record_flag(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            self.max_deviation = 1.0;
        }
    }

    fn exhausted(&mut self, what: &str) {
        self.violations += 1;
        self.note = format!("generator exhausted while building {what}");
    }
}

type PropertyFn = fn(&mut ChaCha8Rng, &SuiteConfig, f64) -> Outcome;

struct Property {
    name: &'static str,
    group: SuiteKind,
    default_threshold: f64,
    run: PropertyFn,
}

/// Ratio of |a - b| to |a|, with a floor that keeps tiny values meaningful.
fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1e-30)
}

/// Attempt budget for point constructions within one fixed instance. Kept
/// small so a degenerate instance is abandoned quickly.
const GENERATION_ATTEMPTS: usize = 60;

/// Attempt budget for drawing fresh instances when the current one cannot
/// produce the requested configuration (for example a polytope that swallows
/// the whole sampling region and leaves no exterior points).
const INSTANCE_DRAWS: usize = 400;

// ---------------------------------------------------------------------------
// Randomness helpers
// ---------------------------------------------------------------------------

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random::<f64>().max(1e-300);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    loop {
        let v = Vector::from_fn(n, |_, _| gauss(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Uniform point in the radius-`r` Euclidean ball.
fn random_in_ball(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vector {
    let dir = random_unit(rng, n);
    let u: f64 = rng.random();
    dir * (r * u.powf(1.0 / n as f64))
}

/// Haar-ish random rotation from the QR factorization of a Gaussian matrix.
fn random_rotation(rng: &mut ChaCha8Rng, n: usize) -> nalgebra::DMatrix<f64> {
    let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| gauss(rng));
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..n {
        if r[(i, i)] < 0.0 {
            for k in 0..n {
                q[(k, i)] = -q[(k, i)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for k in 0..n {
            q[(k, n - 1)] = -q[(k, n - 1)];
        }
    }
    q
}

// ---------------------------------------------------------------------------
// Flat and hyperbolic instance generators
// ---------------------------------------------------------------------------

/// A one-sided test instance: a polytope future body, the ball it was grown
/// around (used for aiming rays at the interior), and its context.
struct Instance {
    ctx: TimelikeContext,
    aim: Point,
    aim_radius: f64,
}

fn flat_polytope(rng: &mut ChaCha8Rng, dim: usize) -> (ConvexBody, Point, f64) {
    let chart = Chart::new(ChartKind::Euclidean, dim).unwrap();
    loop {
        let center = random_unit(rng, dim) * rng.random_range(2.5..3.5);
        let rho = rng.random_range(0.6..1.0);
        let faces_wanted = rng.random_range(dim + 1..=dim + 4);
        let mut faces = Vec::with_capacity(faces_wanted);
        for _ in 0..faces_wanted {
            let u = random_unit(rng, dim);
            let offset = u.dot(&center) + rho;
            match Hyperplane::new(chart, u, offset) {
                Ok(f) => faces.push(f),
                Err(_) => continue,
            }
        }
        if let Ok(body) = ConvexBody::polytope(chart, faces, Some(center.clone())) {
            return (body, center, rho);
        }
    }
}

fn flat_instance(rng: &mut ChaCha8Rng, dim: usize) -> Instance {
    loop {
        let (body, aim, aim_radius) = flat_polytope(rng, dim);
        if let Ok(ctx) = TimelikeContext::funk(body) {
            return Instance {
                ctx,
                aim,
                aim_radius,
            };
        }
    }
}

fn random_hyperbolic_point(rng: &mut ChaCha8Rng, dim: usize, max_boost: f64) -> Point {
    let tau = rng.random_range(0.0..max_boost);
    let u = random_unit(rng, dim);
    let mut x = Point::zeros(dim + 1);
    x[0] = tau.cosh();
    for i in 0..dim {
        x[i + 1] = tau.sinh() * u[i];
    }
    x
}

fn hyperbolic_instance(rng: &mut ChaCha8Rng, dim: usize) -> Instance {
    let chart = Chart::new(ChartKind::Hyperbolic, dim).unwrap();
    'outer: loop {
        let tau: f64 = rng.random_range(1.2..1.8);
        let u = random_unit(rng, dim);
        let mut witness = Point::zeros(dim + 1);
        witness[0] = tau.cosh();
        for i in 0..dim {
            witness[i + 1] = tau.sinh() * u[i];
        }
        let faces_wanted = rng.random_range(dim + 1..=dim + 3);
        let mut faces = Vec::with_capacity(faces_wanted);
        let mut tries = 0;
        while faces.len() < faces_wanted {
            tries += 1;
            if tries > 200 {
                continue 'outer;
            }
            let v = Vector::from_fn(dim + 1, |_, _| gauss(rng));
            let m = chart.form_dot(&v, &v);
            if m < 0.05 {
                continue;
            }
            let mut w = v / m.sqrt();
            if chart.form_dot(&w, &witness) > 0.0 {
                w = -w;
            }
            if chart.form_dot(&w, &witness) > -0.08 {
                continue;
            }
            if let Ok(face) = Hyperplane::new(chart, w, 0.0) {
                faces.push(face);
            }
        }
        let body = match ConvexBody::polytope(chart, faces, Some(witness.clone())) {
            Ok(b) => b,
            Err(_) => continue,
        };
        if let Ok(ctx) = TimelikeContext::funk(body) {
            return Instance {
                ctx,
                aim: witness,
                aim_radius: 0.08,
            };
        }
    }
}

fn instance_for(rng: &mut ChaCha8Rng, kind: ChartKind, dim: usize) -> Instance {
    match kind {
        ChartKind::Euclidean => flat_instance(rng, dim),
        ChartKind::Hyperbolic => hyperbolic_instance(rng, dim),
        ChartKind::Spherical => unreachable!("one-sided instances are flat or hyperbolic"),
    }
}

/// Draws fresh instances until `make` yields a configuration for one of
/// them, so a single degenerate body cannot stall a property.
fn with_instance<T>(
    rng: &mut ChaCha8Rng,
    kind: ChartKind,
    make: impl Fn(&mut ChaCha8Rng, &Instance) -> Option<T>,
) -> Option<(Instance, T)> {
    for _ in 0..INSTANCE_DRAWS {
        let dim = mixed_dim(rng);
        let inst = instance_for(rng, kind, dim);
        if let Some(value) = make(rng, &inst) {
            return Some((inst, value));
        }
    }
    None
}

/// Random exterior point of the instance body, with a solid margin.
fn exterior_point(rng: &mut ChaCha8Rng, inst: &Instance) -> Option<Point> {
    let chart = inst.ctx.chart();
    for _ in 0..GENERATION_ATTEMPTS {
        let p = match chart.kind() {
            ChartKind::Euclidean => random_in_ball(rng, chart.dim(), 1.2),
            ChartKind::Hyperbolic => random_hyperbolic_point(rng, chart.dim(), 0.9),
            ChartKind::Spherical => unreachable!(),
        };
        if let Ok(s) = inst.ctx.future_body().signed_distance(&p) {
            if s >= 0.05 {
                return Some(p);
            }
        }
    }
    None
}

/// Interior aiming target near the instance's seed ball.
fn interior_target(rng: &mut ChaCha8Rng, inst: &Instance) -> Option<Point> {
    let chart = inst.ctx.chart();
    for _ in 0..GENERATION_ATTEMPTS {
        let k = match chart.kind() {
            ChartKind::Euclidean => {
                &inst.aim + random_in_ball(rng, chart.dim(), 0.5 * inst.aim_radius)
            }
            ChartKind::Hyperbolic => {
                let dir = chart.project_tangent(&inst.aim, &random_unit(rng, chart.dim() + 1));
                let norm = chart.tangent_norm(&dir);
                if norm < 1e-6 {
                    continue;
                }
                let ray = match GeodesicRay::new(chart, inst.aim.clone(), dir / norm) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                ray.point_at(rng.random_range(0.0..inst.aim_radius))
            }
            ChartKind::Spherical => unreachable!(),
        };
        if let Ok(s) = inst.ctx.future_body().signed_distance(&k) {
            if s <= -0.02 {
                return Some(k);
            }
        }
    }
    None
}

/// An ordered pair for the instance: exterior base aimed at the interior,
/// second point placed strictly inside the entry parameter.
fn ordered_pair(rng: &mut ChaCha8Rng, inst: &Instance) -> Option<(Point, Point)> {
    for _ in 0..GENERATION_ATTEMPTS {
        let p = exterior_point(rng, inst)?;
        let k = interior_target(rng, inst)?;
        let ray = match GeodesicRay::through(inst.ctx.chart(), &p, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        let hit = match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.15 => hit,
            _ => continue,
        };
        let s = rng.random_range(0.1..0.85) * (hit.t - 0.05);
        if s < 0.02 {
            continue;
        }
        let q = ray.point_at(s);
        if !inst.ctx.funk_precedes(&p, &q).unwrap_or(false) {
            continue;
        }
        return Some((p, q));
    }
    None
}

/// A second ordered step on the same ray as the first, giving a collinear
/// ordered triple.
fn collinear_triple(rng: &mut ChaCha8Rng, inst: &Instance) -> Option<(Point, Point, Point)> {
    for _ in 0..GENERATION_ATTEMPTS {
        let p = exterior_point(rng, inst)?;
        let k = interior_target(rng, inst)?;
        let ray = match GeodesicRay::through(inst.ctx.chart(), &p, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        let hit = match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.2 => hit,
            _ => continue,
        };
        let reach = hit.t - 0.05;
        let s1 = rng.random_range(0.05..0.5) * reach;
        let s2 = rng.random_range(0.55..0.95) * reach;
        if s1 < 0.02 || s2 - s1 < 0.02 {
            continue;
        }
        let m = ray.point_at(s1);
        let q = ray.point_at(s2);
        if !inst.ctx.funk_precedes(&p, &m).unwrap_or(false)
            || !inst.ctx.funk_precedes(&m, &q).unwrap_or(false)
        {
            continue;
        }
        return Some((p, m, q));
    }
    None
}

/// A chain of two ordered steps in general position.
fn ordered_chain(rng: &mut ChaCha8Rng, inst: &Instance) -> Option<(Point, Point, Point)> {
    for _ in 0..GENERATION_ATTEMPTS {
        let (p, q) = ordered_pair(rng, inst)?;
        let k = interior_target(rng, inst)?;
        let ray = match GeodesicRay::through(inst.ctx.chart(), &q, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        let hit = match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.1 => hit,
            _ => continue,
        };
        let s = rng.random_range(0.1..0.85) * (hit.t - 0.04);
        if s < 0.02 {
            continue;
        }
        let r = ray.point_at(s);
        if !inst.ctx.funk_precedes(&q, &r).unwrap_or(false) {
            continue;
        }
        return Some((p, q, r));
    }
    None
}

/// A timelike tangent vector at an exterior point, with random speed.
fn timelike_vector(rng: &mut ChaCha8Rng, inst: &Instance) -> Option<(Point, Vector)> {
    for _ in 0..GENERATION_ATTEMPTS {
        let p = exterior_point(rng, inst)?;
        let k = interior_target(rng, inst)?;
        let ray = match GeodesicRay::through(inst.ctx.chart(), &p, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.1 => {}
            _ => continue,
        }
        let speed = rng.random_range(0.3..3.0);
        return Some((p, ray.dir() * speed));
    }
    None
}

// ---------------------------------------------------------------------------
// One-sided properties (flat and hyperbolic)
// ---------------------------------------------------------------------------

fn mixed_dim(rng: &mut ChaCha8Rng) -> usize {
    if rng.random::<f64>() < 0.5 {
        2
    } else {
        3
    }
}

fn dual_form_property(kind: ChartKind) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig, f64) -> Outcome {
    move |rng, config, threshold| {
        let mut out = Outcome::new();
        for _ in 0..config.cases {
            let Some((inst, (p, q))) = with_instance(rng, kind, ordered_pair) else {
                out.exhausted("an ordered pair");
                return out;
            };
            let hit_form = funk_distance(&inst.ctx, &p, &q);
            let variational = funk_distance_variational(&inst.ctx, &p, &q);
            match (hit_form, variational) {
                (Ok(a), Ok(b)) => out.record(relative_gap(a.distance, b.distance), threshold),
                _ => out.record_flag(false),
            }
        }
        out
    }
}

fn funk_dual_form_agreement(rng: &mut ChaCha8Rng, config: &SuiteConfig, threshold: f64) -> Outcome {
    dual_form_property(ChartKind::Euclidean)(rng, config, threshold)
}

fn hyperbolic_dual_form_agreement(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    dual_form_property(ChartKind::Hyperbolic)(rng, config, threshold)
}

fn reverse_triangle_property(
    kind: ChartKind,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig, f64) -> Outcome {
    move |rng, config, threshold| {
        let mut out = Outcome::new();
        for _ in 0..config.cases {
            let Some((inst, (p, q, r))) = with_instance(rng, kind, ordered_chain) else {
                out.exhausted("an ordered chain");
                return out;
            };
            let legs = funk_distance(&inst.ctx, &p, &q)
                .and_then(|a| funk_distance(&inst.ctx, &q, &r).map(|b| a.distance + b.distance));
            let whole = funk_distance(&inst.ctx, &p, &r);
            match (legs, whole) {
                // The chord is the longest route: leg sums never exceed the
                // direct distance.
                (Ok(sum), Ok(direct)) => out.record(sum - direct.distance, threshold),
                _ => out.record_flag(false),
            }
        }
        out
    }
}

fn funk_reverse_triangle(rng: &mut ChaCha8Rng, config: &SuiteConfig, threshold: f64) -> Outcome {
    reverse_triangle_property(ChartKind::Euclidean)(rng, config, threshold)
}

fn hyperbolic_reverse_triangle(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    reverse_triangle_property(ChartKind::Hyperbolic)(rng, config, threshold)
}

fn funk_collinear_additivity(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    for case in 0..config.cases {
        let kind = if case % 2 == 0 {
            ChartKind::Euclidean
        } else {
            ChartKind::Hyperbolic
        };
        let Some((inst, (p, m, q))) = with_instance(rng, kind, collinear_triple) else {
            out.exhausted("a collinear triple");
            return out;
        };
        let legs = funk_distance(&inst.ctx, &p, &m)
            .and_then(|a| funk_distance(&inst.ctx, &m, &q).map(|b| a.distance + b.distance));
        let whole = funk_distance(&inst.ctx, &p, &q);
        match (legs, whole) {
            (Ok(sum), Ok(direct)) => out.record((sum - direct.distance).abs(), threshold),
            _ => out.record_flag(false),
        }
    }
    out
}

fn funk_order_equivalence(rng: &mut ChaCha8Rng, config: &SuiteConfig, _threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    for case in 0..config.cases {
        let kind = if case % 2 == 0 {
            ChartKind::Euclidean
        } else {
            ChartKind::Hyperbolic
        };
        // Half the pairs are ordered by construction, half are arbitrary
        // exterior pairs, so both answers of the predicates get exercised.
        let want_ordered = rng.random::<f64>() < 0.5;
        let Some((inst, (p, q))) = with_instance(rng, kind, |rng, inst| {
            if want_ordered {
                ordered_pair(rng, inst)
            } else {
                Some((exterior_point(rng, inst)?, exterior_point(rng, inst)?))
            }
        }) else {
            out.exhausted("an exterior pair");
            return out;
        };
        let agree_forward = match (
            inst.ctx.funk_precedes(&p, &q),
            inst.ctx.inclusion_precedes(&p, &q),
        ) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        let agree_backward = match (
            inst.ctx.funk_precedes(&q, &p),
            inst.ctx.inclusion_precedes(&q, &p),
        ) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        out.record_flag(agree_forward && agree_backward);
    }
    out
}

fn funk_order_transitivity(rng: &mut ChaCha8Rng, config: &SuiteConfig, _threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    for case in 0..config.cases {
        let kind = if case % 2 == 0 {
            ChartKind::Euclidean
        } else {
            ChartKind::Hyperbolic
        };
        let Some((inst, (p, _q, r))) = with_instance(rng, kind, ordered_chain) else {
            out.exhausted("an ordered chain");
            return out;
        };
        out.record_flag(inst.ctx.funk_precedes(&p, &r).unwrap_or(false));
    }
    out
}

fn functional_agreement_property(
    kind: ChartKind,
) -> impl Fn(&mut ChaCha8Rng, &SuiteConfig, f64) -> Outcome {
    move |rng, config, threshold| {
        let mut out = Outcome::new();
        for _ in 0..config.cases {
            let Some((inst, (p, v))) = with_instance(rng, kind, timelike_vector) else {
                out.exhausted("a timelike vector");
                return out;
            };
            let hit_form = funk_functional(&inst.ctx, &p, &v);
            let variational = funk_functional_variational(&inst.ctx, &p, &v);
            match (hit_form, variational) {
                (Ok(a), Ok(b)) => out.record(relative_gap(a.value, b.value), threshold),
                _ => out.record_flag(false),
            }
        }
        out
    }
}

fn funk_functional_agreement(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    functional_agreement_property(ChartKind::Euclidean)(rng, config, threshold)
}

fn hyperbolic_functional_agreement(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    functional_agreement_property(ChartKind::Hyperbolic)(rng, config, threshold)
}

fn funk_dilation_radius(rng: &mut ChaCha8Rng, config: &SuiteConfig, threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    let fixed = [0.1, 2.0f64.ln(), 3.0];
    for case in 0..config.cases {
        let Some((inst, p)) = with_instance(rng, ChartKind::Euclidean, exterior_point) else {
            out.exhausted("an exterior base point");
            return out;
        };
        let r = if case % 4 < 3 {
            fixed[case % 4]
        } else {
            rng.random_range(0.05..3.0)
        };
        match future_sphere_sample(&inst.ctx, &p, r, 4, rng) {
            Ok(samples) => {
                for q in samples {
                    match funk_distance(&inst.ctx, &p, &q) {
                        Ok(value) => out.record((value.distance - r).abs(), threshold),
                        Err(_) => out.record_flag(false),
                    }
                }
            }
            Err(_) => out.record_flag(false),
        }
    }
    out
}

fn funk_monotonicity(rng: &mut ChaCha8Rng, config: &SuiteConfig, threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    'cases: for _ in 0..config.cases {
        for _ in 0..INSTANCE_DRAWS {
            let dim = mixed_dim(rng);
            let (inner_body, aim, aim_radius) = flat_polytope(rng, dim);
            let chart = inner_body.chart();
            let Some(faces) = inner_body.faces() else {
                continue;
            };
            // Relaxing every face offset enlarges the body while keeping
            // the witness valid.
            let mut relaxed = Vec::with_capacity(faces.len());
            for face in faces {
                match Hyperplane::new(
                    chart,
                    face.normal().clone(),
                    face.offset() + rng.random_range(0.1..0.5),
                ) {
                    Ok(f) => relaxed.push(f),
                    Err(_) => break,
                }
            }
            if relaxed.len() < faces.len() {
                continue;
            }
            let Ok(outer_body) = ConvexBody::polytope(chart, relaxed, Some(aim.clone())) else {
                continue;
            };
            let (Ok(inner_ctx), Ok(outer_ctx)) = (
                TimelikeContext::funk(inner_body),
                TimelikeContext::funk(outer_body),
            ) else {
                continue;
            };
            // Pairs are placed against the enlarged body, whose entry comes
            // first along the chord, so both contexts order them.
            let outer_inst = Instance {
                ctx: outer_ctx,
                aim,
                aim_radius,
            };
            let Some((p, q)) = ordered_pair(rng, &outer_inst) else {
                continue;
            };
            match funk_monotonicity_check(&inner_ctx, &outer_inst.ctx, &p, &q, rng) {
                Ok((small, large)) => out.record(small - large, threshold),
                Err(_) => out.record_flag(false),
            }
            continue 'cases;
        }
        out.exhausted("a nested body pair");
        return out;
    }
    out
}

fn funk_first_argument_concavity(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    for _ in 0..config.cases {
        let segment = with_instance(rng, ChartKind::Euclidean, |rng, inst| {
            let q = exterior_point(rng, inst)?;
            // Segment endpoints in the backward cone of q: every point of
            // the form q - s (k - q) with k interior sees q in its future,
            // and the cone is convex, so the whole segment stays ordered.
            let k0 = interior_target(rng, inst)?;
            let k1 = interior_target(rng, inst)?;
            let s0 = rng.random_range(0.2..1.2);
            let s1 = rng.random_range(0.2..1.2);
            let p0 = &q - (&k0 - &q) * s0;
            let p1 = &q - (&k1 - &q) * s1;
            let mut values = Vec::with_capacity(11);
            for j in 0..=10 {
                let t = j as f64 / 10.0;
                let p = &p0 * (1.0 - t) + &p1 * t;
                values.push(funk_distance(&inst.ctx, &p, &q).ok()?.distance);
            }
            let mut worst = f64::NEG_INFINITY;
            for j in 1..10 {
                worst = worst.max(values[j + 1] - 2.0 * values[j] + values[j - 1]);
            }
            Some(worst)
        });
        let Some((_, worst)) = segment else {
            out.exhausted("a concavity segment");
            return out;
        };
        out.record(worst, threshold);
    }
    out
}

fn funk_length_quadrature(rng: &mut ChaCha8Rng, config: &SuiteConfig, threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    let cases = config.cases.min(150);
    for case in 0..cases {
        let kind = if case % 2 == 0 {
            ChartKind::Euclidean
        } else {
            ChartKind::Hyperbolic
        };
        let Some((inst, (p, q))) = with_instance(rng, kind, ordered_pair) else {
            out.exhausted("an ordered pair");
            return out;
        };
        let length = geodesic_between(inst.ctx.chart(), &p, &q)
            .map(|c| c.with_samples_hint(64))
            .and_then(|curve| curve_length(&inst.ctx, &curve));
        let direct = funk_distance(&inst.ctx, &p, &q);
        match (length, direct) {
            (Ok(len), Ok(value)) => out.record(relative_gap(value.distance, len), threshold),
            _ => out.record_flag(false),
        }
    }
    out
}

fn funk_cone_order_census(rng: &mut ChaCha8Rng, config: &SuiteConfig, _threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    let mut ordered = 0usize;
    let mut cone_only = 0usize;
    let mut unrelated = 0usize;
    for _ in 0..config.cases {
        let want_ordered = rng.random::<f64>() < 0.6;
        let Some((inst, (p, q))) = with_instance(rng, ChartKind::Euclidean, |rng, inst| {
            if want_ordered {
                ordered_pair(rng, inst)
            } else {
                Some((exterior_point(rng, inst)?, exterior_point(rng, inst)?))
            }
        }) else {
            out.exhausted("an exterior pair");
            return out;
        };
        let in_cone = inst.ctx.funk_cone_contains(&p, &q).unwrap_or(false);
        let precedes = inst.ctx.funk_precedes(&p, &q).unwrap_or(false);
        // The order refines cone membership: an ordered pair always lies in
        // the cone.
        out.record_flag(!precedes || in_cone);
        if precedes {
            ordered += 1;
        } else if in_cone {
            cone_only += 1;
        } else {
            unrelated += 1;
        }
    }
    out.note = format!("ordered {ordered} / cone-only {cone_only} / unrelated {unrelated}");
    out
}

// ---------------------------------------------------------------------------
// Two-sided flat properties
// ---------------------------------------------------------------------------

/// A two-sided flat instance: disjoint past and future bodies on opposite
/// sides of the sampling region, mixing balls and polytopes.
struct TwoSided {
    ctx: TimelikeContext,
    future_aim: Point,
    future_radius: f64,
}

fn flat_two_sided(rng: &mut ChaCha8Rng, dim: usize) -> TwoSided {
    let chart = Chart::new(ChartKind::Euclidean, dim).unwrap();
    loop {
        let axis = random_unit(rng, dim);
        let future_center = &axis * rng.random_range(2.6..3.4);
        let past_center = -&axis * rng.random_range(2.6..3.4);
        let future_radius = rng.random_range(0.6..1.0);
        let past_radius = rng.random_range(0.6..1.0);
        let future = if rng.random::<f64>() < 0.5 {
            match ConvexBody::ball(chart, future_center.clone(), future_radius) {
                Ok(b) => b,
                Err(_) => continue,
            }
        } else {
            let (body, _, _) = flat_polytope_at(rng, chart, &future_center, future_radius);
            body
        };
        let past = if rng.random::<f64>() < 0.5 {
            match ConvexBody::ball(chart, past_center.clone(), past_radius) {
                Ok(b) => b,
                Err(_) => continue,
            }
        } else {
            let (body, _, _) = flat_polytope_at(rng, chart, &past_center, past_radius);
            body
        };
        if let Ok(ctx) = TimelikeContext::hilbert(past, future) {
            return TwoSided {
                ctx,
                future_aim: future_center,
                future_radius,
            };
        }
    }
}

fn flat_polytope_at(
    rng: &mut ChaCha8Rng,
    chart: Chart,
    center: &Point,
    rho: f64,
) -> (ConvexBody, Point, f64) {
    loop {
        let faces_wanted = rng.random_range(chart.dim() + 1..=chart.dim() + 4);
        let mut faces = Vec::with_capacity(faces_wanted);
        for _ in 0..faces_wanted {
            let u = random_unit(rng, chart.dim());
            let offset = u.dot(center) + rho;
            if let Ok(f) = Hyperplane::new(chart, u, offset) {
                faces.push(f);
            }
        }
        if let Ok(body) = ConvexBody::polytope(chart, faces, Some(center.clone())) {
            return (body, center.clone(), rho);
        }
    }
}

/// Draws fresh two-sided instances until `make` succeeds on one.
fn with_two_sided<T>(
    rng: &mut ChaCha8Rng,
    make: impl Fn(&mut ChaCha8Rng, &TwoSided) -> Option<T>,
) -> Option<(TwoSided, T)> {
    for _ in 0..INSTANCE_DRAWS {
        let dim = mixed_dim(rng);
        let inst = flat_two_sided(rng, dim);
        if let Some(value) = make(rng, &inst) {
            return Some((inst, value));
        }
    }
    None
}

/// An ordered pair for a two-sided instance: both chord extensions must
/// reach their bodies.
fn two_sided_pair(rng: &mut ChaCha8Rng, inst: &TwoSided) -> Option<(Point, Point)> {
    let chart = inst.ctx.chart();
    for _ in 0..GENERATION_ATTEMPTS {
        let p = random_in_ball(rng, chart.dim(), 1.2);
        match (
            inst.ctx.future_body().signed_distance(&p),
            inst.ctx.past_body().unwrap().signed_distance(&p),
        ) {
            (Ok(a), Ok(b)) if a >= 0.05 && b >= 0.05 => {}
            _ => continue,
        }
        let k = &inst.future_aim + random_in_ball(rng, chart.dim(), 0.5 * inst.future_radius);
        let ray = match GeodesicRay::through(chart, &p, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        let hit = match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.15 => hit,
            _ => continue,
        };
        let s = rng.random_range(0.1..0.85) * (hit.t - 0.05);
        if s < 0.02 {
            continue;
        }
        let q = ray.point_at(s);
        if !inst.ctx.hilbert_precedes(&p, &q).unwrap_or(false) {
            continue;
        }
        return Some((p, q));
    }
    None
}

fn hilbert_leg_cross_ratio_agreement(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    for _ in 0..config.cases {
        let Some((inst, (p, q))) = with_two_sided(rng, two_sided_pair) else {
            out.exhausted("a two-sided pair");
            return out;
        };
        let legs = hilbert_distance(&inst.ctx, &p, &q);
        let ratio = hilbert_distance_cross_ratio(&inst.ctx, &p, &q);
        match (legs, ratio) {
            (Ok(a), Ok(b)) => out.record(relative_gap(a.distance, b), threshold),
            _ => out.record_flag(false),
        }
    }
    out
}

/// Extends an ordered two-sided pair with a third point beyond the second,
/// keeping every hop and the whole span ordered.
fn two_sided_chain(rng: &mut ChaCha8Rng, inst: &TwoSided) -> Option<(Point, Point, Point)> {
    for _ in 0..GENERATION_ATTEMPTS {
        let (p, q) = two_sided_pair(rng, inst)?;
        let chart = inst.ctx.chart();
        let k = &inst.future_aim + random_in_ball(rng, chart.dim(), 0.5 * inst.future_radius);
        let ray = match GeodesicRay::through(chart, &q, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        let hit = match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.1 => hit,
            _ => continue,
        };
        let s = rng.random_range(0.1..0.8) * (hit.t - 0.04);
        if s < 0.02 {
            continue;
        }
        let r = ray.point_at(s);
        if !inst.ctx.hilbert_precedes(&q, &r).unwrap_or(false)
            || !inst.ctx.hilbert_precedes(&p, &r).unwrap_or(false)
        {
            continue;
        }
        return Some((p, q, r));
    }
    None
}

fn hilbert_reverse_triangle(rng: &mut ChaCha8Rng, config: &SuiteConfig, threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    for _ in 0..config.cases {
        let Some((inst, (p, q, r))) = with_two_sided(rng, two_sided_chain) else {
            out.exhausted("a two-sided chain");
            return out;
        };
        let legs = hilbert_distance(&inst.ctx, &p, &q)
            .and_then(|a| hilbert_distance(&inst.ctx, &q, &r).map(|b| a.distance + b.distance));
        let whole = hilbert_distance(&inst.ctx, &p, &r);
        match (legs, whole) {
            (Ok(sum), Ok(direct)) => out.record(sum - direct.distance, threshold),
            _ => out.record_flag(false),
        }
    }
    out
}

fn hilbert_functional_rate(rng: &mut ChaCha8Rng, config: &SuiteConfig, threshold: f64) -> Outcome {
    let mut out = Outcome::new();
    for _ in 0..config.cases {
        // First-order Richardson extrapolation of H(p, p + e v) / e against
        // the functional at p.
        let eps = 1e-4;
        let case = with_two_sided(rng, |rng, inst| {
            let (p, q) = two_sided_pair(rng, inst)?;
            let v = &q - &p;
            let functional = hilbert_functional(&inst.ctx, &p, &v).ok()?;
            let rate_at = |e: f64| -> Option<f64> {
                let target = &p + &v * e;
                hilbert_distance(&inst.ctx, &p, &target)
                    .ok()
                    .map(|h| h.distance / e)
            };
            let fine = rate_at(eps)?;
            let coarse = rate_at(2.0 * eps)?;
            Some(relative_gap(functional.value, 2.0 * fine - coarse))
        });
        let Some((_, deviation)) = case else {
            out.exhausted("a differentiable two-sided pair");
            return out;
        };
        out.record(deviation, threshold);
    }
    out
}

// ---------------------------------------------------------------------------
// Spherical properties
// ---------------------------------------------------------------------------

struct SphericalInstance {
    ctx: TimelikeContext,
    future_center: Point,
    future_radius: f64,
    past_center: Point,
    past_radius: f64,
}

fn spherical_instance(rng: &mut ChaCha8Rng) -> SphericalInstance {
    let chart = Chart::new(ChartKind::Spherical, 2).unwrap();
    loop {
        let axis = random_unit(rng, 3);
        let r_past = rng.random_range(0.3..0.6);
        let r_future = rng.random_range(0.3..0.6);
        let (past, future) = match (
            ConvexBody::ball(chart, -&axis, r_past),
            ConvexBody::ball(chart, axis.clone(), r_future),
        ) {
            (Ok(p), Ok(f)) => (p, f),
            _ => continue,
        };
        if let Ok(ctx) = TimelikeContext::spherical_hilbert(past, future) {
            return SphericalInstance {
                ctx,
                past_center: -&axis,
                past_radius: r_past,
                future_center: axis,
                future_radius: r_future,
            };
        }
    }
}

/// Draws fresh spherical instances until `make` succeeds on one.
fn with_spherical<T>(
    rng: &mut ChaCha8Rng,
    make: impl Fn(&mut ChaCha8Rng, &SphericalInstance) -> Option<T>,
) -> Option<(SphericalInstance, T)> {
    for _ in 0..INSTANCE_DRAWS {
        let inst = spherical_instance(rng);
        if let Some(value) = make(rng, &inst) {
            return Some((inst, value));
        }
    }
    None
}

fn spherical_pair(rng: &mut ChaCha8Rng, inst: &SphericalInstance) -> Option<(Point, Point)> {
    let chart = inst.ctx.chart();
    for _ in 0..GENERATION_ATTEMPTS {
        let p = random_unit(rng, 3);
        match (
            inst.ctx.future_body().signed_distance(&p),
            inst.ctx.past_body().unwrap().signed_distance(&p),
        ) {
            (Ok(a), Ok(b)) if a >= 0.05 && b >= 0.05 => {}
            _ => continue,
        }
        // Interior aim: walk from the cap center by less than half the
        // radius.
        let tangent = chart.project_tangent(&inst.future_center, &random_unit(rng, 3));
        let norm = chart.tangent_norm(&tangent);
        if norm < 1e-6 {
            continue;
        }
        let delta = rng.random_range(0.0..0.5 * inst.future_radius);
        let k = &inst.future_center * delta.cos() + (tangent / norm) * delta.sin();
        let ray = match GeodesicRay::through(chart, &p, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        let hit = match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.1 => hit,
            _ => continue,
        };
        let s = rng.random_range(0.1..0.85) * (hit.t - 0.03);
        if s < 0.02 {
            continue;
        }
        let q = ray.point_at(s);
        if !inst.ctx.hilbert_precedes(&p, &q).unwrap_or(false) {
            continue;
        }
        return Some((p, q));
    }
    None
}

fn spherical_leg_cross_ratio_agreement(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    for _ in 0..config.cases {
        let Some((inst, (p, q))) = with_spherical(rng, spherical_pair) else {
            out.exhausted("a spherical pair");
            return out;
        };
        let legs = hilbert_distance(&inst.ctx, &p, &q);
        let ratio = hilbert_distance_cross_ratio(&inst.ctx, &p, &q);
        match (legs, ratio) {
            (Ok(a), Ok(b)) => out.record(relative_gap(a.distance, b), threshold),
            _ => out.record_flag(false),
        }
    }
    out
}

fn spherical_rotation_invariance(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    for _ in 0..config.cases {
        let Some((inst, (p, q))) = with_spherical(rng, spherical_pair) else {
            out.exhausted("a spherical pair");
            return out;
        };
        let Ok(before) = hilbert_distance(&inst.ctx, &p, &q) else {
            out.record_flag(false);
            continue;
        };
        let chart = inst.ctx.chart();
        let rot = random_rotation(rng, 3);
        let rotated_ctx = match (
            ConvexBody::ball(chart, &rot * &inst.past_center, inst.past_radius),
            ConvexBody::ball(chart, &rot * &inst.future_center, inst.future_radius),
        ) {
            (Ok(past), Ok(future)) => match TimelikeContext::spherical_hilbert(past, future) {
                Ok(ctx) => ctx,
                Err(_) => {
                    out.record_flag(false);
                    continue;
                }
            },
            _ => {
                out.record_flag(false);
                continue;
            }
        };
        match hilbert_distance(&rotated_ctx, &(&rot * &p), &(&rot * &q)) {
            Ok(after) => out.record(relative_gap(before.distance, after.distance), threshold),
            Err(_) => out.record_flag(false),
        }
    }
    out
}

fn spherical_reverse_triangle(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    for _ in 0..config.cases {
        let Some((inst, (p, q, r))) = with_spherical(rng, spherical_chain) else {
            out.exhausted("a spherical chain");
            return out;
        };
        let legs = hilbert_distance(&inst.ctx, &p, &q)
            .and_then(|a| hilbert_distance(&inst.ctx, &q, &r).map(|b| a.distance + b.distance));
        let whole = hilbert_distance(&inst.ctx, &p, &r);
        match (legs, whole) {
            (Ok(sum), Ok(direct)) => out.record(sum - direct.distance, threshold),
            _ => out.record_flag(false),
        }
    }
    out
}

/// Extends an ordered spherical pair with a third point beyond the second.
fn spherical_chain(
    rng: &mut ChaCha8Rng,
    inst: &SphericalInstance,
) -> Option<(Point, Point, Point)> {
    for _ in 0..GENERATION_ATTEMPTS {
        let (p, q) = spherical_pair(rng, inst)?;
        let chart = inst.ctx.chart();
        let tangent = chart.project_tangent(&inst.future_center, &random_unit(rng, 3));
        let norm = chart.tangent_norm(&tangent);
        if norm < 1e-6 {
            continue;
        }
        let delta = rng.random_range(0.0..0.5 * inst.future_radius);
        let k = &inst.future_center * delta.cos() + (tangent / norm) * delta.sin();
        let ray = match GeodesicRay::through(chart, &q, &k) {
            Ok((ray, _)) => ray,
            Err(_) => continue,
        };
        let hit = match inst.ctx.future_body().ray_first_hit(&ray) {
            Ok(Some(hit)) if hit.transversal && hit.t > 0.08 => hit,
            _ => continue,
        };
        let s = rng.random_range(0.1..0.8) * (hit.t - 0.02);
        if s < 0.015 {
            continue;
        }
        let r = ray.point_at(s);
        if !inst.ctx.hilbert_precedes(&q, &r).unwrap_or(false)
            || !inst.ctx.hilbert_precedes(&p, &r).unwrap_or(false)
        {
            continue;
        }
        return Some((p, q, r));
    }
    None
}

fn spherical_classification_census(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    _threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    let mut timelike = 0usize;
    let mut null = 0usize;
    let mut unrelated = 0usize;
    for _ in 0..config.cases {
        let want_ordered = rng.random::<f64>() < 0.5;
        let Some((inst, (p, q))) = with_spherical(rng, |rng, inst| {
            if want_ordered {
                return spherical_pair(rng, inst);
            }
            let outside = |x: &Point| {
                inst.ctx
                    .future_body()
                    .signed_distance(x)
                    .map(|s| s >= 0.05)
                    .unwrap_or(false)
                    && inst
                        .ctx
                        .past_body()
                        .unwrap()
                        .signed_distance(x)
                        .map(|s| s >= 0.05)
                        .unwrap_or(false)
            };
            for _ in 0..GENERATION_ATTEMPTS {
                let a = random_unit(rng, 3);
                let b = random_unit(rng, 3);
                if outside(&a) && outside(&b) {
                    return Some((a, b));
                }
            }
            None
        }) else {
            out.exhausted("a classification pair");
            return out;
        };
        match inst.ctx.classify_pair(&p, &q) {
            Ok(class) => {
                match class {
                    PairClass::Timelike => {
                        timelike += 1;
                        // Timelike pairs must be ordered one way or the
                        // other.
                        let ordered = inst.ctx.hilbert_precedes(&p, &q).unwrap_or(false)
                            || inst.ctx.hilbert_precedes(&q, &p).unwrap_or(false);
                        out.record_flag(ordered);
                    }
                    PairClass::Null => {
                        null += 1;
                        out.record_flag(true);
                    }
                    PairClass::Unrelated | PairClass::Coincident => {
                        unrelated += 1;
                        let ordered = inst.ctx.hilbert_precedes(&p, &q).unwrap_or(false)
                            || inst.ctx.hilbert_precedes(&q, &p).unwrap_or(false);
                        out.record_flag(!ordered);
                    }
                }
            }
            Err(_) => out.record_flag(false),
        }
    }
    out.note = format!("timelike {timelike} / null {null} / unrelated {unrelated}");
    out
}

// ---------------------------------------------------------------------------
// Projective two-cap properties
// ---------------------------------------------------------------------------

fn standard_projective_context() -> TimelikeContext {
    let chart = Chart::new(ChartKind::Spherical, 2).unwrap();
    let mut south = Point::zeros(3);
    south[0] = -1.0;
    let past = ConvexBody::ball(chart, south, std::f64::consts::FRAC_PI_4).unwrap();
    TimelikeContext::projective_desitter(past).unwrap()
}

/// Meridian representative with first coordinate `sin beta`.
fn meridian_point(beta: f64) -> Point {
    let mut x = Point::zeros(3);
    x[0] = beta.sin();
    x[1] = beta.cos();
    x
}

fn boost(y: &Point, chi: f64) -> Point {
    let mut out = y.clone();
    out[0] = y[0] * chi.cosh() + y[1] * chi.sinh();
    out[1] = y[0] * chi.sinh() + y[1] * chi.cosh();
    out
}

fn spatial_rotation(y: &Point, theta: f64) -> Point {
    let mut out = y.clone();
    out[1] = y[1] * theta.cos() - y[2] * theta.sin();
    out[2] = y[1] * theta.sin() + y[2] * theta.cos();
    out
}

/// Random isometry of the unit-pairing sheet: rotation, boost, rotation.
fn sheet_transport(rng: &mut ChaCha8Rng, y: &Point) -> Point {
    let alpha = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    let chi = rng.random_range(0.0..1.1);
    let beta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    spatial_rotation(&boost(&spatial_rotation(y, beta), chi), alpha)
}

fn desitter_isometry_identity(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    let ctx = standard_projective_context();
    'cases: for _ in 0..config.cases {
        for _ in 0..GENERATION_ATTEMPTS {
            let b1: f64 = rng.random_range(-0.55..0.55);
            let b2: f64 = rng.random_range(-0.55..0.55);
            if (b1 - b2).abs() < 0.08 {
                continue;
            }
            let (Ok(y1), Ok(y2)) = (
                sphere_to_desitter(&meridian_point(b1)),
                sphere_to_desitter(&meridian_point(b2)),
            ) else {
                continue;
            };
            let alpha = rng.random_range(0.0..2.0 * std::f64::consts::PI);
            let chi = rng.random_range(0.0..1.1);
            let beta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
            let transport =
                |y: &Point| spatial_rotation(&boost(&spatial_rotation(y, beta), chi), alpha);
            let (ty1, ty2) = (transport(&y1), transport(&y2));
            let (Ok(x1), Ok(x2)) = (desitter_to_sphere(&ty1), desitter_to_sphere(&ty2)) else {
                continue;
            };
            // A third of the pairs swap to the antipodal representative to
            // exercise the projective search.
            let x2 = if rng.random::<f64>() < 0.33 { -x2 } else { x2 };
            let (Ok(two_sided), Ok(geodesic)) = (
                projective_hilbert_distance(&ctx, &x1, &x2),
                desitter_distance(&ty1, &ty2),
            ) else {
                continue;
            };
            out.record(
                (two_sided.distance - 2.0 * geodesic).abs() / (2.0 * geodesic).max(1e-30),
                threshold,
            );
            continue 'cases;
        }
        out.exhausted("a transported timelike pair");
        return out;
    }
    out
}

fn desitter_null_classification(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    _threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    let ctx = standard_projective_context();
    'cases: for _ in 0..config.cases {
        for _ in 0..GENERATION_ATTEMPTS {
            let base_sheet = match sphere_to_desitter(&meridian_point(rng.random_range(-0.5..0.5)))
            {
                Ok(y) => sheet_transport(rng, &y),
                Err(_) => continue,
            };
            let p = match desitter_to_sphere(&base_sheet) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let dirs = match null_directions(&ctx, &p) {
                Ok(dirs) => dirs,
                Err(_) => continue,
            };
            let Some(dir) = dirs.first() else {
                continue;
            };
            let s: f64 = rng.random_range(0.25..0.8);
            let target = &p * s.cos() + dir * s.sin();
            match ctx.classify_pair(&p, &target) {
                Ok(class) => out.record_flag(class == PairClass::Null),
                Err(_) => out.record_flag(false),
            }
            continue 'cases;
        }
        out.exhausted("a null chord");
        return out;
    }
    out
}

fn desitter_gnomonic_cross_ratio(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
    threshold: f64,
) -> Outcome {
    let mut out = Outcome::new();
    // Caps around the second axis keep the whole chord, including both cap
    // entries, on the projectable front hemisphere.
    let chart = Chart::new(ChartKind::Spherical, 2).unwrap();
    let mut south = Point::zeros(3);
    south[1] = -1.0;
    let past = ConvexBody::ball(chart, south, std::f64::consts::FRAC_PI_4).unwrap();
    let ctx = TimelikeContext::projective_desitter(past).unwrap();
    let flat = Chart::new(ChartKind::Euclidean, 2).unwrap();
    let quarter = std::f64::consts::FRAC_PI_4;
    'cases: for _ in 0..config.cases {
        for _ in 0..GENERATION_ATTEMPTS {
            let phi: f64 = rng.random_range(-0.6..0.6);
            let circle_point = |t: f64| {
                let mut x = Point::zeros(3);
                x[0] = phi.cos() * t.cos();
                x[1] = t.sin();
                x[2] = phi.sin() * t.cos();
                x
            };
            let tp = rng.random_range(-quarter + 0.06..quarter - 0.12);
            let tq = rng.random_range(tp + 0.05..quarter - 0.06);
            let p = circle_point(tp);
            let q = circle_point(tq);
            let back = circle_point(-quarter);
            let front = circle_point(quarter);
            let Ok(sphere_value) = projective_hilbert_distance(&ctx, &p, &q) else {
                continue;
            };
            let (Ok(ga), Ok(gp), Ok(gq), Ok(gb)) = (
                gnomonic_project(&back),
                gnomonic_project(&p),
                gnomonic_project(&q),
                gnomonic_project(&front),
            ) else {
                continue;
            };
            let Ok(ratio) = chord_cross_ratio(flat, &ga, &gp, &gq, &gb) else {
                continue;
            };
            if ratio <= 0.0 {
                continue;
            }
            out.record(
                relative_gap(sphere_value.distance, ratio.ln()),
                threshold,
            );
            continue 'cases;
        }
        out.exhausted("a projectable chord");
        return out;
    }
    out
}

// ---------------------------------------------------------------------------
// Registry and runner
// ---------------------------------------------------------------------------

const EXACT: f64 = 0.0;

/// Stable registry: the position of a property is its generator stream, so
/// results never depend on which subset runs.
const PROPERTIES: &[Property] = &[
    Property {
        name: "funk_dual_form_agreement",
        group: SuiteKind::Funk,
        default_threshold: 1e-9,
        run: funk_dual_form_agreement,
    },
    Property {
        name: "funk_reverse_triangle",
        group: SuiteKind::Funk,
        default_threshold: 1e-12,
        run: funk_reverse_triangle,
    },
    Property {
        name: "funk_collinear_additivity",
        group: SuiteKind::Funk,
        default_threshold: 1e-9,
        run: funk_collinear_additivity,
    },
    Property {
        name: "funk_order_equivalence",
        group: SuiteKind::Funk,
        default_threshold: EXACT,
        run: funk_order_equivalence,
    },
    Property {
        name: "funk_order_transitivity",
        group: SuiteKind::Funk,
        default_threshold: EXACT,
        run: funk_order_transitivity,
    },
    Property {
        name: "funk_functional_agreement",
        group: SuiteKind::Funk,
        default_threshold: 1e-9,
        run: funk_functional_agreement,
    },
    Property {
        name: "funk_dilation_radius",
        group: SuiteKind::Funk,
        default_threshold: 1e-9,
        run: funk_dilation_radius,
    },
    Property {
        name: "funk_monotonicity",
        group: SuiteKind::Funk,
        default_threshold: 1e-12,
        run: funk_monotonicity,
    },
    Property {
        name: "funk_first_argument_concavity",
        group: SuiteKind::Funk,
        default_threshold: 1e-8,
        run: funk_first_argument_concavity,
    },
    Property {
        name: "funk_length_quadrature",
        group: SuiteKind::Funk,
        default_threshold: 1e-6,
        run: funk_length_quadrature,
    },
    Property {
        name: "funk_cone_order_census",
        group: SuiteKind::Funk,
        default_threshold: EXACT,
        run: funk_cone_order_census,
    },
    Property {
        name: "hyperbolic_dual_form_agreement",
        group: SuiteKind::Hyperbolic,
        default_threshold: 1e-9,
        run: hyperbolic_dual_form_agreement,
    },
    Property {
        name: "hyperbolic_reverse_triangle",
        group: SuiteKind::Hyperbolic,
        default_threshold: 1e-12,
        run: hyperbolic_reverse_triangle,
    },
    Property {
        name: "hyperbolic_functional_agreement",
        group: SuiteKind::Hyperbolic,
        default_threshold: 1e-9,
        run: hyperbolic_functional_agreement,
    },
    Property {
        name: "hilbert_leg_cross_ratio_agreement",
        group: SuiteKind::Hilbert,
        default_threshold: 1e-9,
        run: hilbert_leg_cross_ratio_agreement,
    },
    Property {
        name: "hilbert_reverse_triangle",
        group: SuiteKind::Hilbert,
        default_threshold: 1e-12,
        run: hilbert_reverse_triangle,
    },
    Property {
        name: "hilbert_functional_rate",
        group: SuiteKind::Hilbert,
        default_threshold: 1e-5,
        run: hilbert_functional_rate,
    },
    Property {
        name: "spherical_leg_cross_ratio_agreement",
        group: SuiteKind::Spherical,
        default_threshold: 1e-9,
        run: spherical_leg_cross_ratio_agreement,
    },
    Property {
        name: "spherical_rotation_invariance",
        group: SuiteKind::Spherical,
        default_threshold: 1e-9,
        run: spherical_rotation_invariance,
    },
    Property {
        name: "spherical_reverse_triangle",
        group: SuiteKind::Spherical,
        default_threshold: 1e-12,
        run: spherical_reverse_triangle,
    },
    Property {
        name: "spherical_classification_census",
        group: SuiteKind::Spherical,
        default_threshold: EXACT,
        run: spherical_classification_census,
    },
    Property {
        name: "desitter_isometry_identity",
        group: SuiteKind::Desitter,
        default_threshold: 1e-9,
        run: desitter_isometry_identity,
    },
    Property {
        name: "desitter_null_classification",
        group: SuiteKind::Desitter,
        default_threshold: EXACT,
        run: desitter_null_classification,
    },
    Property {
        name: "desitter_gnomonic_cross_ratio",
        group: SuiteKind::Desitter,
        default_threshold: 1e-9,
        run: desitter_gnomonic_cross_ratio,
    },
];

/// Runs the selected property group and returns the structured report.
pub fn run_suite(kind: SuiteKind, config: &SuiteConfig) -> Result<SuiteReport> {
    if config.cases == 0 {
        return Err(Error::OutOfDomain {
            what: "suite case count",
        });
    }
    let mut properties = Vec::new();
    for (stream, property) in PROPERTIES.iter().enumerate() {
        if kind != SuiteKind::All && property.group != kind {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream as u64);
        let threshold = match config.tol {
            Some(t) if property.default_threshold > 0.0 => t,
            _ => property.default_threshold,
        };
        let outcome = (property.run)(&mut rng, config, threshold);
        properties.push(PropertyResult {
            name: property.name,
            cases: outcome.cases,
            violations: outcome.violations,
            max_deviation: outcome.max_deviation,
            threshold,
            passed: outcome.violations == 0,
            note: outcome.note,
        });
    }
    Ok(SuiteReport {
        kind,
        seed: config.seed,
        requested_cases: config.cases,
        properties,
    })
}

/// Fixed-format text report; equal reports produce identical bytes.
pub fn format_report(report: &SuiteReport) -> String {
    use std::fmt::Write as _;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "suite {} seed={} cases={}",
        report.kind, report.seed, report.requested_cases
    );
    for p in &report.properties {
        let _ = write!(
            text,
            "{} {} cases={} violations={} max_dev={:.3e} threshold={:.3e}",
            if p.passed { "pass" } else { "FAIL" },
            p.name,
            p.cases,
            p.violations,
            p.max_deviation,
            p.threshold,
        );
        if !p.note.is_empty() {
            let _ = write!(text, " note=[{}]", p.note);
        }
        text.push('\n');
    }
    let passed = report.properties.iter().filter(|p| p.passed).count();
    let _ = writeln!(
        text,
        "{}: {}/{} properties passed",
        if report.passed() { "ok" } else { "FAIL" },
        passed,
        report.properties.len()
    );
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SuiteConfig {
        SuiteConfig {
            seed: 7,
            cases: 12,
            tol: None,
        }
    }

    #[test]
    fn funk_group_passes_on_a_small_budget() {
        let report = run_suite(SuiteKind::Funk, &small_config()).unwrap();
        for p in &report.properties {
            assert!(p.passed, "{} failed: {:?}", p.name, p);
        }
    }

    #[test]
    fn remaining_groups_pass_on_a_small_budget() {
        for kind in [
            SuiteKind::Hyperbolic,
            SuiteKind::Hilbert,
            SuiteKind::Spherical,
            SuiteKind::Desitter,
        ] {
            let report = run_suite(kind, &small_config()).unwrap();
            for p in &report.properties {
                assert!(p.passed, "{} failed: {:?}", p.name, p);
            }
        }
    }

    #[test]
    fn reports_are_deterministic_and_subset_stable() {
        let full_a = format_report(&run_suite(SuiteKind::All, &small_config()).unwrap());
        let full_b = format_report(&run_suite(SuiteKind::All, &small_config()).unwrap());
        assert_eq!(full_a, full_b);
        // A property's numbers do not depend on which subset runs.
        let only_desitter = run_suite(SuiteKind::Desitter, &small_config()).unwrap();
        let all = run_suite(SuiteKind::All, &small_config()).unwrap();
        for p in &only_desitter.properties {
            let same = all.property(p.name).unwrap();
            assert_eq!(p.cases, same.cases);
            assert_eq!(p.violations, same.violations);
            assert_eq!(p.max_deviation.to_bits(), same.max_deviation.to_bits());
        }
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("funk".parse::<SuiteKind>().unwrap(), SuiteKind::Funk);
        assert_eq!("all".parse::<SuiteKind>().unwrap(), SuiteKind::All);
        assert!("bogus".parse::<SuiteKind>().is_err());
    }
}
