//! Causal-order contexts and predicates.
//!
//! A context fixes the convex bodies that define a timelike order on the
//! chart: a single future body (one-sided), or a disjoint past/future pair
//! (two-sided, including the projective antipodal setup on the sphere).
//! The predicates classify point pairs by shooting the connecting geodesic
//! at the bodies and demanding transversal crossings in the right sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::{antipodal_body, BodyShape, Containment, ConvexBody, RayHit, SeparatorFamily};
use crate::chart::{Chart, ChartKind, Point};
use crate::error::{Error, Result};
use crate::ray::GeodesicRay;
use crate::tol;

/// Which order structure a context carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextKind {
    /// One future body on a Euclidean or hyperbolic chart.
    Funk,
    /// Disjoint past and future bodies on a Euclidean or hyperbolic chart.
    Hilbert,
    /// Disjoint past and future bodies on the sphere, each certified to sit
    /// in an open hemisphere.
    SphericalHilbert,
    /// Spherical pair where the future body is the antipode of the past
    /// body, modelling a projective (identified-antipodes) geometry.
    ProjectiveDesitter,
}

impl std::fmt::Display for ContextKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ContextKind::Funk => "funk",
            ContextKind::Hilbert => "hilbert",
            ContextKind::SphericalHilbert => "spherical_hilbert",
            ContextKind::ProjectiveDesitter => "projective_desitter",
        };
        f.write_str(name)
    }
}

/// Causal classification of a point pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    /// One point strictly precedes the other.
    Timelike,
    /// The connecting geodesic grazes a body boundary tangentially
    /// (projective contexts only).
    Null,
    /// Neither point precedes the other.
    Unrelated,
    /// The points coincide (projectively for antipodal contexts).
    Coincident,
}

impl std::fmt::Display for PairClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PairClass::Timelike => "timelike",
            PairClass::Null => "null",
            PairClass::Unrelated => "unrelated",
            PairClass::Coincident => "coincident",
        };
        f.write_str(name)
    }
}

/// The ordered-chord data behind a positive precedence test: the pair
/// distance and the body crossings that certify the order.
#[derive(Clone, Debug)]
pub(crate) struct OrderedChord {
    /// Geodesic distance between the two points.
    pub d: f64,
    /// Entry of the forward ray into the future body, beyond the later
    /// point.
    pub forward: RayHit,
    /// Entry of the backward ray into the past body (two-sided contexts).
    pub backward: Option<RayHit>,
}

/// A causal-order context: chart, bodies, and the order they induce.
#[derive(Clone, Debug)]
pub struct TimelikeContext {
    kind: ContextKind,
    chart: Chart,
    future: ConvexBody,
    past: Option<ConvexBody>,
}

impl TimelikeContext {
    /// One-sided context from a single future body. The sphere is rejected:
    /// a one-sided order there fails the reversed triangle inequality, so
    /// only the two-sided constructors accept spherical bodies.
    pub fn funk(body: ConvexBody) -> Result<Self> {
        let chart = body.chart();
        if chart.kind() == ChartKind::Spherical {
            return Err(Error::UnsupportedChart {
                op: "one-sided order context",
                chart: chart.kind(),
            });
        }
        Ok(TimelikeContext {
            kind: ContextKind::Funk,
            chart,
            future: body,
            past: None,
        })
    }

    /// Two-sided context from disjoint past and future bodies on a flat or
    /// hyperbolic chart.
    pub fn hilbert(past: ConvexBody, future: ConvexBody) -> Result<Self> {
        if past.chart() != future.chart() {
            return Err(Error::ChartMismatch);
        }
        let chart = future.chart();
        if chart.kind() == ChartKind::Spherical {
            return Err(Error::UnsupportedChart {
                op: "flat/hyperbolic two-sided context (use the spherical constructor)",
                chart: chart.kind(),
            });
        }
        certify_disjoint(&past, &future)?;
        Ok(TimelikeContext {
            kind: ContextKind::Hilbert,
            chart,
            future,
            past: Some(past),
        })
    }

    /// Two-sided context from disjoint bodies on the sphere.
    pub fn spherical_hilbert(past: ConvexBody, future: ConvexBody) -> Result<Self> {
        if past.chart() != future.chart() {
            return Err(Error::ChartMismatch);
        }
        let chart = future.chart();
        if chart.kind() != ChartKind::Spherical {
            return Err(Error::UnsupportedChart {
                op: "spherical two-sided context",
                chart: chart.kind(),
            });
        }
        certify_disjoint(&past, &future)?;
        Ok(TimelikeContext {
            kind: ContextKind::SphericalHilbert,
            chart,
            future,
            past: Some(past),
        })
    }

    /// Projective context on the sphere: the future body is the antipode of
    /// the given past body, and points are identified with their antipodes
    /// for classification and distance purposes.
    pub fn projective_desitter(past: ConvexBody) -> Result<Self> {
        let chart = past.chart();
        if chart.kind() != ChartKind::Spherical {
            return Err(Error::UnsupportedChart {
                op: "projective antipodal context",
                chart: chart.kind(),
            });
        }
        let future = antipodal_body(&past)?;
        certify_disjoint(&past, &future)?;
        Ok(TimelikeContext {
            kind: ContextKind::ProjectiveDesitter,
            chart,
            future,
            past: Some(past),
        })
    }

    pub fn kind(&self) -> ContextKind {
        self.kind
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// The body hit by forward rays.
    pub fn future_body(&self) -> &ConvexBody {
        &self.future
    }

    /// The body hit by backward rays (absent for one-sided contexts).
    pub fn past_body(&self) -> Option<&ConvexBody> {
        self.past.as_ref()
    }

    /// The chord evidence that `p` strictly precedes `q`, or `None` when the
    /// pair is not ordered. All order predicates reduce to this test.
    pub(crate) fn ordered_chord(&self, p: &Point, q: &Point) -> Result<Option<OrderedChord>> {
        self.chart.check_point(p)?;
        self.chart.check_point(q)?;
        if self.future.contains(p)? != Containment::Exterior
            || self.future.contains(q)? != Containment::Exterior
        {
            return Ok(None);
        }
        if let Some(past) = &self.past {
            if past.contains(p)? != Containment::Exterior
                || past.contains(q)? != Containment::Exterior
            {
                return Ok(None);
            }
        }
        let (ray, d) = match GeodesicRay::through(self.chart, p, q) {
            Ok(pair) => pair,
            Err(Error::DegenerateRay) | Err(Error::AmbiguousGeodesic) => return Ok(None),
            Err(e) => return Err(e),
        };
        let forward = match self.future.ray_first_hit(&ray)? {
            Some(hit) => hit,
            None => return Ok(None),
        };
        if !forward.transversal || d >= forward.t - tol::BETWEENNESS {
            return Ok(None);
        }
        let mut backward = None;
        if let Some(past) = &self.past {
            // The past body must not intrude on the forward chord: the first
            // boundary met ahead has to belong to the future body.
            if let Some(block) = past.ray_first_hit(&ray)? {
                if block.t < forward.t {
                    return Ok(None);
                }
            }
            let rev = ray.reversed();
            let back = match past.ray_first_hit(&rev)? {
                Some(hit) => hit,
                None => return Ok(None),
            };
            if !back.transversal {
                return Ok(None);
            }
            if let Some(block) = self.future.ray_first_hit(&rev)? {
                if block.t < back.t {
                    return Ok(None);
                }
            }
            if self.chart.kind() == ChartKind::Spherical
                && forward.t + back.t >= std::f64::consts::PI - tol::LUNE_MARGIN
            {
                // The full chord would span at least a half turn, where the
                // spherical two-leg distance stops being positive.
                return Ok(None);
            }
            backward = Some(back);
        }
        Ok(Some(OrderedChord {
            d,
            forward,
            backward,
        }))
    }

    /// One-sided precedence: the ray from `p` through `q` crosses into the
    /// future body transversally strictly beyond `q`.
    pub fn funk_precedes(&self, p: &Point, q: &Point) -> Result<bool> {
        if self.kind != ContextKind::Funk {
            return Err(Error::UnsupportedContext {
                op: "funk_precedes",
                expected: "funk",
            });
        }
        Ok(self.ordered_chord(p, q)?.is_some())
    }

    /// Separator-inclusion form of one-sided precedence on polytopes: every
    /// face strictly separating `q` weakly separates `p`, and the connecting
    /// ray crosses the body transversally.
    pub fn inclusion_precedes(&self, p: &Point, q: &Point) -> Result<bool> {
        if self.kind != ContextKind::Funk {
            return Err(Error::UnsupportedContext {
                op: "inclusion_precedes",
                expected: "funk",
            });
        }
        let faces = match self.future.shape() {
            BodyShape::Polytope { faces } => faces,
            BodyShape::Ball { .. } => {
                return Err(Error::UnsupportedRepresentation {
                    op: "inclusion_precedes",
                })
            }
        };
        self.chart.check_point(p)?;
        self.chart.check_point(q)?;
        if self.chart.distance(p, q) <= tol::SEPARATION_MARGIN {
            return Ok(false);
        }
        if self.future.contains(p)? != Containment::Exterior
            || self.future.contains(q)? != Containment::Exterior
        {
            return Ok(false);
        }
        let family = match self.future.separating_hyperplanes(q) {
            Ok(SeparatorFamily::Faces(idx)) => idx,
            Ok(SeparatorFamily::BallTangents { .. }) => unreachable!(),
            Err(Error::EmptySeparatorFamily) => return Ok(false),
            Err(e) => return Err(e),
        };
        for i in family {
            if faces[i].signed_kernel(p) < -tol::SEPARATION_MARGIN {
                return Ok(false);
            }
        }
        let (ray, _) = match GeodesicRay::through(self.chart, p, q) {
            Ok(pair) => pair,
            Err(Error::DegenerateRay) | Err(Error::AmbiguousGeodesic) => return Ok(false),
            Err(e) => return Err(e),
        };
        match self.future.ray_first_hit(&ray)? {
            Some(hit) => Ok(hit.transversal),
            None => Ok(false),
        }
    }

    /// Two-sided precedence: the forward ray crosses into the future body
    /// beyond `q` and the backward ray crosses into the past body, with the
    /// future and past crossings first in their directions, both transversal,
    /// and (on the sphere) the whole chord shorter than a half turn.
    pub fn hilbert_precedes(&self, p: &Point, q: &Point) -> Result<bool> {
        if self.past.is_none() {
            return Err(Error::UnsupportedContext {
                op: "hilbert_precedes",
                expected: "two-sided",
            });
        }
        Ok(self.ordered_chord(p, q)?.is_some())
    }

    /// Context-appropriate precedence test.
    pub fn precedes(&self, p: &Point, q: &Point) -> Result<bool> {
        Ok(self.ordered_chord(p, q)?.is_some())
    }

    /// Whether `q` lies in the ray cone of `p`: the connecting ray meets the
    /// future body transversally somewhere, with no requirement that the
    /// crossing happens beyond `q`. Comparing this cone with the order
    /// predicate probes how much of the cone the segment condition cuts off.
    pub fn funk_cone_contains(&self, p: &Point, q: &Point) -> Result<bool> {
        if self.kind != ContextKind::Funk {
            return Err(Error::UnsupportedContext {
                op: "funk_cone_contains",
                expected: "funk",
            });
        }
        self.chart.check_point(p)?;
        self.chart.check_point(q)?;
        if self.future.contains(p)? != Containment::Exterior
            || self.future.contains(q)? != Containment::Exterior
        {
            return Ok(false);
        }
        let (ray, _) = match GeodesicRay::through(self.chart, p, q) {
            Ok(pair) => pair,
            Err(Error::DegenerateRay) | Err(Error::AmbiguousGeodesic) => return Ok(false),
            Err(e) => return Err(e),
        };
        match self.future.ray_first_hit(&ray)? {
            Some(hit) => Ok(hit.transversal),
            None => Ok(false),
        }
    }

    /// Causal class of a pair. Projective contexts identify each point with
    /// its antipode, try the four representative pairings in a fixed order,
    /// and report tangential chords as null; the other contexts know only
    /// timelike, unrelated, and coincident classes.
    pub fn classify_pair(&self, p: &Point, q: &Point) -> Result<PairClass> {
        self.chart.check_point(p)?;
        self.chart.check_point(q)?;
        if self.chart.distance(p, q) <= tol::SEPARATION_MARGIN {
            return Ok(PairClass::Coincident);
        }
        if self.kind == ContextKind::ProjectiveDesitter {
            let nq = -q;
            if self.chart.distance(p, &nq) <= tol::SEPARATION_MARGIN {
                return Ok(PairClass::Coincident);
            }
            for (a, b) in projective_pairings(p, q) {
                if self.ordered_chord(&a, &b)?.is_some() {
                    return Ok(PairClass::Timelike);
                }
            }
            if self.chord_grazes_a_body(p, q)? {
                return Ok(PairClass::Null);
            }
            return Ok(PairClass::Unrelated);
        }
        if self.ordered_chord(p, q)?.is_some() || self.ordered_chord(q, p)?.is_some() {
            return Ok(PairClass::Timelike);
        }
        Ok(PairClass::Unrelated)
    }

    /// Whether the great circle through the pair is tangent to either body
    /// boundary. Caps use the closed-form wave amplitude of the circle;
    /// polytopes ask the hit machinery for grazing crossings both ways.
    fn chord_grazes_a_body(&self, p: &Point, q: &Point) -> Result<bool> {
        let (ray, _) = match GeodesicRay::through(self.chart, p, q) {
            Ok(pair) => pair,
            Err(Error::DegenerateRay) | Err(Error::AmbiguousGeodesic) => return Ok(false),
            Err(e) => return Err(e),
        };
        let bodies = [Some(&self.future), self.past.as_ref()];
        for body in bodies.into_iter().flatten() {
            match body.shape() {
                BodyShape::Ball { center, radius } => {
                    let amp = ray.base().dot(center).hypot(ray.dir().dot(center));
                    if (amp - radius.cos()).abs() <= tol::NULL_TANGENCY {
                        return Ok(true);
                    }
                }
                BodyShape::Polytope { .. } => {
                    for r in [ray.clone(), ray.reversed()] {
                        if body.contains(r.base())? != Containment::Exterior {
                            continue;
                        }
                        if let Some(hit) = body.ray_first_hit(&r)? {
                            if !hit.transversal {
                                return Ok(true);
                            }
                        }
                    }
                }
            }
        }
        Ok(false)
    }
}

/// The four representative pairings of a projective point pair, in the fixed
/// order used by the projective distance and classification: (p, q), (q, p),
/// (p, -q), (-q, p).
pub(crate) fn projective_pairings(p: &Point, q: &Point) -> [(Point, Point); 4] {
    let nq = -q;
    [
        (p.clone(), q.clone()),
        (q.clone(), p.clone()),
        (p.clone(), nq.clone()),
        (nq, p.clone()),
    ]
}

/// Validates that two bodies are disjoint with a certified gap. Ball pairs
/// are checked in closed form; other pairs are certified by sampling each
/// boundary and measuring signed distance to the other body.
fn certify_disjoint(a: &ConvexBody, b: &ConvexBody) -> Result<()> {
    let chart = a.chart();
    if let (BodyShape::Ball { center: ca, radius: ra }, BodyShape::Ball { center: cb, radius: rb }) =
        (a.shape(), b.shape())
    {
        let separation = chart.distance(ca, cb) - ra - rb;
        if separation < tol::BODY_DISJOINTNESS {
            return Err(Error::BodiesNotDisjoint { separation });
        }
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x64697379);
    let mut separation = f64::INFINITY;
    let samples_a = a.sample_boundary(128, &mut rng)?;
    for x in &samples_a {
        separation = separation.min(b.signed_distance(x)?);
    }
    let samples_b = b.sample_boundary(128, &mut rng)?;
    for x in &samples_b {
        separation = separation.min(a.signed_distance(x)?);
    }
    if separation < tol::BODY_DISJOINTNESS {
        return Err(Error::BodiesNotDisjoint { separation });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperplane::Hyperplane;
    use nalgebra::dvector;

    fn right_halfplane_body() -> (Chart, ConvexBody) {
        let chart = Chart::euclidean(2).unwrap();
        // The body is { x_0 >= 1 }, approached from the left.
        let face = Hyperplane::new(chart, dvector![-1.0, 0.0], -1.0).unwrap();
        let body = ConvexBody::polytope(chart, vec![face], Some(dvector![2.0, 0.0])).unwrap();
        (chart, body)
    }

    #[test]
    fn funk_precedence_on_a_halfplane() {
        let (_, body) = right_halfplane_body();
        let ctx = TimelikeContext::funk(body).unwrap();
        let p = dvector![0.0, 0.0];
        let q = dvector![0.5, 0.0];
        assert!(ctx.funk_precedes(&p, &q).unwrap());
        assert!(!ctx.funk_precedes(&q, &p).unwrap());
        // Sideways motion never reaches the wall.
        assert!(!ctx.funk_precedes(&p, &dvector![0.0, 0.5]).unwrap());
        // Points inside the body are out of the order's domain.
        assert!(!ctx.funk_precedes(&p, &dvector![2.0, 0.0]).unwrap());
        assert!(ctx.funk_cone_contains(&p, &q).unwrap());
        assert_eq!(ctx.classify_pair(&p, &q).unwrap(), PairClass::Timelike);
        assert_eq!(ctx.classify_pair(&q, &p).unwrap(), PairClass::Timelike);
        assert_eq!(ctx.classify_pair(&p, &p).unwrap(), PairClass::Coincident);
        assert_eq!(
            ctx.classify_pair(&p, &dvector![0.0, 3.0]).unwrap(),
            PairClass::Unrelated
        );
    }

    #[test]
    fn funk_order_is_transitive_along_a_ray() {
        let (_, body) = right_halfplane_body();
        let ctx = TimelikeContext::funk(body).unwrap();
        let p = dvector![0.0, 0.0];
        let q = dvector![0.4, 0.1];
        let r = dvector![0.8, 0.2];
        assert!(ctx.funk_precedes(&p, &q).unwrap());
        assert!(ctx.funk_precedes(&q, &r).unwrap());
        assert!(ctx.funk_precedes(&p, &r).unwrap());
    }

    #[test]
    fn inclusion_and_ray_forms_agree_on_a_slab() {
        let chart = Chart::euclidean(2).unwrap();
        let faces = vec![
            Hyperplane::new(chart, dvector![-1.0, 0.0], -1.0).unwrap(),
            Hyperplane::new(chart, dvector![1.0, 0.0], 2.0).unwrap(),
        ];
        let slab = ConvexBody::polytope(chart, faces, Some(dvector![1.5, 0.0])).unwrap();
        let ctx = TimelikeContext::funk(slab).unwrap();
        let pts = [
            dvector![0.0, 0.0],
            dvector![0.5, 0.2],
            dvector![0.9, -0.4],
            dvector![3.0, 0.0],
            dvector![4.0, 1.0],
            dvector![0.5, 5.0],
        ];
        for p in &pts {
            for q in &pts {
                assert_eq!(
                    ctx.funk_precedes(p, q).unwrap(),
                    ctx.inclusion_precedes(p, q).unwrap(),
                    "pair {p:?} {q:?}"
                );
            }
        }
    }

    #[test]
    fn hyperbolic_funk_classification() {
        let chart = Chart::hyperbolic(2).unwrap();
        let wall = Hyperplane::new(chart, dvector![0.0, 1.0, 0.0], 0.0).unwrap();
        let witness = dvector![1.0f64.cosh(), -(1.0f64.sinh()), 0.0];
        let body = ConvexBody::polytope(chart, vec![wall], Some(witness)).unwrap();
        let ctx = TimelikeContext::funk(body).unwrap();
        let at = |t: f64| dvector![t.cosh(), t.sinh(), 0.0];
        assert!(ctx.funk_precedes(&at(2.0), &at(1.0)).unwrap());
        assert!(!ctx.funk_precedes(&at(1.0), &at(2.0)).unwrap());
        assert_eq!(
            ctx.classify_pair(&at(1.0), &at(2.0)).unwrap(),
            PairClass::Timelike
        );
        // A point displaced along the wall at equal depth: the connecting
        // geodesic stays on one side and never crosses.
        let v = 1.0f64;
        let p = at(2.0);
        let q = dvector![
            2.0f64.cosh() * v.cosh(),
            2.0f64.sinh(),
            2.0f64.cosh() * v.sinh()
        ];
        assert_eq!(ctx.classify_pair(&p, &q).unwrap(), PairClass::Unrelated);
    }

    #[test]
    fn spherical_two_sided_precedence_and_lune_guard() {
        let chart = Chart::spherical(2).unwrap();
        let quarter = std::f64::consts::FRAC_PI_4;
        let past = ConvexBody::ball(chart, dvector![-1.0, 0.0, 0.0], quarter).unwrap();
        let future = ConvexBody::ball(chart, dvector![1.0, 0.0, 0.0], quarter).unwrap();
        let ctx = TimelikeContext::spherical_hilbert(past, future).unwrap();
        let on_meridian = |beta: f64| dvector![beta.sin(), beta.cos(), 0.0];
        let p = on_meridian(0.0);
        let q = on_meridian(0.3);
        assert!(ctx.hilbert_precedes(&p, &q).unwrap());
        assert!(!ctx.hilbert_precedes(&q, &p).unwrap());
        // Toward the past body the order reverses.
        let b = on_meridian(-0.3);
        assert!(!ctx.hilbert_precedes(&p, &b).unwrap());
        assert!(ctx.hilbert_precedes(&b, &p).unwrap());
        // A target beyond the far side of the future body is unordered.
        let far = on_meridian(2.5);
        assert!(!ctx.hilbert_precedes(&p, &far).unwrap());
        // Off the connecting meridian entirely: unordered.
        assert_eq!(
            ctx.classify_pair(&p, &dvector![0.0, 0.0, 1.0]).unwrap(),
            PairClass::Unrelated
        );
        assert_eq!(ctx.classify_pair(&p, &q).unwrap(), PairClass::Timelike);
    }

    #[test]
    fn projective_context_classifies_antipodal_representatives() {
        let chart = Chart::spherical(2).unwrap();
        let quarter = std::f64::consts::FRAC_PI_4;
        let past = ConvexBody::ball(chart, dvector![-1.0, 0.0, 0.0], quarter).unwrap();
        let ctx = TimelikeContext::projective_desitter(past).unwrap();
        let on_meridian = |beta: f64| dvector![beta.sin(), beta.cos(), 0.0];
        let p = on_meridian(0.0);
        let q = on_meridian(0.3);
        assert_eq!(ctx.classify_pair(&p, &q).unwrap(), PairClass::Timelike);
        // The same pair with the target negated is still timelike
        // projectively.
        let nq = -&q;
        assert_eq!(ctx.classify_pair(&p, &nq).unwrap(), PairClass::Timelike);
        assert_eq!(ctx.classify_pair(&p, &-&p).unwrap(), PairClass::Coincident);
        // A chord tangent to the future cap is null: from the equator point,
        // aim so the circle's amplitude toward the center equals cos(r).
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let tangent_target = {
            let dir = dvector![half, 0.0, half];
            let t = 0.4f64;
            &p * t.cos() + dir * t.sin()
        };
        assert_eq!(
            ctx.classify_pair(&p, &tangent_target).unwrap(),
            PairClass::Null
        );
    }

    #[test]
    fn overlapping_bodies_are_rejected() {
        let chart = Chart::euclidean(2).unwrap();
        let a = ConvexBody::ball(chart, dvector![-1.5, 0.0], 1.0).unwrap();
        let b = ConvexBody::ball(chart, dvector![1.5, 0.0], 1.0).unwrap();
        assert!(TimelikeContext::hilbert(a.clone(), b).is_ok());
        let c = ConvexBody::ball(chart, dvector![1.5, 0.0], 2.5).unwrap();
        assert!(matches!(
            TimelikeContext::hilbert(a, c),
            Err(Error::BodiesNotDisjoint { .. })
        ));
    }

    #[test]
    fn context_kind_gates_predicates() {
        let chart = Chart::spherical(2).unwrap();
        let quarter = std::f64::consts::FRAC_PI_4;
        let cap = ConvexBody::ball(chart, dvector![1.0, 0.0, 0.0], quarter).unwrap();
        assert!(matches!(
            TimelikeContext::funk(cap),
            Err(Error::UnsupportedChart { .. })
        ));
        let (_, body) = {
            let chart = Chart::euclidean(2).unwrap();
            let face = Hyperplane::new(chart, dvector![-1.0, 0.0], -1.0).unwrap();
            (
                chart,
                ConvexBody::polytope(chart, vec![face], Some(dvector![2.0, 0.0])).unwrap(),
            )
        };
        let ctx = TimelikeContext::funk(body).unwrap();
        assert!(matches!(
            ctx.hilbert_precedes(&dvector![0.0, 0.0], &dvector![0.5, 0.0]),
            Err(Error::UnsupportedContext { .. })
        ));
    }
}
