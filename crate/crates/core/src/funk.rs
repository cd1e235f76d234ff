//! One-sided (single-body) timelike distance and its directional functional.
//!
//! The distance from `p` to `q` is the log of the kernel ratio of their
//! distances to the body boundary along the connecting geodesic. It also
//! arises as an infimum of the same ratio over separating hyperplanes, with
//! the support plane at the boundary hit as minimizer; both forms are
//! implemented so they can be played against each other in tests.

use rand::Rng;

use crate::body::{BodyShape, SeparatorFamily};
use crate::chart::{Point, Vector};
use crate::error::{Error, Result};
use crate::hyperplane::Hyperplane;
use crate::order::{ContextKind, TimelikeContext};
use crate::ray::GeodesicRay;
use crate::tol;

/// A distance evaluation together with the geometry that produced it.
#[derive(Clone, Debug)]
pub struct FunkValue {
    /// The distance itself.
    pub distance: f64,
    /// Boundary point hit by the ray from the base through the target
    /// (ray form only).
    pub boundary_point: Option<Point>,
    /// Geodesic distance from the base point to the boundary hit.
    pub base_to_boundary: Option<f64>,
    /// Geodesic distance from the target point to the boundary hit.
    pub target_to_boundary: Option<f64>,
    /// Hyperplane realizing the value: the support plane at the hit for the
    /// ray form, the minimizing separator for the variational form.
    pub argmin: Option<Hyperplane>,
}

impl FunkValue {
    fn zero() -> Self {
        FunkValue {
            distance: 0.0,
            boundary_point: None,
            base_to_boundary: None,
            target_to_boundary: None,
            argmin: None,
        }
    }
}

/// A directional functional evaluation with the hit parameters behind it.
#[derive(Clone, Debug)]
pub struct FinslerValue {
    /// The functional value.
    pub value: f64,
    /// Parameter at which the forward ray crosses into the future body.
    pub forward_hit: Option<f64>,
    /// Parameter at which the backward ray crosses into the past body
    /// (two-sided functionals only).
    pub backward_hit: Option<f64>,
}

fn require_funk(ctx: &TimelikeContext, op: &'static str) -> Result<()> {
    if ctx.kind() != ContextKind::Funk {
        return Err(Error::UnsupportedContext {
            op,
            expected: "funk",
        });
    }
    Ok(())
}

/// One-sided distance from `p` to `q` in ray form: the log ratio of the
/// boundary-kernel values at the two points along the connecting geodesic.
/// Zero for coincident points; `NotInFuture` when the pair is not ordered.
pub fn funk_distance(ctx: &TimelikeContext, p: &Point, q: &Point) -> Result<FunkValue> {
    require_funk(ctx, "funk_distance")?;
    let chart = ctx.chart();
    chart.check_point(p)?;
    chart.check_point(q)?;
    if chart.distance(p, q) <= tol::SEPARATION_MARGIN {
        return Ok(FunkValue::zero());
    }
    let chord = ctx.ordered_chord(p, q)?.ok_or(Error::NotInFuture)?;
    let t_hit = chord.forward.t;
    let remaining = t_hit - chord.d;
    let distance = chart.kernel(t_hit).ln() - chart.kernel(remaining).ln();
    Ok(FunkValue {
        distance,
        boundary_point: Some(chord.forward.point.clone()),
        base_to_boundary: Some(t_hit),
        target_to_boundary: Some(remaining),
        argmin: Some(chord.forward.support.clone()),
    })
}

/// One-sided distance in variational form: the infimum over hyperplanes
/// separating `q` from the body of the log ratio of kernel distances. Agrees
/// with the ray form on ordered pairs, with the support plane at the
/// boundary hit as minimizer.
pub fn funk_distance_variational(
    ctx: &TimelikeContext,
    p: &Point,
    q: &Point,
) -> Result<FunkValue> {
    require_funk(ctx, "funk_distance_variational")?;
    let chart = ctx.chart();
    chart.check_point(p)?;
    chart.check_point(q)?;
    if chart.distance(p, q) <= tol::SEPARATION_MARGIN {
        return Ok(FunkValue::zero());
    }
    if ctx.ordered_chord(p, q)?.is_none() {
        return Err(Error::NotInFuture);
    }
    let infimum = ctx.future_body().ratio_infimum(p, q)?;
    Ok(FunkValue {
        distance: infimum.value,
        boundary_point: None,
        base_to_boundary: None,
        target_to_boundary: None,
        argmin: infimum.argmin,
    })
}

/// Directional functional at `p` in hit form: the tangent norm of `v` times
/// the log-kernel derivative at the parameter where the ray along `v`
/// crosses into the body. Zero vectors give zero; directions whose ray
/// misses the body or only grazes it are rejected as not timelike.
pub fn funk_functional(ctx: &TimelikeContext, p: &Point, v: &Vector) -> Result<FinslerValue> {
    require_funk(ctx, "funk_functional")?;
    let chart = ctx.chart();
    chart.check_point(p)?;
    chart.check_vector_len(v)?;
    let speed = chart.tangent_norm(v);
    if speed == 0.0 {
        return Ok(FinslerValue {
            value: 0.0,
            forward_hit: None,
            backward_hit: None,
        });
    }
    let ray = GeodesicRay::new(chart, p.clone(), v.clone())?;
    let hit = ctx
        .future_body()
        .ray_first_hit(&ray)?
        .ok_or(Error::NotTimelikeDirection)?;
    if !hit.transversal {
        return Err(Error::NotTimelikeDirection);
    }
    Ok(FinslerValue {
        value: speed * chart.log_kernel_derivative(hit.t),
        forward_hit: Some(hit.t),
        backward_hit: None,
    })
}

/// Directional functional in variational form, for polytope bodies: the
/// minimum over faces separating `p` of the negated kernel derivative along
/// `v` divided by the kernel at `p`. Agrees with the hit form for timelike
/// directions.
pub fn funk_functional_variational(
    ctx: &TimelikeContext,
    p: &Point,
    v: &Vector,
) -> Result<FinslerValue> {
    require_funk(ctx, "funk_functional_variational")?;
    let faces = match ctx.future_body().shape() {
        BodyShape::Polytope { faces } => faces,
        BodyShape::Ball { .. } => {
            return Err(Error::UnsupportedRepresentation {
                op: "funk_functional_variational",
            })
        }
    };
    let chart = ctx.chart();
    chart.check_point(p)?;
    chart.check_vector_len(v)?;
    let speed = chart.tangent_norm(v);
    if speed == 0.0 {
        return Ok(FinslerValue {
            value: 0.0,
            forward_hit: None,
            backward_hit: None,
        });
    }
    let ray = GeodesicRay::new(chart, p.clone(), v.clone())?;
    let hit = ctx
        .future_body()
        .ray_first_hit(&ray)?
        .ok_or(Error::NotTimelikeDirection)?;
    if !hit.transversal {
        return Err(Error::NotTimelikeDirection);
    }
    let family = match ctx.future_body().separating_hyperplanes(p)? {
        SeparatorFamily::Faces(idx) => idx,
        SeparatorFamily::BallTangents { .. } => unreachable!(),
    };
    let mut best = f64::INFINITY;
    for i in family {
        let face = &faces[i];
        let slope = -chart.form_dot(face.normal(), v) / face.signed_kernel(p);
        best = best.min(slope);
    }
    if !best.is_finite() {
        return Err(Error::EmptySeparatorFamily);
    }
    Ok(FinslerValue {
        value: best,
        forward_hit: Some(hit.t),
        backward_hit: None,
    })
}

/// Points at one-sided distance exactly `r` from `p`, on flat charts: the
/// body boundary contracted toward `p` by the factor `1 - exp(-r)`. Each
/// returned point is verified to reproduce the radius before being accepted.
pub fn future_sphere_sample<R: Rng + ?Sized>(
    ctx: &TimelikeContext,
    p: &Point,
    r: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Point>> {
    require_funk(ctx, "future_sphere_sample")?;
    let chart = ctx.chart();
    if chart.kind() != crate::chart::ChartKind::Euclidean {
        return Err(Error::UnsupportedChart {
            op: "future_sphere_sample",
            chart: chart.kind(),
        });
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::OutOfDomain {
            what: "dilation radius (must be positive and finite)",
        });
    }
    chart.check_point(p)?;
    if ctx.future_body().contains(p)? != crate::body::Containment::Exterior {
        return Err(Error::PointNotExterior {
            role: "dilation base point",
        });
    }
    let shrink = 1.0 - (-r).exp();
    let body = ctx.future_body();
    let aims = body.sample_boundary(count, rng)?;
    let mut out = Vec::with_capacity(count);
    for aim in &aims {
        let (ray, _) = GeodesicRay::through(chart, p, aim)?;
        let hit = body.ray_first_hit(&ray)?.ok_or(Error::NoBoundaryHit)?;
        let q = &hit.point * shrink + p * (1.0 - shrink);
        let check = funk_distance(ctx, p, &q)?;
        if (check.distance - r).abs() > tol::DILATION_CHECK {
            return Err(Error::InvariantViolation {
                what: format!(
                    "dilation sample missed the radius by {:e}",
                    (check.distance - r).abs()
                ),
            });
        }
        out.push(q);
    }
    Ok(out)
}

/// Compares the distances of a nested pair of bodies on one ordered pair of
/// points. Nesting of `inner` inside `outer` is certified by sampling the
/// inner boundary; the value for the enlarged body must not fall below the
/// value for the smaller one. Returns `(inner distance, outer distance)`.
pub fn funk_monotonicity_check<R: Rng + ?Sized>(
    inner: &TimelikeContext,
    outer: &TimelikeContext,
    p: &Point,
    q: &Point,
    rng: &mut R,
) -> Result<(f64, f64)> {
    require_funk(inner, "funk_monotonicity_check")?;
    require_funk(outer, "funk_monotonicity_check")?;
    if inner.chart() != outer.chart() {
        return Err(Error::ChartMismatch);
    }
    let samples = inner.future_body().sample_boundary(1000, rng)?;
    for x in &samples {
        if outer.future_body().signed_distance(x)? > tol::BOUNDARY_BAND {
            return Err(Error::NotNested);
        }
    }
    let small = funk_distance(inner, p, q)?.distance;
    let large = funk_distance(outer, p, q)?.distance;
    if large < small - tol::MONOTONICITY_SLACK {
        return Err(Error::InvariantViolation {
            what: format!(
                "distance fell from {small:e} to {large:e} under body enlargement"
            ),
        });
    }
    Ok((small, large))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::ConvexBody;
    use crate::chart::Chart;
    use approx::assert_relative_eq;
    use nalgebra::dvector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn halfplane_ctx(threshold: f64) -> TimelikeContext {
        let chart = Chart::euclidean(2).unwrap();
        let face = Hyperplane::new(chart, dvector![-1.0, 0.0], -threshold).unwrap();
        let body =
            ConvexBody::polytope(chart, vec![face], Some(dvector![threshold + 1.0, 0.0])).unwrap();
        TimelikeContext::funk(body).unwrap()
    }

    #[test]
    fn halfplane_distance_forms_agree() {
        let ctx = halfplane_ctx(1.0);
        let p = dvector![0.0, 0.0];
        let q = dvector![0.5, 0.0];
        let ray_form = funk_distance(&ctx, &p, &q).unwrap();
        assert_relative_eq!(ray_form.distance, 2.0f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(ray_form.base_to_boundary.unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(ray_form.target_to_boundary.unwrap(), 0.5, epsilon = 1e-12);
        let b = ray_form.boundary_point.unwrap();
        assert_relative_eq!(b[0], 1.0, epsilon = 1e-12);
        let variational = funk_distance_variational(&ctx, &p, &q).unwrap();
        assert_relative_eq!(
            variational.distance,
            ray_form.distance,
            max_relative = 1e-12
        );
        assert!(variational
            .argmin
            .unwrap()
            .approx_eq(&ray_form.argmin.unwrap()));
        assert!(matches!(
            funk_distance(&ctx, &q, &p),
            Err(Error::NotInFuture)
        ));
        assert_eq!(funk_distance(&ctx, &p, &p).unwrap().distance, 0.0);
    }

    #[test]
    fn ball_distance_forms_agree() {
        let chart = Chart::euclidean(2).unwrap();
        let body = ConvexBody::ball(chart, dvector![3.0, 0.0], 1.0).unwrap();
        let ctx = TimelikeContext::funk(body).unwrap();
        let p = dvector![0.0, 0.0];
        let q = dvector![1.0, 0.0];
        let ray_form = funk_distance(&ctx, &p, &q).unwrap();
        assert_relative_eq!(ray_form.distance, 2.0f64.ln(), max_relative = 1e-12);
        let variational = funk_distance_variational(&ctx, &p, &q).unwrap();
        assert_relative_eq!(
            variational.distance,
            ray_form.distance,
            max_relative = 1e-12
        );
    }

    #[test]
    fn hyperbolic_distance_uses_the_sinh_kernel() {
        let chart = Chart::hyperbolic(2).unwrap();
        let wall = Hyperplane::new(chart, dvector![0.0, 1.0, 0.0], 0.0).unwrap();
        let witness = dvector![1.0f64.cosh(), -(1.0f64.sinh()), 0.0];
        let body = ConvexBody::polytope(chart, vec![wall], Some(witness)).unwrap();
        let ctx = TimelikeContext::funk(body).unwrap();
        let at = |t: f64| dvector![t.cosh(), t.sinh(), 0.0];
        let p = at(2.0);
        let q = at(1.0);
        let expected = (2.0f64.sinh() / 1.0f64.sinh()).ln();
        let ray_form = funk_distance(&ctx, &p, &q).unwrap();
        assert_relative_eq!(ray_form.distance, expected, max_relative = 1e-9);
        let variational = funk_distance_variational(&ctx, &p, &q).unwrap();
        assert_relative_eq!(variational.distance, expected, max_relative = 1e-9);
    }

    #[test]
    fn functional_forms_agree_on_the_halfplane() {
        let ctx = halfplane_ctx(1.0);
        let p = dvector![0.0, 0.0];
        let v = dvector![2.0, 0.0];
        let hit_form = funk_functional(&ctx, &p, &v).unwrap();
        assert_relative_eq!(hit_form.value, 2.0, max_relative = 1e-12);
        assert_relative_eq!(hit_form.forward_hit.unwrap(), 1.0, epsilon = 1e-12);
        let variational = funk_functional_variational(&ctx, &p, &v).unwrap();
        assert_relative_eq!(variational.value, 2.0, max_relative = 1e-12);
        assert!(matches!(
            funk_functional(&ctx, &p, &dvector![0.0, 1.0]),
            Err(Error::NotTimelikeDirection)
        ));
        assert_eq!(
            funk_functional(&ctx, &p, &dvector![0.0, 0.0]).unwrap().value,
            0.0
        );
    }

    #[test]
    fn hyperbolic_functional_uses_the_coth_slope() {
        let chart = Chart::hyperbolic(2).unwrap();
        let wall = Hyperplane::new(chart, dvector![0.0, 1.0, 0.0], 0.0).unwrap();
        let witness = dvector![1.0f64.cosh(), -(1.0f64.sinh()), 0.0];
        let body = ConvexBody::polytope(chart, vec![wall], Some(witness)).unwrap();
        let ctx = TimelikeContext::funk(body).unwrap();
        let p = dvector![2.0f64.cosh(), 2.0f64.sinh(), 0.0];
        let v = dvector![-3.0 * 2.0f64.sinh(), -3.0 * 2.0f64.cosh(), 0.0];
        let expected = 3.0 / 2.0f64.tanh();
        let hit_form = funk_functional(&ctx, &p, &v).unwrap();
        assert_relative_eq!(hit_form.value, expected, max_relative = 1e-9);
        assert_relative_eq!(hit_form.forward_hit.unwrap(), 2.0, epsilon = 1e-9);
        let variational = funk_functional_variational(&ctx, &p, &v).unwrap();
        assert_relative_eq!(variational.value, expected, max_relative = 1e-9);
    }

    #[test]
    fn dilation_sphere_sits_at_the_requested_radius() {
        let ctx = halfplane_ctx(1.0);
        let p = dvector![0.0, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = 2.0f64.ln();
        let samples = future_sphere_sample(&ctx, &p, r, 16, &mut rng).unwrap();
        assert_eq!(samples.len(), 16);
        for q in &samples {
            // Contracting the wall x = 1 toward the origin by half puts every
            // sample on x = 1/2.
            assert_relative_eq!(q[0], 0.5, epsilon = 1e-9);
            let check = funk_distance(&ctx, &p, q).unwrap();
            assert_relative_eq!(check.distance, r, epsilon = 1e-9);
        }
        assert!(matches!(
            future_sphere_sample(&ctx, &p, -1.0, 4, &mut rng),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn enlarging_the_body_never_shrinks_the_distance() {
        let inner = halfplane_ctx(1.0);
        let outer = halfplane_ctx(0.5);
        let p = dvector![0.0, 0.0];
        let q = dvector![0.25, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (small, large) = funk_monotonicity_check(&inner, &outer, &p, &q, &mut rng).unwrap();
        assert_relative_eq!(small, (4.0f64 / 3.0).ln(), max_relative = 1e-12);
        assert_relative_eq!(large, 2.0f64.ln(), max_relative = 1e-12);
        assert!(matches!(
            funk_monotonicity_check(&outer, &inner, &p, &q, &mut rng),
            Err(Error::NotNested)
        ));
    }
}
