//! Two-sided (past and future body) timelike distance.
//!
//! The distance is the sum of two one-sided legs: from the base point toward
//! the future body, and from the target point back toward the past body.
//! Equivalently it is the log of the kernel cross ratio of the two points
//! with the two boundary hits of their common geodesic; both forms are
//! implemented.

use crate::body::ConvexBody;
use crate::chart::{ChartKind, Point, Vector};
use crate::cross_ratio::chord_cross_ratio;
use crate::error::{Error, Result};
use crate::funk::{funk_distance, FinslerValue};
use crate::hyperplane::Hyperplane;
use crate::order::TimelikeContext;
use crate::ray::GeodesicRay;
use crate::tol;

/// A two-sided distance evaluation with its legs and boundary endpoints.
#[derive(Clone, Debug)]
pub struct HilbertValue {
    /// The distance itself, the sum of the two legs.
    pub distance: f64,
    /// Leg from the base point toward the future body.
    pub toward_future: f64,
    /// Leg from the target point back toward the past body.
    pub from_past: f64,
    /// Boundary point of the past body behind the base point.
    pub past_endpoint: Option<Point>,
    /// Boundary point of the future body beyond the target point.
    pub future_endpoint: Option<Point>,
}

impl HilbertValue {
    fn zero() -> Self {
        HilbertValue {
            distance: 0.0,
            toward_future: 0.0,
            from_past: 0.0,
            past_endpoint: None,
            future_endpoint: None,
        }
    }
}

fn require_two_sided(ctx: &TimelikeContext, op: &'static str) -> Result<()> {
    if ctx.past_body().is_none() {
        return Err(Error::UnsupportedContext {
            op,
            expected: "two-sided",
        });
    }
    Ok(())
}

/// Two-sided distance from `p` to `q` in leg form. Zero for coincident
/// points; `NotInFuture` when the pair is not ordered.
pub fn hilbert_distance(ctx: &TimelikeContext, p: &Point, q: &Point) -> Result<HilbertValue> {
    require_two_sided(ctx, "hilbert_distance")?;
    let chart = ctx.chart();
    chart.check_point(p)?;
    chart.check_point(q)?;
    if chart.distance(p, q) <= tol::SEPARATION_MARGIN {
        return Ok(HilbertValue::zero());
    }
    let chord = ctx.ordered_chord(p, q)?.ok_or(Error::NotInFuture)?;
    let back = chord.backward.as_ref().expect("two-sided chord");
    let t_f = chord.forward.t;
    let t_b = back.t;
    let d = chord.d;
    let toward_future = chart.kernel(t_f).ln() - chart.kernel(t_f - d).ln();
    let from_past = chart.kernel(t_b + d).ln() - chart.kernel(t_b).ln();
    Ok(HilbertValue {
        distance: toward_future + from_past,
        toward_future,
        from_past,
        past_endpoint: Some(back.point.clone()),
        future_endpoint: Some(chord.forward.point.clone()),
    })
}

/// Two-sided distance in cross-ratio form: the log of the kernel cross
/// ratio of the quadruple (past hit, base, target, future hit). Agrees with
/// the leg form on ordered pairs.
pub fn hilbert_distance_cross_ratio(
    ctx: &TimelikeContext,
    p: &Point,
    q: &Point,
) -> Result<f64> {
    require_two_sided(ctx, "hilbert_distance_cross_ratio")?;
    let chart = ctx.chart();
    chart.check_point(p)?;
    chart.check_point(q)?;
    if chart.distance(p, q) <= tol::SEPARATION_MARGIN {
        return Ok(0.0);
    }
    let chord = ctx.ordered_chord(p, q)?.ok_or(Error::NotInFuture)?;
    let back = chord.backward.as_ref().expect("two-sided chord");
    let ratio = chord_cross_ratio(chart, &back.point, p, q, &chord.forward.point)?;
    if ratio <= 0.0 {
        return Err(Error::DegenerateCrossRatio);
    }
    Ok(ratio.ln())
}

/// Two-sided directional functional at `p`: the tangent norm of `v` times
/// the sum of the log-kernel slopes at the forward crossing into the future
/// body and the backward crossing into the past body. Directions whose rays
/// miss a body, graze one, cross the wrong body first, or (on the sphere)
/// span at least a half turn are rejected as not timelike.
pub fn hilbert_functional(ctx: &TimelikeContext, p: &Point, v: &Vector) -> Result<FinslerValue> {
    require_two_sided(ctx, "hilbert_functional")?;
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
    let past = ctx.past_body().expect("two-sided context");
    let future = ctx.future_body();
    let ray = GeodesicRay::new(chart, p.clone(), v.clone())?;
    let forward = future
        .ray_first_hit(&ray)?
        .ok_or(Error::NotTimelikeDirection)?;
    if !forward.transversal {
        return Err(Error::NotTimelikeDirection);
    }
    if let Some(block) = past.ray_first_hit(&ray)? {
        if block.t < forward.t {
            return Err(Error::NotTimelikeDirection);
        }
    }
    let rev = ray.reversed();
    let backward = past
        .ray_first_hit(&rev)?
        .ok_or(Error::NotTimelikeDirection)?;
    if !backward.transversal {
        return Err(Error::NotTimelikeDirection);
    }
    if let Some(block) = future.ray_first_hit(&rev)? {
        if block.t < backward.t {
            return Err(Error::NotTimelikeDirection);
        }
    }
    if chart.kind() == ChartKind::Spherical
        && forward.t + backward.t >= std::f64::consts::PI - tol::LUNE_MARGIN
    {
        return Err(Error::NotTimelikeDirection);
    }
    let value = speed
        * (chart.log_kernel_derivative(forward.t) + chart.log_kernel_derivative(backward.t));
    Ok(FinslerValue {
        value,
        forward_hit: Some(forward.t),
        backward_hit: Some(backward.t),
    })
}

/// Closed form of the two-sided distance on the interval (-1, 1) between
/// coordinates `a` and `b`, positive when `a < b`.
pub fn strip_closed_form(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a.abs() >= 1.0 || b.abs() >= 1.0 {
        return Err(Error::OutOfDomain {
            what: "strip coordinates (must lie strictly between -1 and 1)",
        });
    }
    Ok((((a - 1.0) / (b - 1.0)) * ((b + 1.0) / (a + 1.0))).ln())
}

/// Evaluates the two-sided distance with the past body pushed to a wall at
/// coordinate `-a` alongside the one-sided distance for the same future
/// body, returning `(two sided, one sided)`. As the wall recedes the first
/// value approaches the second at rate `1/a`.
pub fn funk_limit_check(
    future: &ConvexBody,
    a: f64,
    p: &Point,
    q: &Point,
) -> Result<(f64, f64)> {
    let chart = future.chart();
    if chart.kind() != ChartKind::Euclidean {
        return Err(Error::UnsupportedChart {
            op: "funk_limit_check",
            chart: chart.kind(),
        });
    }
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::OutOfDomain {
            what: "wall coordinate (must be positive and finite)",
        });
    }
    let dim = chart.dim();
    let mut normal = Point::zeros(dim);
    normal[0] = 1.0;
    let wall = Hyperplane::new(chart, normal, -a)?;
    let mut witness = Point::zeros(dim);
    witness[0] = -a - 1.0;
    let past = ConvexBody::polytope(chart, vec![wall], Some(witness))?;
    let two_sided_ctx = TimelikeContext::hilbert(past, future.clone())?;
    let one_sided_ctx = TimelikeContext::funk(future.clone())?;
    let two_sided = hilbert_distance(&two_sided_ctx, p, q)?.distance;
    let one_sided = funk_distance(&one_sided_ctx, p, q)?.distance;
    Ok((two_sided, one_sided))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn strip_ctx() -> TimelikeContext {
        let chart = Chart::euclidean(2).unwrap();
        let past_face = Hyperplane::new(chart, dvector![1.0, 0.0], -1.0).unwrap();
        let future_face = Hyperplane::new(chart, dvector![-1.0, 0.0], -1.0).unwrap();
        let past =
            ConvexBody::polytope(chart, vec![past_face], Some(dvector![-2.0, 0.0])).unwrap();
        let future =
            ConvexBody::polytope(chart, vec![future_face], Some(dvector![2.0, 0.0])).unwrap();
        TimelikeContext::hilbert(past, future).unwrap()
    }

    #[test]
    fn strip_distance_hits_the_closed_form() {
        let ctx = strip_ctx();
        let p = dvector![0.0, 0.0];
        let q = dvector![0.5, 0.0];
        let value = hilbert_distance(&ctx, &p, &q).unwrap();
        assert_relative_eq!(value.distance, 3.0f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(value.toward_future, 2.0f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(value.from_past, 1.5f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(value.past_endpoint.unwrap()[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(value.future_endpoint.unwrap()[0], 1.0, epsilon = 1e-12);
        let cross = hilbert_distance_cross_ratio(&ctx, &p, &q).unwrap();
        assert_relative_eq!(cross, 3.0f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(
            strip_closed_form(0.0, 0.5).unwrap(),
            3.0f64.ln(),
            max_relative = 1e-12
        );
        assert!(matches!(
            hilbert_distance(&ctx, &q, &p),
            Err(Error::NotInFuture)
        ));
        assert_eq!(hilbert_distance(&ctx, &p, &p).unwrap().distance, 0.0);
        assert!(matches!(
            strip_closed_form(1.0, 0.5),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn strip_functional_sums_both_slopes() {
        let ctx = strip_ctx();
        let p = dvector![0.0, 0.0];
        let forward = hilbert_functional(&ctx, &p, &dvector![1.5, 0.0]).unwrap();
        assert_relative_eq!(forward.value, 3.0, max_relative = 1e-12);
        assert_relative_eq!(forward.forward_hit.unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(forward.backward_hit.unwrap(), 1.0, epsilon = 1e-12);
        assert!(matches!(
            hilbert_functional(&ctx, &p, &dvector![0.0, 1.0]),
            Err(Error::NotTimelikeDirection)
        ));
        // Off-center the two slopes differ: at x = 0.5 they are 1/(1/2) and
        // 1/(3/2).
        let off = hilbert_functional(&ctx, &dvector![0.5, 0.0], &dvector![1.0, 0.0]).unwrap();
        assert_relative_eq!(off.value, 2.0 + 2.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn spherical_legs_match_the_sine_kernel() {
        let chart = Chart::spherical(2).unwrap();
        let quarter = std::f64::consts::FRAC_PI_4;
        let past = ConvexBody::ball(chart, dvector![-1.0, 0.0, 0.0], quarter).unwrap();
        let future = ConvexBody::ball(chart, dvector![1.0, 0.0, 0.0], quarter).unwrap();
        let ctx = TimelikeContext::spherical_hilbert(past, future).unwrap();
        let on_meridian = |beta: f64| dvector![beta.sin(), beta.cos(), 0.0];
        let p = on_meridian(0.0);
        let q = on_meridian(0.3);
        let value = hilbert_distance(&ctx, &p, &q).unwrap();
        let expected = ((quarter + 0.3).sin() / (quarter - 0.3).sin()).ln();
        assert_relative_eq!(value.distance, expected, max_relative = 1e-9);
        let cross = hilbert_distance_cross_ratio(&ctx, &p, &q).unwrap();
        assert_relative_eq!(cross, expected, max_relative = 1e-9);
        // The functional at the midpoint between the caps sums two cot
        // slopes.
        let v = chart.project_tangent(&p, &dvector![1.0, 0.0, 0.0]);
        let fv = hilbert_functional(&ctx, &p, &v).unwrap();
        assert_relative_eq!(fv.value, 2.0 / quarter.tan(), max_relative = 1e-9);
    }

    #[test]
    fn hyperbolic_leg_and_cross_ratio_forms_agree() {
        let chart = Chart::hyperbolic(2).unwrap();
        let c = 2.0f64;
        let past_wall = Hyperplane::new(chart, dvector![0.0, 1.0, 0.0], 0.0).unwrap();
        // Kernel -sinh(t - c) along the axis: the wall crosses at t = c with
        // the interior side at larger t.
        let future_wall =
            Hyperplane::new(chart, dvector![-c.sinh(), -c.cosh(), 0.0], 0.0).unwrap();
        let at = |t: f64| dvector![t.cosh(), t.sinh(), 0.0];
        let past = ConvexBody::polytope(chart, vec![past_wall], Some(at(-1.0))).unwrap();
        let future =
            ConvexBody::polytope(chart, vec![future_wall], Some(at(c + 1.0))).unwrap();
        let ctx = TimelikeContext::hilbert(past, future).unwrap();
        let p = at(0.5);
        let q = at(1.0);
        let value = hilbert_distance(&ctx, &p, &q).unwrap();
        let expected = (1.5f64.sinh() / 0.5f64.sinh()).ln();
        assert_relative_eq!(value.distance, expected, max_relative = 1e-9);
        let cross = hilbert_distance_cross_ratio(&ctx, &p, &q).unwrap();
        assert_relative_eq!(cross, expected, max_relative = 1e-9);
    }

    #[test]
    fn receding_wall_recovers_the_one_sided_distance() {
        let chart = Chart::euclidean(2).unwrap();
        let face = Hyperplane::new(chart, dvector![-1.0, 0.0], -1.0).unwrap();
        let future = ConvexBody::polytope(chart, vec![face], Some(dvector![2.0, 0.0])).unwrap();
        let p = dvector![0.0, 0.0];
        let q = dvector![0.5, 0.0];
        let (near_two, one) = funk_limit_check(&future, 10.0, &p, &q).unwrap();
        let (far_two, one_again) = funk_limit_check(&future, 1e6, &p, &q).unwrap();
        assert_relative_eq!(one, 2.0f64.ln(), max_relative = 1e-12);
        assert_eq!(one, one_again);
        let near_gap = (near_two - one).abs();
        let far_gap = (far_two - one).abs();
        assert!(near_gap > far_gap);
        assert!(far_gap <= 1e-6, "gap {far_gap:e}");
        assert_relative_eq!(near_gap, (1.05f64 / 1.0).ln(), max_relative = 1e-6);
    }
}
