//! Cross ratios of aligned quadruples of points.
//!
//! For four points `a, p, q, b` on a common geodesic, the cross ratio used
//! throughout this crate is
//!
//! ```text
//! [a, p; q, b] = ( k(d(a,q)) * k(d(p,b)) ) / ( k(d(a,p)) * k(d(q,b)) )
//! ```
//!
//! with `k` the chart kernel (identity, sine, or hyperbolic sine). When the
//! quadruple is ordered along the geodesic its logarithm is the Hilbert
//! distance from `p` to `q` with boundary anchors `a` (behind `p`) and `b`
//! (beyond `q`). These functions recompute the ratio purely from point
//! coordinates, independently of any boundary-hit bookkeeping, so they can
//! cross-check the metric code.

use nalgebra::DMatrix;

use crate::chart::{minkowski_dot, Chart, ChartKind, Point};
use crate::error::{Error, Result};
use crate::tol;

fn ratio(num: [f64; 2], den: [f64; 2]) -> Result<f64> {
    let d = den[0] * den[1];
    if d.abs() <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateCrossRatio);
    }
    Ok(num[0] * num[1] / d)
}

/// Cross ratio of four collinear points in Euclidean space, computed from
/// signed coordinates along their common line.
pub fn affine_cross_ratio(a: &Point, p: &Point, q: &Point, b: &Point) -> Result<f64> {
    let pts = [a, p, q, b];
    // Anchor the line on the farthest pair, so short gaps between the other
    // points do not degrade the fitted direction.
    let (mut i0, mut i1, mut best) = (0usize, 1usize, -1.0f64);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = (pts[i] - pts[j]).norm();
            if d > best {
                best = d;
                i0 = i;
                i1 = j;
            }
        }
    }
    if best <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateCrossRatio);
    }
    let origin = pts[i0];
    let u = (pts[i1] - pts[i0]) / best;
    let mut t = [0.0f64; 4];
    for (slot, x) in t.iter_mut().zip(pts.iter()) {
        let rel = *x - origin;
        let along = rel.dot(&u);
        let residual = (rel - &u * along).norm();
        if residual > tol::COPLANARITY * best.max(1.0) {
            return Err(Error::NotCollinear { residual });
        }
        *slot = along;
    }
    ratio([t[2] - t[0], t[3] - t[1]], [t[1] - t[0], t[3] - t[2]])
}

/// Relative thickness of the quadruple outside its best-fit plane through
/// the origin: third singular value over the first.
fn planar_span_residual(pts: [&Point; 4]) -> f64 {
    let n = pts[0].len();
    let mut m = DMatrix::<f64>::zeros(4, n);
    for (r, p) in pts.iter().enumerate() {
        for c in 0..n {
            m[(r, c)] = p[c];
        }
    }
    let sv = m.singular_values();
    if sv[0] <= f64::MIN_POSITIVE {
        return f64::INFINITY;
    }
    if sv.len() < 3 {
        return 0.0;
    }
    sv[2] / sv[0]
}

/// `sin d(x, y)` for unit vectors, via the product form that stays accurate
/// near both `d = 0` and `d = pi`.
fn sine_of_arc(x: &Point, y: &Point) -> f64 {
    let c = x.dot(y).clamp(-1.0, 1.0);
    ((1.0 - c) * (1.0 + c)).sqrt()
}

/// Cross ratio with sine kernel for four points on a common great circle.
///
/// The sines are unsigned, so the value is insensitive to which of the two
/// arcs between consecutive points is meant; ordered quadruples give the
/// Hilbert ratio directly.
pub fn spherical_cross_ratio(a: &Point, p: &Point, q: &Point, b: &Point) -> Result<f64> {
    let residual = planar_span_residual([a, p, q, b]);
    if residual > tol::COPLANARITY {
        return Err(Error::NotCocircular { residual });
    }
    ratio(
        [sine_of_arc(a, q), sine_of_arc(p, b)],
        [sine_of_arc(a, p), sine_of_arc(q, b)],
    )
}

/// `sinh d(x, y)` for hyperboloid points, via the chord form.
fn sinh_of_arc(x: &Point, y: &Point) -> f64 {
    let d = x - y;
    let h2 = minkowski_dot(&d, &d).max(0.0);
    // sinh(2 asinh(h/2)) = h * sqrt(1 + h^2/4).
    h2.sqrt() * (1.0 + 0.25 * h2).sqrt()
}

/// Kernel cross ratio for an aligned quadruple in any chart.
pub fn chord_cross_ratio(chart: Chart, a: &Point, p: &Point, q: &Point, b: &Point) -> Result<f64> {
    match chart.kind() {
        ChartKind::Euclidean => affine_cross_ratio(a, p, q, b),
        ChartKind::Spherical => spherical_cross_ratio(a, p, q, b),
        ChartKind::Hyperbolic => {
            let residual = planar_span_residual([a, p, q, b]);
            if residual > tol::COPLANARITY {
                return Err(Error::NotCollinear { residual });
            }
            ratio(
                [sinh_of_arc(a, q), sinh_of_arc(p, b)],
                [sinh_of_arc(a, p), sinh_of_arc(q, b)],
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ray::GeodesicRay;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    #[test]
    fn affine_quadruple_on_the_unit_interval() {
        let a = dvector![-1.0, 0.0];
        let p = dvector![0.0, 0.0];
        let q = dvector![0.5, 0.0];
        let b = dvector![1.0, 0.0];
        let cr = affine_cross_ratio(&a, &p, &q, &b).unwrap();
        assert_relative_eq!(cr, 3.0, epsilon = 1e-15);
    }

    #[test]
    fn affine_rejects_bent_quadruples_and_repeats() {
        let a = dvector![0.0, 0.0];
        let p = dvector![1.0, 0.0];
        let q = dvector![2.0, 1.0];
        let b = dvector![3.0, 0.0];
        assert!(matches!(
            affine_cross_ratio(&a, &p, &q, &b),
            Err(Error::NotCollinear { .. })
        ));
        let q2 = dvector![2.0, 0.0];
        assert!(matches!(
            affine_cross_ratio(&a, &a, &q2, &b),
            Err(Error::DegenerateCrossRatio)
        ));
    }

    #[test]
    fn spherical_quadruple_at_named_arcs() {
        // Arcs 0, pi/6, pi/3, pi/2 along the equator:
        // (sin(pi/3) / sin(pi/6))^2 = 3.
        let at = |t: f64| dvector![t.cos(), t.sin(), 0.0];
        let cr = spherical_cross_ratio(
            &at(0.0),
            &at(std::f64::consts::FRAC_PI_6),
            &at(std::f64::consts::FRAC_PI_3),
            &at(std::f64::consts::FRAC_PI_2),
        )
        .unwrap();
        assert_relative_eq!(cr, 3.0, epsilon = 1e-14);
        assert!(matches!(
            spherical_cross_ratio(&at(0.0), &at(0.3), &dvector![0.0, 0.0, 1.0], &at(0.9)),
            Err(Error::NotCocircular { .. })
        ));
    }

    #[test]
    fn hyperbolic_quadruple_matches_the_sinh_formula() {
        let chart = Chart::hyperbolic(2).unwrap();
        let ray = GeodesicRay::new(chart, dvector![1.0, 0.0, 0.0], dvector![0.0, 0.8, 0.6]).unwrap();
        let (ta, tp, tq, tb) = (0.0, 0.4, 1.1, 1.9);
        let cr = chord_cross_ratio(
            chart,
            &ray.point_at(ta),
            &ray.point_at(tp),
            &ray.point_at(tq),
            &ray.point_at(tb),
        )
        .unwrap();
        let oracle = ((tq - ta).sinh() * (tb - tp).sinh()) / ((tp - ta).sinh() * (tb - tq).sinh());
        assert_relative_eq!(cr, oracle, epsilon = 1e-12);
    }

    #[test]
    fn euclidean_chord_form_agrees_with_the_affine_form() {
        let chart = Chart::euclidean(3).unwrap();
        let base = dvector![0.2, -0.1, 0.4];
        let dir = dvector![1.0, 2.0, -0.5];
        let at = |t: f64| &base + &dir * t;
        let cr = chord_cross_ratio(chart, &at(-1.0), &at(0.0), &at(0.5), &at(1.0)).unwrap();
        assert_relative_eq!(cr, 3.0, epsilon = 1e-12);
    }
}
