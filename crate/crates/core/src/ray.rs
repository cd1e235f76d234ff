//! Unit-speed geodesic rays in each chart.

use crate::chart::{minkowski_dot, Chart, ChartKind, Point, Vector};
use crate::error::{Error, Result};
use crate::tol;

/// A unit-speed geodesic ray: base point plus unit tangent direction.
///
/// `point_at(t)` traces the geodesic for `t >= 0`; on the sphere the curve
/// is `2*pi`-periodic in `t`.
#[derive(Clone, Debug)]
pub struct GeodesicRay {
    chart: Chart,
    base: Point,
    dir: Vector,
}

impl GeodesicRay {
    /// Builds a ray from a base point and a direction vector. The direction
    /// is projected exactly onto the tangent space at the base and rescaled
    /// to unit speed; directions that are nearly normal to the chart (or
    /// nearly zero) are rejected as degenerate.
    pub fn new(chart: Chart, base: Point, dir: Vector) -> Result<Self> {
        let base = chart.normalize_point(base)?;
        chart.check_vector_len(&dir)?;
        let scale = chart.tangent_norm(&dir).max(dir.norm());
        if scale <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateRay);
        }
        let residual = chart.tangency_residual(&base, &dir);
        if residual > tol::CHART_MEMBERSHIP * scale {
            return Err(Error::NotTangent { residual });
        }
        let projected = chart.project_tangent(&base, &dir);
        let speed = chart.tangent_norm(&projected);
        if speed <= 1e-12 * scale {
            return Err(Error::DegenerateRay);
        }
        Ok(GeodesicRay {
            chart,
            base,
            dir: projected / speed,
        })
    }

    /// The ray from `p` through `q`, together with the distance `d(p, q)` at
    /// which `q` is reached. Fails for coincident points, and on the sphere
    /// for antipodal ones where the direction is not determined.
    pub fn through(chart: Chart, p: &Point, q: &Point) -> Result<(Self, f64)> {
        let p = chart.normalize_point(p.clone())?;
        let q = chart.normalize_point(q.clone())?;
        let d = chart.distance(&p, &q);
        if d < tol::SEPARATION_MARGIN {
            return Err(Error::DegenerateRay);
        }
        let dir = match chart.kind() {
            ChartKind::Euclidean => (&q - &p) / d,
            ChartKind::Spherical => {
                if std::f64::consts::PI - d < 1e-9 {
                    return Err(Error::AmbiguousGeodesic);
                }
                let u = &q - &p * p.dot(&q);
                let n = u.norm();
                u / n
            }
            ChartKind::Hyperbolic => {
                let c = minkowski_dot(&p, &q);
                // c = -cosh d <= -1; the tangent at p toward q has norm
                // sqrt(c^2 - 1) = sinh d before rescaling.
                let u = &q + &p * c;
                u / (c * c - 1.0).max(0.0).sqrt().max(f64::MIN_POSITIVE)
            }
        };
        let ray = GeodesicRay {
            chart,
            base: p,
            dir,
        };
        Ok((ray, d))
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    /// Unit tangent direction at the base point.
    pub fn dir(&self) -> &Vector {
        &self.dir
    }

    /// The point reached after geodesic parameter `t`.
    pub fn point_at(&self, t: f64) -> Point {
        match self.chart.kind() {
            ChartKind::Euclidean => &self.base + &self.dir * t,
            ChartKind::Spherical => &self.base * t.cos() + &self.dir * t.sin(),
            ChartKind::Hyperbolic => &self.base * t.cosh() + &self.dir * t.sinh(),
        }
    }

    /// Unit tangent vector at parameter `t`.
    pub fn tangent_at(&self, t: f64) -> Vector {
        match self.chart.kind() {
            ChartKind::Euclidean => self.dir.clone(),
            ChartKind::Spherical => &self.dir * t.cos() - &self.base * t.sin(),
            ChartKind::Hyperbolic => &self.dir * t.cosh() + &self.base * t.sinh(),
        }
    }

    /// The ray with the same base and the opposite direction.
    pub fn reversed(&self) -> GeodesicRay {
        GeodesicRay {
            chart: self.chart,
            base: self.base.clone(),
            dir: -&self.dir,
        }
    }
}
