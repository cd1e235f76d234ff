//! Totally geodesic hyperplanes, the faces of polytope bodies.
//!
//! A hyperplane is stored by a normal form: the zero set of
//! `s(x) = <n, x> - c` in Euclidean space, of `s(x) = <u, x>` on the sphere
//! (a great hypersphere), and of `s(x) = <w, x>_M` on the hyperboloid with a
//! spacelike `w`. In all three charts `|s(x)|` equals the chart kernel of
//! the distance to the hyperplane: `d`, `sin d`, or `sinh d`. The raw value
//! is exposed so ratio formulas can consume it without inverse trig.
//!
//! Polytope faces use the interior-negative convention: `s(x) < 0` on the
//! body's interior.

use crate::chart::{minkowski_dot, Chart, ChartKind, Point, Vector};
use crate::error::{Error, Result};
use crate::tol;

#[derive(Clone, Debug)]
pub struct Hyperplane {
    chart: Chart,
    normal: Vector,
    offset: f64,
}

impl Hyperplane {
    /// Builds a hyperplane from a normal vector and an offset, normalizing
    /// the normal. Curved charts have no offset freedom (their hyperplanes
    /// pass through the origin of the ambient form), so a nonzero offset is
    /// rejected there. On the hyperbolic chart the normal must be spacelike,
    /// otherwise the zero set misses the upper sheet entirely.
    pub fn new(chart: Chart, normal: Vector, offset: f64) -> Result<Self> {
        chart.check_vector_len(&normal)?;
        if !offset.is_finite() {
            return Err(Error::NotFinite);
        }
        match chart.kind() {
            ChartKind::Euclidean => {
                let n = normal.norm();
                if n <= 1e-12 {
                    return Err(Error::DegenerateHyperplane);
                }
                Ok(Hyperplane {
                    chart,
                    normal: normal / n,
                    offset: offset / n,
                })
            }
            ChartKind::Spherical => {
                if offset != 0.0 {
                    return Err(Error::CurvedChartOffset);
                }
                let n = normal.norm();
                if n <= 1e-12 {
                    return Err(Error::DegenerateHyperplane);
                }
                Ok(Hyperplane {
                    chart,
                    normal: normal / n,
                    offset: 0.0,
                })
            }
            ChartKind::Hyperbolic => {
                if offset != 0.0 {
                    return Err(Error::CurvedChartOffset);
                }
                let m = minkowski_dot(&normal, &normal);
                if m <= 1e-12 {
                    return Err(Error::DegenerateHyperplane);
                }
                Ok(Hyperplane {
                    chart,
                    normal: normal / m.sqrt(),
                    offset: 0.0,
                })
            }
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Unit normal (in the chart's form).
    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// The signed kernel `s(x)`: negative on the interior side of a face,
    /// and with `|s(x)|` equal to the chart kernel of the distance from `x`
    /// to the hyperplane.
    pub fn signed_kernel(&self, x: &Point) -> f64 {
        match self.chart.kind() {
            ChartKind::Euclidean => self.normal.dot(x) - self.offset,
            ChartKind::Spherical => self.normal.dot(x),
            ChartKind::Hyperbolic => minkowski_dot(&self.normal, x),
        }
    }

    /// `k(d(x, plane))` where `k` is the chart kernel.
    pub fn kernel_distance(&self, x: &Point) -> f64 {
        self.signed_kernel(x).abs()
    }

    /// Geodesic distance from `x` to the hyperplane.
    pub fn distance(&self, x: &Point) -> f64 {
        self.distance_signed(x).abs()
    }

    /// Geodesic distance carrying the sign of the kernel, so faces report
    /// negative values on the interior side.
    pub fn distance_signed(&self, x: &Point) -> f64 {
        let s = self.signed_kernel(x);
        match self.chart.kind() {
            ChartKind::Euclidean => s,
            ChartKind::Spherical => s.clamp(-1.0, 1.0).asin(),
            ChartKind::Hyperbolic => s.asinh(),
        }
    }

    /// The same hyperplane with the opposite orientation.
    pub fn flipped(&self) -> Hyperplane {
        Hyperplane {
            chart: self.chart,
            normal: -&self.normal,
            offset: -self.offset,
        }
    }

    /// Whether two faces coincide as oriented hyperplanes, used to reject
    /// duplicate faces at construction time.
    pub fn approx_eq(&self, other: &Hyperplane) -> bool {
        (&self.normal - &other.normal).norm() <= tol::FACE_DEDUP
            && (self.offset - other.offset).abs() <= tol::FACE_DEDUP
    }
}
