//! Constant-curvature charts and their metric primitives.
//!
//! Three chart kinds are supported:
//!
//! * Euclidean space `R^n`, points are plain coordinate vectors;
//! * the unit sphere `S^n` embedded in `R^{n+1}`;
//! * the upper sheet of the unit hyperboloid `<x,x>_M = -1` in Minkowski
//!   space with signature `(-,+,...,+)` and `x_0 > 0`.
//!
//! Every metric quantity of the crate reduces to the chart's ratio kernel:
//! the distance from a point to a hyperplane `d` enters formulas through
//! `k(d)`, which is `d` itself, `sin d`, or `sinh d` depending on the chart.
//! Hyperplane queries therefore expose the raw pairing (which already equals
//! `sin d` or `sinh d`) so no inverse trigonometric round trip is needed.

use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Ambient coordinates of a chart point.
pub type Point = DVector<f64>;
/// Ambient coordinates of a direction or tangent vector.
pub type Vector = DVector<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ChartKind::Euclidean => "euclidean",
            ChartKind::Spherical => "spherical",
            ChartKind::Hyperbolic => "hyperbolic",
        };
        f.write_str(name)
    }
}

/// A chart kind together with the geometric dimension `n >= 1`.
///
/// Spherical and hyperbolic points carry `n + 1` ambient coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    kind: ChartKind,
    dim: usize,
}

/// Minkowski pairing with signature `(-,+,...,+)`.
pub fn minkowski_dot(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = -x[0] * y[0];
    for i in 1..x.len() {
        acc += x[i] * y[i];
    }
    acc
}

fn all_finite(v: &DVector<f64>) -> bool {
    v.iter().all(|c| c.is_finite())
}

impl Chart {
    pub fn new(kind: ChartKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::OutOfDomain {
                what: "chart dimension",
            });
        }
        Ok(Chart { kind, dim })
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Chart::new(ChartKind::Euclidean, dim)
    }

    pub fn spherical(dim: usize) -> Result<Self> {
        Chart::new(ChartKind::Spherical, dim)
    }

    pub fn hyperbolic(dim: usize) -> Result<Self> {
        Chart::new(ChartKind::Hyperbolic, dim)
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    /// Geometric dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of ambient coordinate vectors: `n` for Euclidean charts,
    /// `n + 1` for spherical and hyperbolic ones.
    pub fn ambient_len(&self) -> usize {
        match self.kind {
            ChartKind::Euclidean => self.dim,
            _ => self.dim + 1,
        }
    }

    pub fn check_vector_len(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.ambient_len() {
            return Err(Error::CoordinateLength {
                want: self.ambient_len(),
                got: v.len(),
            });
        }
        if !all_finite(v) {
            return Err(Error::NotFinite);
        }
        Ok(())
    }

    /// Residual of the chart's defining constraint at `x` (zero for
    /// Euclidean charts).
    pub fn membership_residual(&self, x: &Point) -> f64 {
        match self.kind {
            ChartKind::Euclidean => 0.0,
            ChartKind::Spherical => (x.dot(x) - 1.0).abs(),
            ChartKind::Hyperbolic => {
                let q = (minkowski_dot(x, x) + 1.0).abs();
                if x[0] > 0.0 {
                    q
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        self.check_vector_len(x)?;
        let residual = self.membership_residual(x);
        if residual > tol::CHART_MEMBERSHIP {
            return Err(Error::OffChart { residual });
        }
        Ok(())
    }

    /// Validates `x` against the chart constraint and renormalizes it onto
    /// the constraint surface, so downstream arithmetic starts from a point
    /// that satisfies the constraint to machine precision.
    pub fn normalize_point(&self, x: Point) -> Result<Point> {
        self.check_point(&x)?;
        Ok(match self.kind {
            ChartKind::Euclidean => x,
            ChartKind::Spherical => {
                let n = x.norm();
                x / n
            }
            ChartKind::Hyperbolic => {
                let m = (-minkowski_dot(&x, &x)).max(f64::MIN_POSITIVE);
                x / m.sqrt()
            }
        })
    }

    /// Geodesic distance between two points of the chart.
    ///
    /// The spherical and hyperbolic branches use the chord-based forms
    /// `2 asin(|x-y|/2)` and `2 asinh(sqrt(<x-y,x-y>_M)/2)`, which stay
    /// accurate for nearby points where `acos`/`acosh` of the pairing lose
    /// precision.
    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        match self.kind {
            ChartKind::Euclidean => (x - y).norm(),
            ChartKind::Spherical => {
                let half = 0.5 * (x - y).norm();
                2.0 * half.clamp(-1.0, 1.0).asin()
            }
            ChartKind::Hyperbolic => {
                let d = x - y;
                let q = minkowski_dot(&d, &d).max(0.0);
                2.0 * (0.5 * q.sqrt()).asinh()
            }
        }
    }

    /// Ratio kernel of the chart: `k(d) = d`, `sin d`, or `sinh d`.
    pub fn kernel(&self, d: f64) -> f64 {
        match self.kind {
            ChartKind::Euclidean => d,
            ChartKind::Spherical => d.sin(),
            ChartKind::Hyperbolic => d.sinh(),
        }
    }

    /// Logarithmic derivative of the ratio kernel: `1/d`, `cot d`, `coth d`.
    ///
    /// This is the weight that turns a boundary-hit parameter into the
    /// Finsler functional, and integrating it along a chord reproduces the
    /// log-ratio distance exactly.
    pub fn log_kernel_derivative(&self, d: f64) -> f64 {
        match self.kind {
            ChartKind::Euclidean => 1.0 / d,
            ChartKind::Spherical => 1.0 / d.tan(),
            ChartKind::Hyperbolic => 1.0 / d.tanh(),
        }
    }

    /// The bilinear form pairing normals with vectors: the Euclidean dot
    /// product, or the Minkowski pairing on the hyperbolic chart.
    pub fn form_dot(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        match self.kind {
            ChartKind::Hyperbolic => minkowski_dot(x, y),
            _ => x.dot(y),
        }
    }

    /// Component of `v` tangent to the chart at `p`.
    pub fn project_tangent(&self, p: &Point, v: &Vector) -> Vector {
        match self.kind {
            ChartKind::Euclidean => v.clone(),
            ChartKind::Spherical => v - p * p.dot(v),
            ChartKind::Hyperbolic => v + p * minkowski_dot(p, v),
        }
    }

    /// Norm of a tangent vector in the chart's Riemannian metric. The
    /// hyperbolic tangent spaces are spacelike, so the Minkowski square is
    /// nonnegative there.
    pub fn tangent_norm(&self, v: &Vector) -> f64 {
        match self.kind {
            ChartKind::Hyperbolic => minkowski_dot(v, v).max(0.0).sqrt(),
            _ => v.norm(),
        }
    }

    /// `|<p, v>|` in the chart form, the quantity that must vanish for `v`
    /// to be tangent at `p`. Always zero on Euclidean charts.
    pub fn tangency_residual(&self, p: &Point, v: &Vector) -> f64 {
        match self.kind {
            ChartKind::Euclidean => 0.0,
            ChartKind::Spherical => p.dot(v).abs(),
            ChartKind::Hyperbolic => minkowski_dot(p, v).abs(),
        }
    }
}

/// Lifts Klein-ball coordinates `y` (with `|y| < 1`) to the hyperboloid
/// sheet: `x = (1, y) / sqrt(1 - |y|^2)`.
pub fn klein_to_hyperboloid(y: &[f64]) -> Result<Point> {
    let r2: f64 = y.iter().map(|c| c * c).sum();
    if !r2.is_finite() {
        return Err(Error::NotFinite);
    }
    if r2 >= 1.0 {
        return Err(Error::OutOfDomain {
            what: "Klein-ball point",
        });
    }
    let s = (1.0 - r2).sqrt();
    let mut coords = Vec::with_capacity(y.len() + 1);
    coords.push(1.0 / s);
    coords.extend(y.iter().map(|c| c / s));
    Ok(DVector::from_vec(coords))
}

/// Projects a hyperboloid point to Klein-ball coordinates `x_i / x_0`.
pub fn hyperboloid_to_klein(x: &Point) -> Vec<f64> {
    x.iter().skip(1).map(|c| c / x[0]).collect()
}
