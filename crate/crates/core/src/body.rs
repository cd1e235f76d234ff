//! Convex bodies and their ray, separator, and ratio queries.
//!
//! A body is either an h-polytope (intersection of the interior-negative
//! half-spaces of a finite face list) or a geodesic ball (Euclidean ball,
//! spherical cap of radius below a quarter turn, hyperbolic ball). Every
//! body stores an interior witness point; spherical bodies additionally
//! carry a certified open-hemisphere direction.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::{Chart, ChartKind, Point, Vector};
use crate::error::{Error, Result};
use crate::hyperplane::Hyperplane;
use crate::ray::GeodesicRay;
use crate::tol;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Geometric payload of a convex body.
#[derive(Clone, Debug)]
pub enum BodyShape {
    /// Intersection of the negative sides of a finite list of hyperplanes.
    Polytope { faces: Vec<Hyperplane> },
    /// Geodesic ball around `center`. On the sphere the radius must stay
    /// strictly below a quarter turn so the cap is convex and fits in an
    /// open hemisphere.
    Ball { center: Point, radius: f64 },
}

/// Classification of a point against a body, using a boundary band of
/// width [`tol::BOUNDARY_BAND`] in signed geodesic distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

/// A crossing of a geodesic ray with a body boundary.
#[derive(Clone, Debug)]
pub struct RayHit {
    /// Ray parameter (arc length) of the crossing.
    pub t: f64,
    /// Parameter where the ray leaves the body closure; equals `t` for exit
    /// hits and grazes, and is infinite when the body is unbounded in the
    /// ray direction.
    pub t_exit: f64,
    /// Crossing point on the boundary.
    pub point: Point,
    /// True when the ray meets the boundary at a genuinely nonzero angle and
    /// traverses an interior segment of positive length.
    pub transversal: bool,
    /// Supporting hyperplane of the body at the crossing point.
    pub support: Hyperplane,
    /// Index of the supporting face when the body is a polytope.
    pub face_index: Option<usize>,
}

/// Family of hyperplanes separating an exterior point from a body.
#[derive(Clone, Debug)]
pub enum SeparatorFamily {
    /// Indices into the polytope's face list whose planes separate the point
    /// with a strict margin.
    Faces(Vec<usize>),
    /// For balls the family is the continuum of tangent planes visible from
    /// the apex; individual members are tested with
    /// [`ConvexBody::is_separating_contact`].
    BallTangents { apex: Point },
}

/// Value and argmin of the separator log-ratio between two exterior points.
#[derive(Clone, Debug)]
pub struct RatioInfimum {
    /// Infimum of `ln(dist(p, plane) / dist(q, plane))` over the separating
    /// family of `q`, with distances passed through the chart kernel.
    pub value: f64,
    /// Minimizing hyperplane, absent only in the coincident-point case.
    pub argmin: Option<Hyperplane>,
    /// Face index of the minimizer for polytopes.
    pub face_index: Option<usize>,
}

/// Log-ratio infima over three polytope face families, used to probe how the
/// choice of family changes the value on unordered point pairs.
#[derive(Clone, Debug)]
pub struct RatioInfimumDiagnostic {
    /// Infimum over the faces separating the target point `q`.
    pub over_target_family: f64,
    /// Infimum over the faces separating the base point `p`.
    pub over_base_family: f64,
    /// Infimum over every face at positive kernel distance from `q`.
    pub over_all_faces: f64,
}

/// Convex body with a validated interior witness.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    chart: Chart,
    shape: BodyShape,
    witness: Point,
    hemisphere: Option<Point>,
}

impl ConvexBody {
    /// Builds an h-polytope from interior-negative faces. When no witness is
    /// given, an interior point is searched with a relaxation scheme; a given
    /// witness is validated against a minimum clearance instead.
    pub fn polytope(chart: Chart, faces: Vec<Hyperplane>, witness: Option<Point>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::OutOfDomain {
                what: "polytope face list (must be nonempty)",
            });
        }
        for face in &faces {
            if face.chart() != chart {
                return Err(Error::ChartMismatch);
            }
        }
        for i in 0..faces.len() {
            for j in (i + 1)..faces.len() {
                if faces[i].approx_eq(&faces[j]) {
                    return Err(Error::DuplicateFace { first: i, second: j });
                }
            }
        }
        let witness = match witness {
            Some(w) => {
                let w = chart.normalize_point(w)?;
                let clearance = faces
                    .iter()
                    .map(|f| -f.signed_kernel(&w))
                    .fold(f64::INFINITY, f64::min);
                if !(clearance >= tol::WITNESS_MARGIN) {
                    return Err(Error::InvalidWitness { clearance });
                }
                w
            }
            None => find_polytope_witness(chart, &faces)?,
        };
        let mut body = ConvexBody {
            chart,
            shape: BodyShape::Polytope { faces },
            witness,
            hemisphere: None,
        };
        if chart.kind() == ChartKind::Spherical {
            body.hemisphere = Some(body.certify_hemisphere()?);
        }
        Ok(body)
    }

    /// Builds a geodesic ball. Spherical caps must have radius strictly
    /// between zero and a quarter turn.
    pub fn ball(chart: Chart, center: Point, radius: f64) -> Result<Self> {
        let center = chart.normalize_point(center)?;
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::OutOfDomain {
                what: "ball radius (must be positive and finite)",
            });
        }
        if chart.kind() == ChartKind::Spherical
            && radius > std::f64::consts::FRAC_PI_2 - tol::CHART_MEMBERSHIP
        {
            return Err(Error::OutOfDomain {
                what: "spherical cap radius (must stay below a quarter turn)",
            });
        }
        let hemisphere = match chart.kind() {
            ChartKind::Spherical => Some(center.clone()),
            _ => None,
        };
        Ok(ConvexBody {
            chart,
            witness: center.clone(),
            shape: BodyShape::Ball { center, radius },
            hemisphere,
        })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn shape(&self) -> &BodyShape {
        &self.shape
    }

    /// A validated interior point (the center for balls).
    pub fn witness(&self) -> &Point {
        &self.witness
    }

    /// Certified open-hemisphere direction for spherical bodies.
    pub fn hemisphere(&self) -> Option<&Point> {
        self.hemisphere.as_ref()
    }

    /// Face list when the body is a polytope.
    pub fn faces(&self) -> Option<&[Hyperplane]> {
        match &self.shape {
            BodyShape::Polytope { faces } => Some(faces),
            BodyShape::Ball { .. } => None,
        }
    }

    /// Signed geodesic distance to the boundary: negative inside, positive
    /// outside. For polytopes this is the maximum of the per-face signed
    /// distances.
    pub fn signed_distance(&self, x: &Point) -> Result<f64> {
        self.chart.check_point(x)?;
        match &self.shape {
            BodyShape::Ball { center, radius } => Ok(self.chart.distance(x, center) - radius),
            BodyShape::Polytope { faces } => {
                let mut worst = f64::NEG_INFINITY;
                for face in faces {
                    worst = worst.max(face.distance_signed(x));
                }
                Ok(worst)
            }
        }
    }

    /// Classifies a point against the body with a boundary band.
    pub fn contains(&self, x: &Point) -> Result<Containment> {
        let s = self.signed_distance(x)?;
        Ok(if s < -tol::BOUNDARY_BAND {
            Containment::Interior
        } else if s > tol::BOUNDARY_BAND {
            Containment::Exterior
        } else {
            Containment::Boundary
        })
    }

    /// First boundary crossing of a ray whose base point is exterior.
    /// Returns `None` when the ray misses the body. Tangential grazes are
    /// reported as hits with `transversal == false`.
    pub fn ray_first_hit(&self, ray: &GeodesicRay) -> Result<Option<RayHit>> {
        if ray.chart() != self.chart {
            return Err(Error::ChartMismatch);
        }
        if self.contains(ray.base())? != Containment::Exterior {
            return Err(Error::PointNotExterior { role: "ray base" });
        }
        match &self.shape {
            BodyShape::Ball { center, radius } => self.ball_first_hit(ray, center, *radius),
            BodyShape::Polytope { faces } => match self.chart.kind() {
                ChartKind::Euclidean | ChartKind::Hyperbolic => {
                    self.interval_first_hit(ray, faces)
                }
                ChartKind::Spherical => self.circle_first_hit(ray, faces),
            },
        }
    }

    /// Boundary crossing where a ray based at an interior point leaves the
    /// body. Returns `None` when the body is unbounded in that direction.
    pub fn boundary_exit(&self, ray: &GeodesicRay) -> Result<Option<RayHit>> {
        if ray.chart() != self.chart {
            return Err(Error::ChartMismatch);
        }
        if self.contains(ray.base())? != Containment::Interior {
            return Err(Error::OutOfDomain {
                what: "boundary-exit ray base (must be interior)",
            });
        }
        match &self.shape {
            BodyShape::Ball { center, radius } => self.ball_boundary_exit(ray, center, *radius),
            BodyShape::Polytope { faces } => match self.chart.kind() {
                ChartKind::Euclidean | ChartKind::Hyperbolic => {
                    self.interval_boundary_exit(ray, faces)
                }
                ChartKind::Spherical => self.circle_boundary_exit(ray, faces),
            },
        }
    }

    /// Supporting hyperplane at a boundary point, oriented interior-negative.
    pub fn tangent_plane_at(&self, b: &Point) -> Result<Hyperplane> {
        self.chart.check_point(b)?;
        match &self.shape {
            BodyShape::Ball { center, radius } => {
                let d = self.chart.distance(b, center);
                if (d - radius).abs() > 16.0 * tol::BOUNDARY_BAND {
                    return Err(Error::OutOfDomain {
                        what: "tangent point (not on the ball boundary)",
                    });
                }
                ball_tangent_plane(self.chart, center, b)
            }
            BodyShape::Polytope { faces } => {
                let mut best = 0usize;
                let mut best_val = f64::NEG_INFINITY;
                for (i, face) in faces.iter().enumerate() {
                    let s = face.signed_kernel(b);
                    if s > best_val {
                        best_val = s;
                        best = i;
                    }
                }
                if best_val.abs() > 16.0 * tol::BOUNDARY_BAND {
                    return Err(Error::OutOfDomain {
                        what: "tangent point (not on the polytope boundary)",
                    });
                }
                Ok(faces[best].clone())
            }
        }
    }

    /// Family of hyperplanes separating an exterior point from the body with
    /// a strict margin. Interior or boundary input is rejected.
    pub fn separating_hyperplanes(&self, x: &Point) -> Result<SeparatorFamily> {
        if self.contains(x)? != Containment::Exterior {
            return Err(Error::EmptySeparatorFamily);
        }
        match &self.shape {
            BodyShape::Ball { .. } => Ok(SeparatorFamily::BallTangents { apex: x.clone() }),
            BodyShape::Polytope { faces } => {
                let idx: Vec<usize> = faces
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.signed_kernel(x) > tol::SEPARATION_MARGIN)
                    .map(|(i, _)| i)
                    .collect();
                if idx.is_empty() {
                    return Err(Error::EmptySeparatorFamily);
                }
                Ok(SeparatorFamily::Faces(idx))
            }
        }
    }

    /// True when the tangent plane at boundary point `b` separates the
    /// exterior point `x` from the body with a strict margin.
    pub fn is_separating_contact(&self, x: &Point, b: &Point) -> Result<bool> {
        let plane = self.tangent_plane_at(b)?;
        Ok(plane.signed_kernel(x) > tol::SEPARATION_MARGIN)
    }

    /// Infimum over the separating family of `q` of the kernel log-ratio
    /// `ln(dist(p, plane)) - ln(dist(q, plane))`, with the minimizer.
    /// Both points must be exterior; coincident points give zero.
    pub fn ratio_infimum(&self, p: &Point, q: &Point) -> Result<RatioInfimum> {
        self.chart.check_point(p)?;
        self.chart.check_point(q)?;
        if self.chart.distance(p, q) <= tol::SEPARATION_MARGIN {
            return Ok(RatioInfimum {
                value: 0.0,
                argmin: None,
                face_index: None,
            });
        }
        if self.contains(p)? != Containment::Exterior {
            return Err(Error::PointNotExterior {
                role: "ratio base point",
            });
        }
        match &self.shape {
            BodyShape::Polytope { faces } => {
                let family = match self.separating_hyperplanes(q)? {
                    SeparatorFamily::Faces(idx) => idx,
                    SeparatorFamily::BallTangents { .. } => unreachable!(),
                };
                let (value, face_index) = ratio_over_faces(faces, &family, p, q)?;
                Ok(RatioInfimum {
                    value,
                    argmin: face_index.map(|i| faces[i].clone()),
                    face_index,
                })
            }
            BodyShape::Ball { .. } => {
                if self.contains(q)? != Containment::Exterior {
                    return Err(Error::EmptySeparatorFamily);
                }
                let (ray, _) = GeodesicRay::through(self.chart, p, q)?;
                let hit = self.ray_first_hit(&ray)?.ok_or(Error::NoBoundaryHit)?;
                let kp = hit.support.kernel_distance(p);
                let kq = hit.support.kernel_distance(q);
                if kq <= f64::MIN_POSITIVE || kp <= f64::MIN_POSITIVE {
                    return Err(Error::NullChord);
                }
                Ok(RatioInfimum {
                    value: kp.ln() - kq.ln(),
                    argmin: Some(hit.support),
                    face_index: None,
                })
            }
        }
    }

    /// Kernel log-ratio infima over three face families of a polytope:
    /// the separators of `q`, the separators of `p`, and all faces.
    pub fn ratio_infimum_diagnostic(&self, p: &Point, q: &Point) -> Result<RatioInfimumDiagnostic> {
        let faces = match &self.shape {
            BodyShape::Polytope { faces } => faces,
            BodyShape::Ball { .. } => {
                return Err(Error::UnsupportedRepresentation {
                    op: "ratio_infimum_diagnostic",
                })
            }
        };
        self.chart.check_point(p)?;
        self.chart.check_point(q)?;
        let family_q = match self.separating_hyperplanes(q)? {
            SeparatorFamily::Faces(idx) => idx,
            SeparatorFamily::BallTangents { .. } => unreachable!(),
        };
        let family_p = match self.separating_hyperplanes(p)? {
            SeparatorFamily::Faces(idx) => idx,
            SeparatorFamily::BallTangents { .. } => unreachable!(),
        };
        let all: Vec<usize> = (0..faces.len())
            .filter(|&i| faces[i].kernel_distance(q) > tol::SEPARATION_MARGIN)
            .collect();
        let (over_target_family, _) = ratio_over_faces(faces, &family_q, p, q)?;
        let (over_base_family, _) = ratio_over_faces(faces, &family_p, p, q)?;
        let (over_all_faces, _) = ratio_over_faces(faces, &all, p, q)?;
        Ok(RatioInfimumDiagnostic {
            over_target_family,
            over_base_family,
            over_all_faces,
        })
    }

    /// Draws points on the body boundary by shooting rays from the witness
    /// in random tangent directions and recording where they exit.
    pub fn sample_boundary<R: Rng + ?Sized>(
        &self,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<Point>> {
        let mut out = Vec::with_capacity(count);
        let budget = 100 * count.max(1);
        let mut attempts = 0usize;
        while out.len() < count {
            if attempts >= budget {
                return Err(Error::SamplingExhausted);
            }
            attempts += 1;
            let dir = random_unit_tangent(self.chart, &self.witness, rng);
            let ray = match GeodesicRay::new(self.chart, self.witness.clone(), dir) {
                Ok(r) => r,
                Err(_) => continue,
            };
            match self.boundary_exit(&ray)? {
                Some(hit) => out.push(hit.point),
                None => continue,
            }
        }
        Ok(out)
    }

    fn certify_hemisphere(&self) -> Result<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x68656d69);
        let samples = self.sample_boundary(256, &mut rng)?;
        let mut margin = f64::INFINITY;
        for b in &samples {
            margin = margin.min(self.witness.dot(b));
        }
        if !(margin > tol::HEMISPHERE_MARGIN) {
            return Err(Error::HemisphereCertificate { margin });
        }
        Ok(self.witness.clone())
    }

    fn ball_first_hit(
        &self,
        ray: &GeodesicRay,
        center: &Point,
        radius: f64,
    ) -> Result<Option<RayHit>> {
        let clip = match ball_clip(self.chart, ray, center, radius) {
            Some(c) => c,
            None => return Ok(None),
        };
        if clip.graze {
            if clip.t_in <= tol::BETWEENNESS {
                return Ok(None);
            }
            let point = ray.point_at(clip.t_in);
            let support = ball_tangent_plane(self.chart, center, &point)?;
            return Ok(Some(RayHit {
                t: clip.t_in,
                t_exit: clip.t_in,
                point,
                transversal: false,
                support,
                face_index: None,
            }));
        }
        if clip.t_out <= tol::BETWEENNESS || clip.t_in <= tol::BETWEENNESS {
            // For an exterior base the chord interval lies fully ahead or
            // fully behind; a near-zero entry only appears when the base is
            // essentially on the boundary.
            return Ok(None);
        }
        let t = clip.t_in;
        let point = ray.point_at(t);
        let support = ball_tangent_plane(self.chart, center, &point)?;
        let deriv = self.chart.form_dot(support.normal(), &ray.tangent_at(t));
        let transversal =
            deriv.abs() > tol::TRANSVERSALITY && (clip.t_out - clip.t_in) > tol::BETWEENNESS;
        Ok(Some(RayHit {
            t,
            t_exit: clip.t_out,
            point,
            transversal,
            support,
            face_index: None,
        }))
    }

    fn ball_boundary_exit(
        &self,
        ray: &GeodesicRay,
        center: &Point,
        radius: f64,
    ) -> Result<Option<RayHit>> {
        let clip = match ball_clip(self.chart, ray, center, radius) {
            Some(c) => c,
            None => {
                return Err(Error::InvariantViolation {
                    what: "interior ray base missed its own ball".to_string(),
                })
            }
        };
        // For an interior base the chord interval straddles zero; on the
        // sphere shift the principal interval by a full turn first.
        let mut t_in = clip.t_in;
        let mut t_out = clip.t_out;
        if self.chart.kind() == ChartKind::Spherical && t_in > 0.0 {
            t_in -= TAU;
            t_out -= TAU;
            if t_out < 0.0 {
                t_in += TAU;
                t_out += TAU;
            }
        }
        if !(t_in <= tol::BOUNDARY_BAND && t_out >= -tol::BOUNDARY_BAND) {
            return Err(Error::InvariantViolation {
                what: "interior ray base lies outside its ball chord interval".to_string(),
            });
        }
        let t = t_out.max(0.0);
        let point = ray.point_at(t);
        let support = ball_tangent_plane(self.chart, center, &point)?;
        let deriv = self.chart.form_dot(support.normal(), &ray.tangent_at(t));
        let transversal = deriv.abs() > tol::TRANSVERSALITY && (t_out - t_in) > tol::BETWEENNESS;
        Ok(Some(RayHit {
            t,
            t_exit: t,
            point,
            transversal,
            support,
            face_index: None,
        }))
    }

    fn interval_first_hit(
        &self,
        ray: &GeodesicRay,
        faces: &[Hyperplane],
    ) -> Result<Option<RayHit>> {
        let clip = line_clip(self.chart, ray, faces);
        if clip.never {
            return Ok(None);
        }
        let (lo_t, lo_face) = match clip.lower {
            Some(pair) => pair,
            // Without a lower bound the feasible set extends behind the
            // exterior base, so any overlap ahead would contain the base;
            // there is no forward entry.
            None => return Ok(None),
        };
        let hi = clip.upper.map(|(t, _)| t).unwrap_or(f64::INFINITY);
        if lo_t > hi + tol::BETWEENNESS {
            return Ok(None);
        }
        if lo_t <= tol::BETWEENNESS {
            return Ok(None);
        }
        if hi < lo_t {
            // Vertex graze: the feasible interval degenerates to a point
            // within the betweenness band.
            let t = 0.5 * (lo_t + hi);
            let point = ray.point_at(t);
            return Ok(Some(RayHit {
                t,
                t_exit: t,
                point,
                transversal: false,
                support: faces[lo_face].clone(),
                face_index: Some(lo_face),
            }));
        }
        let t = lo_t;
        let point = ray.point_at(t);
        let support = faces[lo_face].clone();
        let deriv = self.chart.form_dot(support.normal(), &ray.tangent_at(t));
        let transversal = deriv.abs() > tol::TRANSVERSALITY && (hi - lo_t) > tol::BETWEENNESS;
        Ok(Some(RayHit {
            t,
            t_exit: hi,
            point,
            transversal,
            support,
            face_index: Some(lo_face),
        }))
    }

    fn interval_boundary_exit(
        &self,
        ray: &GeodesicRay,
        faces: &[Hyperplane],
    ) -> Result<Option<RayHit>> {
        let clip = line_clip(self.chart, ray, faces);
        if clip.never {
            return Err(Error::InvariantViolation {
                what: "interior ray base on an infeasible geodesic".to_string(),
            });
        }
        let (hi, hi_face) = match clip.upper {
            Some(pair) => pair,
            None => return Ok(None),
        };
        let lo = clip.lower.map(|(t, _)| t).unwrap_or(f64::NEG_INFINITY);
        if hi < -tol::BOUNDARY_BAND {
            return Err(Error::InvariantViolation {
                what: "interior ray base lies beyond its exit parameter".to_string(),
            });
        }
        let t = hi.max(0.0);
        let point = ray.point_at(t);
        let support = faces[hi_face].clone();
        let deriv = self.chart.form_dot(support.normal(), &ray.tangent_at(t));
        let transversal = deriv.abs() > tol::TRANSVERSALITY && (hi - lo) > tol::BETWEENNESS;
        Ok(Some(RayHit {
            t,
            t_exit: t,
            point,
            transversal,
            support,
            face_index: Some(hi_face),
        }))
    }

    fn circle_first_hit(&self, ray: &GeodesicRay, faces: &[Hyperplane]) -> Result<Option<RayHit>> {
        let scan = circle_scan(ray, faces);
        let mut best: Option<(f64, Option<f64>)> = None;
        for arc in &scan.arcs {
            if arc.start > tol::BETWEENNESS
                && best.map_or(true, |(t, _)| arc.start < t)
            {
                best = Some((arc.start, Some(arc.end)));
            }
        }
        for &(t, _) in &scan.grazes {
            if t > tol::BETWEENNESS && best.map_or(true, |(bt, _)| t < bt) {
                best = Some((t, None));
            }
        }
        let (t, arc_end) = match best {
            Some(b) => b,
            None => return Ok(None),
        };
        let face_index = match arc_end {
            Some(_) => active_face(self.chart, ray, faces, t, true),
            None => scan
                .grazes
                .iter()
                .find(|&&(gt, _)| gt == t)
                .map(|&(_, f)| f)
                .unwrap_or(0),
        };
        let point = ray.point_at(t);
        let support = faces[face_index].clone();
        let deriv = self.chart.form_dot(support.normal(), &ray.tangent_at(t));
        let transversal = match arc_end {
            Some(end) => deriv.abs() > tol::TRANSVERSALITY && (end - t) > tol::BETWEENNESS,
            None => false,
        };
        Ok(Some(RayHit {
            t,
            t_exit: arc_end.unwrap_or(t),
            point,
            transversal,
            support,
            face_index: Some(face_index),
        }))
    }

    fn circle_boundary_exit(
        &self,
        ray: &GeodesicRay,
        faces: &[Hyperplane],
    ) -> Result<Option<RayHit>> {
        let scan = circle_scan(ray, faces);
        if scan.full_circle {
            return Ok(None);
        }
        // The base parameter 0 lies inside some feasible arc, either directly
        // (arc start at 0 within the band) or after unwrapping a full turn.
        let mut exit: Option<(f64, f64)> = None;
        for arc in &scan.arcs {
            if arc.start <= tol::BOUNDARY_BAND {
                exit = Some((arc.end, arc.end - arc.start));
                break;
            }
            if arc.end >= TAU - tol::BOUNDARY_BAND {
                exit = Some(((arc.end - TAU).max(0.0), arc.end - arc.start));
                break;
            }
        }
        let (t, length) = match exit {
            Some(pair) => pair,
            None => {
                return Err(Error::InvariantViolation {
                    what: "interior ray base not covered by any feasible arc".to_string(),
                })
            }
        };
        let face_index = active_face(self.chart, ray, faces, t, false);
        let point = ray.point_at(t);
        let support = faces[face_index].clone();
        let deriv = self.chart.form_dot(support.normal(), &ray.tangent_at(t));
        let transversal = deriv.abs() > tol::TRANSVERSALITY && length > tol::BETWEENNESS;
        Ok(Some(RayHit {
            t,
            t_exit: t,
            point,
            transversal,
            support,
            face_index: Some(face_index),
        }))
    }
}

/// The pointwise antipode of a spherical body: the set of `-x` for `x` in
/// the body. Faces and witness data are negated and revalidated.
pub fn antipodal_body(body: &ConvexBody) -> Result<ConvexBody> {
    let chart = body.chart();
    if chart.kind() != ChartKind::Spherical {
        return Err(Error::UnsupportedChart {
            op: "antipodal_body",
            chart: chart.kind(),
        });
    }
    match body.shape() {
        BodyShape::Ball { center, radius } => ConvexBody::ball(chart, -center, *radius),
        BodyShape::Polytope { faces } => {
            let flipped: Result<Vec<Hyperplane>> = faces
                .iter()
                .map(|f| Hyperplane::new(chart, -f.normal(), 0.0))
                .collect();
            ConvexBody::polytope(chart, flipped?, Some(-body.witness()))
        }
    }
}

/// Kernel log-ratio infimum over the given face indices.
fn ratio_over_faces(
    faces: &[Hyperplane],
    family: &[usize],
    p: &Point,
    q: &Point,
) -> Result<(f64, Option<usize>)> {
    let mut best = f64::INFINITY;
    let mut best_face = None;
    for &i in family {
        let kq = faces[i].kernel_distance(q);
        if kq <= f64::MIN_POSITIVE {
            continue;
        }
        let kp = faces[i].kernel_distance(p).max(f64::MIN_POSITIVE);
        let ratio = kp.ln() - kq.ln();
        if ratio < best {
            best = ratio;
            best_face = Some(i);
        }
    }
    if best_face.is_none() {
        return Err(Error::EmptySeparatorFamily);
    }
    Ok((best, best_face))
}

/// Principal chord interval of a geodesic with a ball boundary.
struct BallClip {
    t_in: f64,
    t_out: f64,
    graze: bool,
}

fn ball_clip(chart: Chart, ray: &GeodesicRay, center: &Point, radius: f64) -> Option<BallClip> {
    match chart.kind() {
        ChartKind::Euclidean => {
            let w = ray.base() - center;
            let b = ray.dir().dot(&w);
            let closest = &w - ray.dir() * b;
            let d_line = closest.norm();
            if (d_line - radius).abs() <= tol::TANGENCY {
                return Some(BallClip {
                    t_in: -b,
                    t_out: -b,
                    graze: true,
                });
            }
            if d_line > radius {
                return None;
            }
            let half = (radius * radius - d_line * d_line).max(0.0).sqrt();
            Some(BallClip {
                t_in: -b - half,
                t_out: -b + half,
                graze: false,
            })
        }
        ChartKind::Spherical => {
            // f(t) = <gamma(t), c> = R cos(t - alpha); inside iff f >= cos r.
            let a = ray.base().dot(center);
            let b = ray.dir().dot(center);
            let r_amp = a.hypot(b);
            let alpha = b.atan2(a);
            let cr = radius.cos();
            if (r_amp - cr).abs() <= tol::TANGENCY {
                let t = alpha.rem_euclid(TAU);
                return Some(BallClip {
                    t_in: t,
                    t_out: t,
                    graze: true,
                });
            }
            if r_amp < cr {
                return None;
            }
            let delta = (cr / r_amp).clamp(-1.0, 1.0).acos();
            let t_in = (alpha - delta).rem_euclid(TAU);
            Some(BallClip {
                t_in,
                t_out: t_in + 2.0 * delta,
                graze: false,
            })
        }
        ChartKind::Hyperbolic => {
            // g(t) = cosh dist(gamma(t), c) = A cosh t + B sinh t
            //      = C cosh(t + phi) with C = sqrt(A^2 - B^2) >= 1.
            let a = -chart.form_dot(ray.base(), center);
            let b = -chart.form_dot(ray.dir(), center);
            let c2 = a * a - b * b;
            let c = c2.max(1.0).sqrt();
            let d_line = c.acosh();
            if (d_line - radius).abs() <= tol::TANGENCY {
                let t = -(b / c).asinh();
                return Some(BallClip {
                    t_in: t,
                    t_out: t,
                    graze: true,
                });
            }
            if c > radius.cosh() {
                return None;
            }
            let delta = (radius.cosh() / c).max(1.0).acosh();
            let phi = (b / c).asinh();
            Some(BallClip {
                t_in: -phi - delta,
                t_out: -phi + delta,
                graze: false,
            })
        }
    }
}

/// Interior-negative tangent plane of a ball at a boundary point.
fn ball_tangent_plane(chart: Chart, center: &Point, b: &Point) -> Result<Hyperplane> {
    match chart.kind() {
        ChartKind::Euclidean => {
            let normal = b - center;
            let offset = normal.dot(b);
            Hyperplane::new(chart, normal, offset)
        }
        ChartKind::Spherical => {
            let normal = -(center - b * center.dot(b));
            Hyperplane::new(chart, normal, 0.0)
        }
        ChartKind::Hyperbolic => {
            let pairing = chart.form_dot(center, b);
            let normal = -(center + b * pairing);
            Hyperplane::new(chart, normal, 0.0)
        }
    }
}

/// Feasible-parameter clip of a full geodesic line against polytope faces in
/// the flat and hyperbolic charts, where each face constrains at most one
/// half-line.
struct LineClip {
    /// Some face is nowhere satisfied on this geodesic.
    never: bool,
    /// Largest lower bound and its face.
    lower: Option<(f64, usize)>,
    /// Smallest upper bound and its face.
    upper: Option<(f64, usize)>,
}

fn line_clip(chart: Chart, ray: &GeodesicRay, faces: &[Hyperplane]) -> LineClip {
    enum FaceClip {
        Always,
        Never,
        Lower(f64),
        Upper(f64),
    }
    let mut clip = LineClip {
        never: false,
        lower: None,
        upper: None,
    };
    for (i, face) in faces.iter().enumerate() {
        let a = face.signed_kernel(ray.base());
        let b = chart.form_dot(face.normal(), ray.dir());
        let fc = match chart.kind() {
            ChartKind::Euclidean => {
                if b == 0.0 {
                    if a > 0.0 {
                        FaceClip::Never
                    } else {
                        FaceClip::Always
                    }
                } else {
                    let t0 = -a / b;
                    if b > 0.0 {
                        FaceClip::Upper(t0)
                    } else {
                        FaceClip::Lower(t0)
                    }
                }
            }
            ChartKind::Hyperbolic => {
                // f(t) = a cosh t + b sinh t keeps the sign of `a` when
                // |a| > |b| and crosses zero exactly once when |a| < |b|.
                let d2 = a * a - b * b;
                if d2 > 0.0 {
                    if a > 0.0 {
                        FaceClip::Never
                    } else {
                        FaceClip::Always
                    }
                } else if d2 < 0.0 {
                    let t0 = (-a / b).atanh();
                    if b > 0.0 {
                        FaceClip::Upper(t0)
                    } else {
                        FaceClip::Lower(t0)
                    }
                } else if a > 0.0 {
                    FaceClip::Never
                } else {
                    FaceClip::Always
                }
            }
            ChartKind::Spherical => unreachable!("spherical clipping uses the circle scan"),
        };
        match fc {
            FaceClip::Always => {}
            FaceClip::Never => {
                clip.never = true;
                return clip;
            }
            FaceClip::Lower(t) => {
                if clip.lower.map_or(true, |(lt, _)| t > lt) {
                    clip.lower = Some((t, i));
                }
            }
            FaceClip::Upper(t) => {
                if clip.upper.map_or(true, |(ut, _)| t < ut) {
                    clip.upper = Some((t, i));
                }
            }
        }
    }
    clip
}

/// One feasible arc of a great circle: `start` in [0, tau), `end` in
/// (start, start + tau].
#[derive(Clone, Copy)]
struct CircleArc {
    start: f64,
    end: f64,
}

struct CircleScan {
    arcs: Vec<CircleArc>,
    /// Isolated grazing parameters with their active face.
    grazes: Vec<(f64, usize)>,
    /// The whole circle is feasible (no constraining face).
    full_circle: bool,
}

/// Event scan of the great circle spanned by a spherical ray against the
/// face waves f_i(t) = a_i cos t + b_i sin t. Faces whose wave amplitude
/// vanishes contain the circle in their plane and never constrain it.
fn circle_scan(ray: &GeodesicRay, faces: &[Hyperplane]) -> CircleScan {
    let mut waves: Vec<(f64, f64)> = Vec::with_capacity(faces.len());
    for f in faces {
        let a = f.signed_kernel(ray.base());
        let b = f.normal().dot(ray.dir());
        if a.hypot(b) > 1e-15 {
            waves.push((a, b));
        }
    }
    let eval = |t: f64| -> f64 {
        let (s, c) = t.sin_cos();
        waves
            .iter()
            .map(|&(a, b)| a * c + b * s)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    if waves.is_empty() {
        return CircleScan {
            arcs: vec![CircleArc {
                start: 0.0,
                end: TAU,
            }],
            grazes: Vec::new(),
            full_circle: true,
        };
    }
    let mut breakpoints: Vec<f64> = Vec::with_capacity(2 * waves.len());
    for &(a, b) in &waves {
        let alpha = b.atan2(a);
        breakpoints.push((alpha + std::f64::consts::FRAC_PI_2).rem_euclid(TAU));
        breakpoints.push((alpha + 1.5 * std::f64::consts::PI).rem_euclid(TAU));
    }
    breakpoints.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breakpoints.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);
    let m = breakpoints.len();
    let mut feasible = vec![false; m];
    for k in 0..m {
        let s = breakpoints[k];
        let e = if k + 1 < m {
            breakpoints[k + 1]
        } else {
            breakpoints[0] + TAU
        };
        feasible[k] = eval(0.5 * (s + e)) <= 0.0;
    }
    if feasible.iter().all(|&f| f) {
        return CircleScan {
            arcs: vec![CircleArc {
                start: 0.0,
                end: TAU,
            }],
            grazes: Vec::new(),
            full_circle: true,
        };
    }
    let mut arcs = Vec::new();
    let mut grazes = Vec::new();
    for k in 0..m {
        let prev = (k + m - 1) % m;
        if feasible[k] && !feasible[prev] {
            // Maximal feasible run starting at breakpoint k.
            let mut j = k;
            let mut steps = 0usize;
            while feasible[(j + 1) % m] && steps < m {
                j = (j + 1) % m;
                steps += 1;
            }
            let start = breakpoints[k];
            let end_idx = (j + 1) % m;
            let mut end = breakpoints[end_idx];
            if end <= start {
                end += TAU;
            }
            arcs.push(CircleArc { start, end });
        } else if !feasible[k] && !feasible[prev] {
            // A breakpoint flanked by infeasible segments can still touch
            // the body in one grazing point when the max envelope vanishes
            // there.
            let t = breakpoints[k];
            if eval(t).abs() <= tol::TRANSVERSALITY {
                let (s, c) = t.sin_cos();
                let face = faces
                    .iter()
                    .enumerate()
                    .max_by(|(_, x), (_, y)| {
                        let fx = x.signed_kernel(ray.base()) * c + x.normal().dot(ray.dir()) * s;
                        let fy = y.signed_kernel(ray.base()) * c + y.normal().dot(ray.dir()) * s;
                        fx.partial_cmp(&fy).unwrap()
                    })
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                grazes.push((t, face));
            }
        }
    }
    arcs.sort_by(|x, y| x.start.partial_cmp(&y.start).unwrap());
    CircleScan {
        arcs,
        grazes,
        full_circle: false,
    }
}

/// Face active at a boundary crossing: among the faces whose kernel nearly
/// vanishes at the crossing point, the one the ray is entering (most
/// negative kernel derivative) or exiting (most positive).
fn active_face(chart: Chart, ray: &GeodesicRay, faces: &[Hyperplane], t: f64, entering: bool) -> usize {
    let x = ray.point_at(t);
    let v = ray.tangent_at(t);
    let mut max_s = f64::NEG_INFINITY;
    for face in faces {
        max_s = max_s.max(face.signed_kernel(&x));
    }
    let mut best = 0usize;
    let mut best_rate = f64::NEG_INFINITY;
    for (i, face) in faces.iter().enumerate() {
        if face.signed_kernel(&x) < max_s - tol::BOUNDARY_BAND {
            continue;
        }
        let rate = chart.form_dot(face.normal(), &v);
        let score = if entering { -rate } else { rate };
        if score > best_rate {
            best_rate = score;
            best = i;
        }
    }
    best
}

/// Relaxation search for a strictly interior point of an h-polytope: walk
/// away from the currently most violated face of a shifted system, tightening
/// the shift when the system resists.
fn find_polytope_witness(chart: Chart, faces: &[Hyperplane]) -> Result<Point> {
    let n = chart.ambient_len();
    let mut x: Point = match chart.kind() {
        ChartKind::Euclidean => DVector::zeros(n),
        ChartKind::Spherical => {
            let mut sum: Vector = DVector::zeros(n);
            for f in faces {
                sum -= f.normal();
            }
            if sum.norm() > 1e-9 {
                sum.normalize()
            } else {
                let mut e = DVector::zeros(n);
                e[0] = 1.0;
                e
            }
        }
        ChartKind::Hyperbolic => {
            let mut e = DVector::zeros(n);
            e[0] = 1.0;
            e
        }
    };
    let over_relax = 1.5f64;
    let mut mu = 1.0f64;
    while mu >= 1e-8 {
        for _ in 0..2_000 {
            let mut worst = f64::NEG_INFINITY;
            let mut worst_face = 0usize;
            for (i, f) in faces.iter().enumerate() {
                let s = f.signed_kernel(&x);
                if s > worst {
                    worst = s;
                    worst_face = i;
                }
            }
            if worst <= -mu {
                return Ok(x);
            }
            let step = (over_relax * (worst + mu)).min(0.3);
            x = step_away_from_face(chart, &x, &faces[worst_face], step)?;
        }
        mu *= 0.5;
    }
    Err(Error::EmptyInterior {
        detail: "relaxation found no interior point for the face system",
    })
}

/// Moves a chart point a geodesic step in the direction that decreases the
/// signed kernel of the given face fastest.
fn step_away_from_face(chart: Chart, x: &Point, face: &Hyperplane, step: f64) -> Result<Point> {
    match chart.kind() {
        ChartKind::Euclidean => Ok(x - face.normal() * step),
        _ => {
            let mut grad = chart.project_tangent(x, face.normal());
            let mut norm = chart.tangent_norm(&grad);
            if norm <= 1e-9 {
                // The kernel is stationary here (pole of the face wave);
                // nudge along the most transverse coordinate axis instead.
                let mut idx = 0usize;
                let mut smallest = f64::INFINITY;
                for j in 0..x.len() {
                    if x[j].abs() < smallest {
                        smallest = x[j].abs();
                        idx = j;
                    }
                }
                let mut e: Vector = DVector::zeros(x.len());
                e[idx] = 1.0;
                grad = chart.project_tangent(x, &e);
                norm = chart.tangent_norm(&grad);
            }
            let dir = grad / norm;
            let moved = match chart.kind() {
                ChartKind::Spherical => x * step.cos() - &dir * step.sin(),
                ChartKind::Hyperbolic => x * step.cosh() - &dir * step.sinh(),
                ChartKind::Euclidean => unreachable!(),
            };
            chart.normalize_point(moved)
        }
    }
}

/// Standard normal deviate via the Box-Muller transform.
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.random();
        if u1 <= 1e-300 {
            continue;
        }
        let u2: f64 = rng.random();
        return (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos();
    }
}

/// Uniformly random unit tangent direction at a chart point.
pub(crate) fn random_unit_tangent<R: Rng + ?Sized>(
    chart: Chart,
    base: &Point,
    rng: &mut R,
) -> Vector {
    loop {
        let raw: Vector = DVector::from_fn(chart.ambient_len(), |_, _| standard_normal(rng));
        let tangent = chart.project_tangent(base, &raw);
        let norm = chart.tangent_norm(&tangent);
        if norm > 1e-6 {
            return tangent / norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn unit_square(chart: Chart) -> ConvexBody {
        let faces = vec![
            Hyperplane::new(chart, dvector![1.0, 0.0], 1.0).unwrap(),
            Hyperplane::new(chart, dvector![-1.0, 0.0], 1.0).unwrap(),
            Hyperplane::new(chart, dvector![0.0, 1.0], 1.0).unwrap(),
            Hyperplane::new(chart, dvector![0.0, -1.0], 1.0).unwrap(),
        ];
        ConvexBody::polytope(chart, faces, Some(dvector![0.0, 0.0])).unwrap()
    }

    #[test]
    fn euclidean_ball_containment_bands() {
        let chart = Chart::euclidean(2).unwrap();
        let ball = ConvexBody::ball(chart, dvector![0.0, 0.0], 1.0).unwrap();
        assert_eq!(
            ball.contains(&dvector![0.0, 0.0]).unwrap(),
            Containment::Interior
        );
        assert_eq!(
            ball.contains(&dvector![1.0, 0.0]).unwrap(),
            Containment::Boundary
        );
        assert_eq!(
            ball.contains(&dvector![2.0, 0.0]).unwrap(),
            Containment::Exterior
        );
    }

    #[test]
    fn euclidean_ball_chord_and_tangent_hits() {
        let chart = Chart::euclidean(2).unwrap();
        let ball = ConvexBody::ball(chart, dvector![0.0, 0.0], 1.0).unwrap();
        let ray = GeodesicRay::new(chart, dvector![-2.0, 0.0], dvector![1.0, 0.0]).unwrap();
        let hit = ball.ray_first_hit(&ray).unwrap().unwrap();
        assert_relative_eq!(hit.t, 1.0, max_relative = 1e-12);
        assert_relative_eq!(hit.t_exit, 3.0, max_relative = 1e-12);
        assert_relative_eq!(hit.point[0], -1.0, epsilon = 1e-12);
        assert!(hit.transversal);
        assert!(hit.support.signed_kernel(&dvector![-2.0, 0.0]) > 0.0);

        let graze = GeodesicRay::new(chart, dvector![-2.0, 1.0], dvector![1.0, 0.0]).unwrap();
        let hit = ball.ray_first_hit(&graze).unwrap().unwrap();
        assert_relative_eq!(hit.t, 2.0, max_relative = 1e-12);
        assert!(!hit.transversal);
        assert_relative_eq!(hit.point[0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(hit.point[1], 1.0, epsilon = 1e-9);

        let miss = GeodesicRay::new(chart, dvector![-2.0, 1.5], dvector![1.0, 0.0]).unwrap();
        assert!(ball.ray_first_hit(&miss).unwrap().is_none());

        let away = GeodesicRay::new(chart, dvector![-2.0, 0.0], dvector![-1.0, 0.0]).unwrap();
        assert!(ball.ray_first_hit(&away).unwrap().is_none());
    }

    #[test]
    fn square_polytope_hit_and_exit() {
        let chart = Chart::euclidean(2).unwrap();
        let square = unit_square(chart);
        let ray = GeodesicRay::new(chart, dvector![-2.0, 0.0], dvector![1.0, 0.0]).unwrap();
        let hit = square.ray_first_hit(&ray).unwrap().unwrap();
        assert_relative_eq!(hit.t, 1.0, max_relative = 1e-12);
        assert_relative_eq!(hit.t_exit, 3.0, max_relative = 1e-12);
        assert_eq!(hit.face_index, Some(1));
        assert!(hit.transversal);

        let inside = GeodesicRay::new(chart, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
        let exit = square.boundary_exit(&inside).unwrap().unwrap();
        assert_relative_eq!(exit.t, 1.0, max_relative = 1e-12);
        assert_eq!(exit.face_index, Some(0));

        let corner = GeodesicRay::new(chart, dvector![-2.0, 0.0], dvector![1.0, 1.0]).unwrap();
        let graze = square.ray_first_hit(&corner).unwrap().unwrap();
        assert!(!graze.transversal);
        assert_relative_eq!(graze.point[0], -1.0, epsilon = 1e-9);
        assert_relative_eq!(graze.point[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn square_separator_families() {
        let chart = Chart::euclidean(2).unwrap();
        let square = unit_square(chart);
        match square.separating_hyperplanes(&dvector![-2.0, 0.0]).unwrap() {
            SeparatorFamily::Faces(idx) => assert_eq!(idx, vec![1]),
            _ => panic!("expected face family"),
        }
        match square
            .separating_hyperplanes(&dvector![-2.0, -2.0])
            .unwrap()
        {
            SeparatorFamily::Faces(mut idx) => {
                idx.sort_unstable();
                assert_eq!(idx, vec![1, 3]);
            }
            _ => panic!("expected face family"),
        }
        assert!(matches!(
            square.separating_hyperplanes(&dvector![0.5, 0.0]),
            Err(Error::EmptySeparatorFamily)
        ));
    }

    #[test]
    fn ball_tangent_contact_visibility() {
        let chart = Chart::euclidean(2).unwrap();
        let ball = ConvexBody::ball(chart, dvector![0.0, 0.0], 1.0).unwrap();
        let apex = dvector![-2.0, 0.0];
        let contact = |theta: f64| dvector![theta.cos(), theta.sin()];
        let visible = 2.0 * std::f64::consts::PI / 3.0 + 1e-3;
        assert!(ball.is_separating_contact(&apex, &contact(visible)).unwrap());
        let hidden = 2.0 * std::f64::consts::PI / 3.0 - 1e-3;
        assert!(!ball.is_separating_contact(&apex, &contact(hidden)).unwrap());
    }

    #[test]
    fn ratio_infimum_halfplane_and_ball() {
        let chart = Chart::euclidean(2).unwrap();
        let wall = ConvexBody::polytope(
            chart,
            vec![Hyperplane::new(chart, dvector![-1.0, 0.0], -1.0).unwrap()],
            Some(dvector![2.0, 0.0]),
        )
        .unwrap();
        let r = wall
            .ratio_infimum(&dvector![0.0, 0.0], &dvector![0.5, 0.0])
            .unwrap();
        assert_relative_eq!(r.value, 2.0f64.ln(), max_relative = 1e-12);
        assert_eq!(r.face_index, Some(0));

        let ball = ConvexBody::ball(chart, dvector![0.0, 0.0], 1.0).unwrap();
        let r = ball
            .ratio_infimum(&dvector![-2.0, 0.0], &dvector![-1.5, 0.0])
            .unwrap();
        assert_relative_eq!(r.value, 2.0f64.ln(), max_relative = 1e-12);
        let plane = r.argmin.unwrap();
        assert_relative_eq!(
            plane.kernel_distance(&dvector![-2.0, 0.0]),
            1.0,
            max_relative = 1e-9
        );

        let same = ball
            .ratio_infimum(&dvector![-2.0, 0.0], &dvector![-2.0, 0.0])
            .unwrap();
        assert_eq!(same.value, 0.0);
        assert!(same.argmin.is_none());
    }

    #[test]
    fn hyperbolic_halfspace_hit() {
        let chart = Chart::hyperbolic(2).unwrap();
        let wall = Hyperplane::new(chart, dvector![0.0, 1.0, 0.0], 0.0).unwrap();
        let witness = dvector![1.5f64.cosh(), -(1.5f64.sinh()), 0.0];
        let body = ConvexBody::polytope(chart, vec![wall], Some(witness.clone())).unwrap();
        let p = dvector![2.0f64.cosh(), 2.0f64.sinh(), 0.0];
        let q = dvector![1.0f64.cosh(), 1.0f64.sinh(), 0.0];
        let (ray, d) = GeodesicRay::through(chart, &p, &q).unwrap();
        assert_relative_eq!(d, 1.0, max_relative = 1e-12);
        let hit = body.ray_first_hit(&ray).unwrap().unwrap();
        assert_relative_eq!(hit.t, 2.0, max_relative = 1e-10);
        assert_relative_eq!(hit.point[0], 1.0, epsilon = 1e-10);
        assert!(hit.transversal);
        assert!(hit.t_exit.is_infinite());

        let inward_dir = chart.project_tangent(&witness, &dvector![0.0, -1.0, 0.0]);
        let inward = GeodesicRay::new(chart, witness, inward_dir).unwrap();
        assert!(body.boundary_exit(&inward).unwrap().is_none());
    }

    #[test]
    fn hyperbolic_ball_chord_parameters() {
        let chart = Chart::hyperbolic(2).unwrap();
        let center = dvector![1.0, 0.0, 0.0];
        let ball = ConvexBody::ball(chart, center.clone(), 1.0).unwrap();
        let p = dvector![2.0f64.cosh(), 2.0f64.sinh(), 0.0];
        let (ray, _) = GeodesicRay::through(chart, &p, &center).unwrap();
        let hit = ball.ray_first_hit(&ray).unwrap().unwrap();
        assert_relative_eq!(hit.t, 1.0, max_relative = 1e-10);
        assert_relative_eq!(hit.t_exit, 3.0, max_relative = 1e-10);
        assert!(hit.transversal);
        let s_p = hit.support.signed_kernel(&p);
        assert_relative_eq!(s_p, 1.0f64.sinh(), max_relative = 1e-9);
        assert!(hit.support.signed_kernel(&center) < 0.0);
    }

    #[test]
    fn spherical_cap_hits_and_grazes() {
        let chart = Chart::spherical(2).unwrap();
        let cap = ConvexBody::ball(
            chart,
            dvector![1.0, 0.0, 0.0],
            std::f64::consts::FRAC_PI_4,
        )
        .unwrap();
        let base = dvector![0.0, 1.0, 0.0];
        let aim = GeodesicRay::new(chart, base.clone(), dvector![1.0, 0.0, 0.0]).unwrap();
        let hit = cap.ray_first_hit(&aim).unwrap().unwrap();
        assert_relative_eq!(hit.t, std::f64::consts::FRAC_PI_4, max_relative = 1e-12);
        assert_relative_eq!(
            hit.t_exit,
            3.0 * std::f64::consts::FRAC_PI_4,
            max_relative = 1e-12
        );
        assert!(hit.transversal);

        let miss = GeodesicRay::new(chart, base.clone(), dvector![0.0, 0.0, 1.0]).unwrap();
        assert!(cap.ray_first_hit(&miss).unwrap().is_none());

        let half = std::f64::consts::FRAC_1_SQRT_2;
        let graze_ray = GeodesicRay::new(chart, base, dvector![half, 0.0, half]).unwrap();
        let graze = cap.ray_first_hit(&graze_ray).unwrap().unwrap();
        assert!(!graze.transversal);
        assert_relative_eq!(graze.t, std::f64::consts::FRAC_PI_2, max_relative = 1e-9);
    }

    #[test]
    fn spherical_square_scan_and_hemisphere() {
        let chart = Chart::spherical(2).unwrap();
        let lam = 0.5f64;
        let mut faces = Vec::new();
        for phi in [
            0.0,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::PI,
            1.5 * std::f64::consts::PI,
        ] {
            let normal = dvector![phi.cos() * lam.cos(), phi.sin() * lam.cos(), -lam.sin()];
            faces.push(Hyperplane::new(chart, normal, 0.0).unwrap());
        }
        let pole = dvector![0.0, 0.0, 1.0];
        let body = ConvexBody::polytope(chart, faces, Some(pole.clone())).unwrap();
        assert!(body.hemisphere().is_some());
        assert_eq!(body.contains(&pole).unwrap(), Containment::Interior);

        let p = dvector![1.0, 0.0, 0.0];
        let (ray, _) = GeodesicRay::through(chart, &p, &pole).unwrap();
        let hit = body.ray_first_hit(&ray).unwrap().unwrap();
        assert_relative_eq!(
            hit.t,
            std::f64::consts::FRAC_PI_2 - lam,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            hit.t_exit,
            std::f64::consts::FRAC_PI_2 + lam,
            max_relative = 1e-10
        );
        assert_eq!(hit.face_index, Some(0));
        assert!(hit.transversal);

        let exit = body
            .boundary_exit(&GeodesicRay::new(chart, pole, dvector![1.0, 0.0, 0.0]).unwrap())
            .unwrap()
            .unwrap();
        assert_relative_eq!(exit.t, lam, max_relative = 1e-10);
        assert_eq!(exit.face_index, Some(0));
    }

    #[test]
    fn hemisphere_certificate_rejects_half_sphere() {
        let chart = Chart::spherical(2).unwrap();
        let face = Hyperplane::new(chart, dvector![0.0, 0.0, 1.0], 0.0).unwrap();
        let err =
            ConvexBody::polytope(chart, vec![face], Some(dvector![0.0, 0.0, -1.0])).unwrap_err();
        assert!(matches!(err, Error::HemisphereCertificate { .. }));
    }

    #[test]
    fn witness_search_finds_interior_points() {
        let chart = Chart::euclidean(2).unwrap();
        let faces = vec![
            Hyperplane::new(chart, dvector![1.0, 0.0], 1.0).unwrap(),
            Hyperplane::new(chart, dvector![-1.0, 0.0], 1.0).unwrap(),
            Hyperplane::new(chart, dvector![0.0, 1.0], 1.0).unwrap(),
            Hyperplane::new(chart, dvector![0.0, -1.0], 1.0).unwrap(),
        ];
        let body = ConvexBody::polytope(chart, faces, None).unwrap();
        let w = body.witness();
        assert!(w[0].abs() < 1.0 && w[1].abs() < 1.0);
        assert_eq!(body.contains(w).unwrap(), Containment::Interior);

        let chart_h = Chart::hyperbolic(2).unwrap();
        let slab = vec![
            Hyperplane::new(chart_h, dvector![0.0, 1.0, 0.0], 0.0).unwrap(),
            Hyperplane::new(chart_h, dvector![0.0, 0.0, 1.0], 0.0).unwrap(),
        ];
        let body = ConvexBody::polytope(chart_h, slab, None).unwrap();
        assert_eq!(
            body.contains(body.witness()).unwrap(),
            Containment::Interior
        );
    }

    #[test]
    fn duplicate_and_empty_faces_rejected() {
        let chart = Chart::euclidean(2).unwrap();
        let f = Hyperplane::new(chart, dvector![1.0, 0.0], 1.0).unwrap();
        let g = Hyperplane::new(chart, dvector![2.0, 0.0], 2.0).unwrap();
        assert!(matches!(
            ConvexBody::polytope(chart, vec![f.clone(), g], None),
            Err(Error::DuplicateFace {
                first: 0,
                second: 1
            })
        ));
        assert!(matches!(
            ConvexBody::polytope(chart, Vec::new(), None),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            ConvexBody::polytope(chart, vec![f], Some(dvector![2.0, 0.0])),
            Err(Error::InvalidWitness { .. })
        ));
    }

    #[test]
    fn boundary_sampling_lands_on_boundary() {
        let chart = Chart::euclidean(2).unwrap();
        let square = unit_square(chart);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts = square.sample_boundary(64, &mut rng).unwrap();
        assert_eq!(pts.len(), 64);
        for b in &pts {
            assert_eq!(square.contains(b).unwrap(), Containment::Boundary);
        }

        let chart_h = Chart::hyperbolic(2).unwrap();
        let ball = ConvexBody::ball(chart_h, dvector![1.0, 0.0, 0.0], 0.8).unwrap();
        let pts = ball.sample_boundary(32, &mut rng).unwrap();
        for b in &pts {
            assert_relative_eq!(
                chart_h.distance(b, &dvector![1.0, 0.0, 0.0]),
                0.8,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn ratio_diagnostic_orders_families() {
        let chart = Chart::euclidean(2).unwrap();
        let square = unit_square(chart);
        let p = dvector![-3.0, 0.1];
        let q = dvector![-2.0, 0.05];
        let diag = square.ratio_infimum_diagnostic(&p, &q).unwrap();
        assert!(diag.over_all_faces <= diag.over_target_family + 1e-15);
        let r = square.ratio_infimum(&p, &q).unwrap();
        assert_relative_eq!(r.value, diag.over_target_family, max_relative = 1e-12);
        assert_relative_eq!(r.value, 2.0f64.ln(), max_relative = 1e-12);
    }
}
