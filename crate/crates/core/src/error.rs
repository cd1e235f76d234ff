use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error taxonomy shared by every module.
///
/// Domain violations (unordered pairs, directions outside the cone, points
/// inside a body) are ordinary results of querying a geometry and get their
/// own variants so callers can branch on them; `InvariantViolation` is
/// reserved for conditions the library promises can not happen on valid
/// inputs.
#[derive(Debug, Clone, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("coordinate vector has length {got}, chart expects {want}")]
    CoordinateLength { want: usize, got: usize },
    #[error("coordinates contain a non-finite value")]
    NotFinite,
    #[error("point is off the chart surface (residual {residual:.3e})")]
    OffChart { residual: f64 },
    #[error("vector is not tangent at the base point (residual {residual:.3e})")]
    NotTangent { residual: f64 },
    #[error("charts of the arguments do not match")]
    ChartMismatch,
    #[error("{op} is not defined on the {chart} chart")]
    UnsupportedChart {
        op: &'static str,
        chart: crate::chart::ChartKind,
    },
    #[error("{op} requires a {expected} context")]
    UnsupportedContext {
        op: &'static str,
        expected: &'static str,
    },
    #[error("{op} is not available for this body representation")]
    UnsupportedRepresentation { op: &'static str },
    #[error("ray endpoints coincide or the direction vanishes")]
    DegenerateRay,
    #[error("antipodal points span no unique great circle")]
    AmbiguousGeodesic,
    #[error("points are not collinear (residual {residual:.3e})")]
    NotCollinear { residual: f64 },
    #[error("points do not lie on a common great circle (residual {residual:.3e})")]
    NotCocircular { residual: f64 },
    #[error("cross ratio undefined: a denominator distance vanishes")]
    DegenerateCrossRatio,
    #[error("hyperplane normal is degenerate in the chart's bilinear form")]
    DegenerateHyperplane,
    #[error("hyperplane offset must be zero on curved charts")]
    CurvedChartOffset,
    #[error("faces {first} and {second} coincide")]
    DuplicateFace { first: usize, second: usize },
    #[error("no interior witness found: {detail}")]
    EmptyInterior { detail: &'static str },
    #[error("interior witness clears a face by only {clearance:.3e}")]
    InvalidWitness { clearance: f64 },
    #[error("body closure is not certified inside an open hemisphere (margin {margin:.3e})")]
    HemisphereCertificate { margin: f64 },
    #[error("{role} must lie strictly outside the body")]
    PointNotExterior { role: &'static str },
    #[error("separating family is empty")]
    EmptySeparatorFamily,
    #[error("ray from the base point through the target misses the body")]
    NoBoundaryHit,
    #[error("pair is not ordered: the target is not in the timelike future of the base")]
    NotInFuture,
    #[error("direction leaves the timelike cone")]
    NotTimelikeDirection,
    #[error("curve leaves the timelike cone near parameter {parameter}")]
    NotTimelikeCurve { parameter: f64 },
    #[error("bodies are not disjoint: certified separation {separation:.3e} is below the margin")]
    BodiesNotDisjoint { separation: f64 },
    #[error("chord is tangent to the body: the pair is null, not timelike")]
    NullChord,
    #[error("pair is not timelike separated (Minkowski pairing {pairing:.6})")]
    NotTimelikeSeparated { pairing: f64 },
    #[error("projection undefined: first coordinate too close to zero")]
    ProjectionDomain,
    #[error("{what} lies outside the admissible domain")]
    OutOfDomain { what: &'static str },
    #[error("candidate body does not contain the inner body")]
    NotNested,
    #[error("internal invariant violated: {what}")]
    InvariantViolation { what: String },
    #[error("scene parse error at line {line}, column {column}: {message}")]
    SceneParse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scene: {message}")]
    SceneInvalid { message: String },
    #[error("scene references unknown body id \"{id}\"")]
    UnknownBody { id: String },
    #[error("sampling exhausted before producing the requested points")]
    SamplingExhausted,
}
