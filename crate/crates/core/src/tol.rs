//! Numeric thresholds shared across the crate.
//!
//! Every tolerance that a geometric predicate depends on lives here, so a
//! reader can audit them in one place and tests can reference the same
//! constants the library uses. Values are absolute and assume desk-scale
//! inputs (coordinates of order one); callers working at wildly different
//! scales should rescale their data first.

/// Residual accepted when validating that a point sits on the sphere or the
/// hyperboloid sheet. Constructors renormalize accepted points, so stored
/// points are tight to machine precision.
pub const CHART_MEMBERSHIP: f64 = 1e-9;

/// Residual accepted when validating that a vector is tangent at a base
/// point, relative to the vector's norm.
pub const TANGENCY: f64 = 1e-9;

/// Band around zero signed distance inside which a point counts as lying on
/// a body's boundary.
pub const BOUNDARY_BAND: f64 = 1e-9;

/// A ray crossing counts as transversal only when the pairing of the
/// supporting normal with the ray tangent exceeds this threshold.
pub const TRANSVERSALITY: f64 = 1e-9;

/// Strict margin for "q lies before the boundary hit" along a geodesic, and
/// for an entry/exit interval to count as having interior.
pub const BETWEENNESS: f64 = 1e-12;

/// Margin by which a point must sit on the positive side of a hyperplane to
/// count as separated by it.
pub const SEPARATION_MARGIN: f64 = 1e-12;

/// Componentwise threshold under which two faces are duplicates.
pub const FACE_DEDUP: f64 = 1e-12;

/// Residual against the spanned line or 2-plane accepted by the cross-ratio
/// collinearity and co-circularity checks.
pub const COPLANARITY: f64 = 1e-9;

/// Minimum signed clearance of a stored interior witness from every face.
pub const WITNESS_MARGIN: f64 = 1e-9;

/// Minimum certified boundary-to-boundary separation between the two bodies
/// of a two-sided context.
pub const BODY_DISJOINTNESS: f64 = 1e-6;

/// Minimum pairing of a spherical body's sampled boundary with its
/// hemisphere witness direction; certifies the closure sits strictly inside
/// an open hemisphere.
pub const HEMISPHERE_MARGIN: f64 = 1e-6;

/// Margin by which a spherical two-sided chord (backward hit to forward hit)
/// must stay below a half turn. At exactly a half turn the two-leg distance
/// degenerates to zero, so longer chords are rejected as unordered.
pub const LUNE_MARGIN: f64 = 1e-9;

/// Absolute tolerance of the adaptive curve-length quadrature.
pub const QUADRATURE: f64 = 1e-8;

/// Tangency threshold when classifying a chord as null.
pub const NULL_TANGENCY: f64 = 1e-9;

/// Guard on the first coordinate of central and de Sitter projections.
pub const PROJECTION_AXIS: f64 = 1e-9;

/// Allowed discrepancy when a constructed dilation-sphere sample is checked
/// against the requested radius.
pub const DILATION_CHECK: f64 = 1e-9;

/// Allowed metric decrease under body enlargement before the comparison is
/// flagged as a violation; absorbs rounding in the two distance evaluations.
pub const MONOTONICITY_SLACK: f64 = 1e-12;

/// Minimum excess of the Minkowski pairing above one for two points of the
/// unit-pairing sheet to count as timelike separated.
pub const TIMELIKE_PAIRING: f64 = 1e-12;

/// Allowed excess of a perturbed curve's length over the metric distance of
/// its endpoints before the comparison counts as a violation; absorbs the
/// quadrature tolerance of the two length evaluations.
pub const MAXIMALITY_SLACK: f64 = 1e-6;
