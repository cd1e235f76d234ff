//! Timelike Funk and Hilbert geometry on convex bodies.

pub mod body;
pub mod desitter;
pub mod funk;
pub mod hilbert;
pub mod length;
pub mod order;
pub mod chart;
pub mod cross_ratio;
pub mod error;
pub mod hyperplane;
pub mod ray;
pub mod render;
pub mod scene;
pub mod suite;
pub mod tol;

pub use body::{
    antipodal_body, BodyShape, Containment, ConvexBody, RatioInfimum, RatioInfimumDiagnostic,
    RayHit, SeparatorFamily,
};
pub use funk::{
    funk_distance, funk_distance_variational, funk_functional, funk_functional_variational,
    funk_monotonicity_check, future_sphere_sample, FinslerValue, FunkValue,
};
pub use desitter::{
    desitter_distance, desitter_isometry_check, desitter_point_at_time, desitter_project,
    desitter_to_sphere, gnomonic_lift, gnomonic_project, null_directions,
    projective_hilbert_distance, sphere_to_desitter, DesitterPairOutcome, DesitterReport,
    ProjectiveValue,
};
pub use hilbert::{
    funk_limit_check, hilbert_distance, hilbert_distance_cross_ratio, hilbert_functional,
    strip_closed_form, HilbertValue,
};
pub use length::{
    curve_length, directional_functional, geodesic_between, is_timelike, maximality_check,
    perturbed_geodesic, polyline, MaximalityReport, TimelikeCheck, TimelikeCurve,
};
pub use order::{ContextKind, PairClass, TimelikeContext};
pub use chart::{
    hyperboloid_to_klein, klein_to_hyperboloid, minkowski_dot, Chart, ChartKind, Point, Vector,
};
pub use cross_ratio::{affine_cross_ratio, chord_cross_ratio, spherical_cross_ratio};
pub use error::{Error, Result};
pub use hyperplane::Hyperplane;
pub use ray::GeodesicRay;
pub use render::{render_svg, RenderOptions};
pub use scene::{parse_scene, scene_point, Scene};
pub use suite::{format_report, run_suite, PropertyResult, SuiteConfig, SuiteKind, SuiteReport};
