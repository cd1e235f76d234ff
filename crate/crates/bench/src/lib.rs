//! Shared fixtures for the criterion benchmarks.

use timelike::{Chart, Point};

/// Euclidean plane chart used by the benchmark instances.
pub fn plane() -> Chart {
    Chart::euclidean(2).expect("dimension 2 is valid")
}

/// Deterministic fan of directions for boundary-hit benchmarks.
pub fn direction_fan(count: usize) -> Vec<Point> {
    (0..count)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * (i as f64) / (count as f64) + 0.1;
            nalgebra::dvector![theta.cos(), theta.sin()]
        })
        .collect()
}
