//! Piecewise-linear knot embeddings in 3-space and the height function `z`.
//!
//! All models are normalised to unit diameter on ingestion, so the absolute
//! tolerances below are meaningful across inputs.

mod frame;
mod polyline;
mod sum;
mod sweep;
mod tube;

pub use frame::{rotation_minimizing_frame, transport_frames, FrameField};
pub use polyline::{ClosedPolyline, GenericityReport};
pub use sum::connected_sum_presentation;
pub use sweep::{level_count, sweep_profile, trunk_embedding, SweepProfile};
pub use tube::{embed_pattern, safe_tube_radius, tube_mesh, SolidTorusEmbedding, TubeMesh};

use thiserror::Error;

pub type Point = nalgebra::Point3<f64>;
pub type Vector = nalgebra::Vector3<f64>;

/// Absolute tolerance for geometric predicates on unit-diameter models.
pub const TOLERANCE: f64 = 1e-9;

/// Two heights closer than this are treated as equal.
pub const HEIGHT_TOLERANCE: f64 = 1e-12;

/// Fraction of the clearance used as the tube radius.
pub const TUBE_SAFETY_FACTOR: f64 = 0.45;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("curve is not generic ({0})")]
    NotGeneric(GenericityReport),
    #[error("height {z} is not a regular value: it equals the height of vertex {vertex}")]
    NotRegular { z: f64, vertex: usize },
    #[error(
        "perturbation refused: epsilon {epsilon:e} must be below half the feature size {feature:e}"
    )]
    PerturbationTooLarge { epsilon: f64, feature: f64 },
    #[error("construction failed: {0}")]
    Construction(String),
}

/// Euclidean distance between the segments `[p0, p1]` and `[q0, q1]`.
pub fn segment_distance(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> f64 {
    let (s, t) = closest_parameters(p0, p1, q0, q1);
    let a = p0 + (p1 - p0) * s;
    let b = q0 + (q1 - q0) * t;
    (a - b).norm()
}

// Closest-point parameters on two segments, clamped to [0, 1].
fn closest_parameters(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> (f64, f64) {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);
    let eps = 1e-300;
    if a <= eps && e <= eps {
        return (0.0, 0.0);
    }
    if a <= eps {
        return (0.0, (f / e).clamp(0.0, 1.0));
    }
    let c = d1.dot(&r);
    if e <= eps {
        return ((-c / a).clamp(0.0, 1.0), 0.0);
    }
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-18 * a * e {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    (s, t)
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Maximum pairwise distance between the given points.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// Fractional part of `x * golden ratio`, a deterministic low-discrepancy
/// sequence used for reproducible height jitter.
pub(crate) fn golden_fraction(k: usize) -> f64 {
    const PHI_INV: f64 = 0.618_033_988_749_894_9;
    (k as f64 * PHI_INV).fract()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_parallel_and_skew() {
        let d = segment_distance(
            &Point::new(0.0, 0.0, 0.0),
            &Point::new(1.0, 0.0, 0.0),
            &Point::new(0.0, 1.0, 0.0),
            &Point::new(1.0, 1.0, 0.0),
        );
        assert!((d - 1.0).abs() < 1e-12);
        let d = segment_distance(
            &Point::new(-1.0, 0.0, 0.0),
            &Point::new(1.0, 0.0, 0.0),
            &Point::new(0.0, -1.0, 0.5),
            &Point::new(0.0, 1.0, 0.5),
        );
        assert!((d - 0.5).abs() < 1e-12);
        // endpoints closest
        let d = segment_distance(
            &Point::new(0.0, 0.0, 0.0),
            &Point::new(1.0, 0.0, 0.0),
            &Point::new(2.0, 1.0, 0.0),
            &Point::new(3.0, 1.0, 0.0),
        );
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn segment_distance_matches_sampling() {
        let p = [
            Point::new(0.1, 0.2, -0.3),
            Point::new(0.9, -0.4, 0.2),
            Point::new(-0.5, 0.7, 0.1),
            Point::new(0.3, 0.1, 0.8),
        ];
        let exact = segment_distance(&p[0], &p[1], &p[2], &p[3]);
        let mut sampled = f64::INFINITY;
        for i in 0..=400 {
            for j in 0..=400 {
                let a = p[0] + (p[1] - p[0]) * (i as f64 / 400.0);
                let b = p[2] + (p[3] - p[2]) * (j as f64 / 400.0);
                sampled = sampled.min((a - b).norm());
            }
        }
        assert!(exact <= sampled + 1e-12);
        assert!(sampled - exact < 1e-2);
    }
}
