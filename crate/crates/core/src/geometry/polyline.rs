use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    diameter, golden_fraction, segment_distance, GeometryError, Point, HEIGHT_TOLERANCE, TOLERANCE,
};

/// A closed, embedded piecewise-linear curve. The last vertex is joined to the
/// first by an implicit edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPolyline {
    vertices: Vec<Point>,
}

/// Violations of genericity with respect to the height function.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    /// Pairs of vertex indices whose heights coincide.
    pub duplicate_heights: Vec<(usize, usize)>,
    /// Indices `i` of edges `(i, i + 1)` with no height change.
    pub horizontal_edges: Vec<usize>,
}

impl GenericityReport {
    pub fn is_empty(&self) -> bool {
        self.duplicate_heights.is_empty() && self.horizontal_edges.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.duplicate_heights.len() + self.horizontal_edges.len()
    }
}

impl fmt::Display for GenericityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} duplicate vertex height(s), {} horizontal edge(s)",
            self.duplicate_heights.len(),
            self.horizontal_edges.len()
        )
    }
}

impl ClosedPolyline {
    /// Validates and wraps a vertex list. Rejects fewer than three vertices,
    /// zero-length edges, and self-intersections.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::InvalidInput(format!(
                "a closed polyline needs at least 3 vertices, got {n}"
            )));
        }
        if let Some(v) = vertices
            .iter()
            .position(|p| !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()))
        {
            return Err(GeometryError::InvalidInput(format!(
                "vertex {v} has a non-finite coordinate"
            )));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if (vertices[j] - vertices[i]).norm() <= TOLERANCE {
                return Err(GeometryError::InvalidInput(format!(
                    "edge {i} has zero length (vertices {i} and {j} coincide)"
                )));
            }
        }
        let curve = ClosedPolyline { vertices };
        if let Some((i, j, d)) = curve.first_intersection() {
            return Err(GeometryError::InvalidInput(format!(
                "curve self-intersects: edges {i} and {j} are {d:e} apart"
            )));
        }
        Ok(curve)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Endpoints of edge `i`, which runs from vertex `i` to vertex `i + 1 mod n`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn heights(&self) -> Vec<f64> {
        self.vertices.iter().map(|p| p.z).collect()
    }

    pub fn height_range(&self) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.z), hi.max(p.z))
            })
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices)
    }

    /// Translates the vertex centroid to the origin and scales to unit diameter.
    /// Curves already in that position (to 1e-12) are returned unchanged, so
    /// normalising is idempotent bit for bit.
    pub fn normalized(&self) -> ClosedPolyline {
        let n = self.vertices.len() as f64;
        let centroid = self
            .vertices
            .iter()
            .fold(Point::origin(), |acc, p| acc + p.coords / n);
        let diameter = self.diameter();
        if centroid.coords.norm() < 1e-12 && (diameter - 1.0).abs() < 1e-12 {
            return self.clone();
        }
        let scale = 1.0 / diameter;
        ClosedPolyline {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point::from((p - centroid) * scale))
                .collect(),
        }
    }

    /// The same curve traversed in the opposite direction.
    pub fn reversed(&self) -> ClosedPolyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        ClosedPolyline { vertices }
    }

    fn edges_adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.vertices.len();
        (i + 1) % n == j || (j + 1) % n == i
    }

    // Non-adjacent edges closer than the tolerance, or adjacent edges that
    // fold back onto each other.
    fn first_intersection(&self) -> Option<(usize, usize, f64)> {
        let n = self.vertices.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let a = self.vertices[j] - self.vertices[i];
            let b = self.vertices[(j + 1) % n] - self.vertices[j];
            let cross = a.cross(&b).norm();
            if cross <= TOLERANCE * a.norm() * b.norm() && a.dot(&b) < 0.0 {
                return Some((i, j, 0.0));
            }
        }
        (0..n)
            .into_par_iter()
            .filter_map(|i| {
                let (p0, p1) = self.edge(i);
                (i + 1..n).find_map(|j| {
                    if self.edges_adjacent(i, j) {
                        return None;
                    }
                    let (q0, q1) = self.edge(j);
                    let d = segment_distance(&p0, &p1, &q0, &q1);
                    (d <= TOLERANCE).then_some((i, j, d))
                })
            })
            .min_by_key(|&(i, j, _)| (i, j))
    }

    /// Minimum distance between edges that share no vertex, or `None` when every
    /// pair of edges is adjacent (a triangle).
    pub fn min_nonadjacent_distance(&self) -> Option<f64> {
        let n = self.vertices.len();
        (0..n)
            .into_par_iter()
            .filter_map(|i| {
                let (p0, p1) = self.edge(i);
                (i + 1..n)
                    .filter(|&j| !self.edges_adjacent(i, j))
                    .map(|j| {
                        let (q0, q1) = self.edge(j);
                        segment_distance(&p0, &p1, &q0, &q1)
                    })
                    .reduce(f64::min)
            })
            .reduce_with(f64::min)
    }

    pub fn min_edge_length(&self) -> f64 {
        (0..self.vertices.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                (b - a).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest geometric scale of the curve: the shortest edge or the closest
    /// approach of two non-adjacent edges.
    pub fn feature_size(&self) -> f64 {
        let edge = self.min_edge_length();
        self.min_nonadjacent_distance()
            .map_or(edge, |d| d.min(edge))
    }

    /// Lists duplicate vertex heights and horizontal edges.
    pub fn validate_genericity(&self) -> GenericityReport {
        let n = self.vertices.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.vertices[a].z.total_cmp(&self.vertices[b].z));
        let mut duplicate_heights = Vec::new();
        for (k, &a) in order.iter().enumerate() {
            for &b in &order[k + 1..] {
                if self.vertices[b].z - self.vertices[a].z > HEIGHT_TOLERANCE {
                    break;
                }
                duplicate_heights.push((a.min(b), a.max(b)));
            }
        }
        duplicate_heights.sort_unstable();
        let horizontal_edges = (0..n)
            .filter(|&i| {
                let (a, b) = self.edge(i);
                (b.z - a.z).abs() <= HEIGHT_TOLERANCE
            })
            .collect();
        GenericityReport {
            duplicate_heights,
            horizontal_edges,
        }
    }

    pub fn is_generic(&self) -> bool {
        self.validate_genericity().is_empty()
    }

    /// Returns an error carrying the genericity report unless the curve is generic.
    pub fn require_generic(&self) -> Result<(), GeometryError> {
        let report = self.validate_genericity();
        if report.is_empty() {
            Ok(())
        } else {
            Err(GeometryError::NotGeneric(report))
        }
    }

    /// Repairs genericity by deterministic height offsets smaller than `epsilon`.
    ///
    /// A generic curve is returned unchanged. `epsilon` must be below half the
    /// feature size so the repaired curve stays isotopic to the input.
    pub fn perturb_generic(&self, epsilon: f64) -> Result<ClosedPolyline, GeometryError> {
        if !(epsilon > 0.0) {
            return Err(GeometryError::InvalidInput(format!(
                "perturbation epsilon must be positive, got {epsilon}"
            )));
        }
        if self.is_generic() {
            return Ok(self.clone());
        }
        let feature = self.feature_size();
        if epsilon >= 0.5 * feature {
            return Err(GeometryError::PerturbationTooLarge { epsilon, feature });
        }
        let n = self.vertices.len();
        // Offsets are rational ramps first, then golden-ratio jitter at
        // decreasing scales; every offset stays strictly below epsilon.
        for attempt in 0..8 {
            let vertices: Vec<Point> = self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let offset = if attempt == 0 {
                        epsilon * (i + 1) as f64 / (n + 1) as f64
                    } else {
                        let scale = 0.5f64.powi(attempt - 1);
                        epsilon * scale * (0.05 + 0.9 * golden_fraction(i + 1 + attempt as usize))
                    };
                    Point::new(p.x, p.y, p.z + offset)
                })
                .collect();
            if let Ok(candidate) = ClosedPolyline::new(vertices) {
                if candidate.is_generic() {
                    return Ok(candidate);
                }
            }
        }
        Err(GeometryError::Construction(format!(
            "no generic perturbation found within epsilon {epsilon:e}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn tilted_circle(n: usize) -> ClosedPolyline {
        let vertices = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64 + 0.1;
                Point::new(t.cos(), t.sin(), 0.3 * t.cos() + 0.05 * t.sin())
            })
            .collect();
        ClosedPolyline::new(vertices).unwrap()
    }

    fn flat_square() -> ClosedPolyline {
        ClosedPolyline::new(vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(1.0, 1.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_degenerate_curves() {
        let two = ClosedPolyline::new(vec![Point::origin(), Point::new(1.0, 0.0, 0.0)]);
        assert!(matches!(two, Err(GeometryError::InvalidInput(_))));
        let repeated = ClosedPolyline::new(vec![
            Point::origin(),
            Point::origin(),
            Point::new(1.0, 0.0, 0.0),
        ]);
        assert!(matches!(repeated, Err(GeometryError::InvalidInput(_))));
        // bow tie: edges 0 and 2 cross at the centre
        let bow_tie = ClosedPolyline::new(vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 1.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
        ]);
        assert!(matches!(bow_tie, Err(GeometryError::InvalidInput(_))));
        let folded = ClosedPolyline::new(vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(2.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(1.0, 1.0, 0.0),
        ]);
        assert!(folded.is_err());
    }

    #[test]
    fn tilted_circle_is_generic() {
        assert!(tilted_circle(16).validate_genericity().is_empty());
    }

    #[test]
    fn flat_square_reports_every_violation() {
        let report = flat_square().validate_genericity();
        assert_eq!(report.horizontal_edges, vec![0, 1, 2, 3]);
        assert_eq!(report.duplicate_heights.len(), 6);
    }

    #[test]
    fn perturbing_a_generic_curve_is_a_no_op() {
        let c = tilted_circle(16);
        assert_eq!(c.perturb_generic(1e-3).unwrap(), c);
        assert_eq!(c.perturb_generic(10.0).unwrap(), c);
    }

    #[test]
    fn perturbing_the_flat_square() {
        let square = flat_square();
        let fixed = square.perturb_generic(1e-3).unwrap();
        assert!(fixed.validate_genericity().is_empty());
        for (a, b) in square.vertices().iter().zip(fixed.vertices()) {
            assert!((a - b).norm() < 1e-3);
        }
    }

    #[test]
    fn perturbation_separates_two_equal_heights() {
        let c = ClosedPolyline::new(vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.5),
            Point::new(1.0, 1.0, 0.2),
            Point::new(0.0, 1.0, 0.5),
        ])
        .unwrap();
        assert_eq!(c.validate_genericity().duplicate_heights, vec![(1, 3)]);
        let fixed = c.perturb_generic(1e-6).unwrap();
        let h = fixed.heights();
        assert!((h[1] - h[3]).abs() > HEIGHT_TOLERANCE);
        assert!(fixed.is_generic());
    }

    #[test]
    fn oversized_epsilon_is_refused() {
        let err = flat_square().perturb_generic(0.6).unwrap_err();
        assert!(matches!(err, GeometryError::PerturbationTooLarge { .. }));
    }

    #[test]
    fn normalization_gives_unit_diameter() {
        let c = tilted_circle(16).normalized();
        assert!((c.diameter() - 1.0).abs() < 1e-12);
    }
}
