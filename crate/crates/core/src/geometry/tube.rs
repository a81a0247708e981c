use std::f64::consts::TAU;

use super::{
    golden_fraction, rotation_minimizing_frame, ClosedPolyline, FrameField, GeometryError, Point,
    Vector, HEIGHT_TOLERANCE, TUBE_SAFETY_FACTOR,
};
use crate::pattern::PatternCurve;

/// Largest tube radius considered safe around `curve`: the safety factor times
/// the smaller of the closest approach of non-adjacent edges and the turning
/// clearance at each vertex.
pub fn safe_tube_radius(curve: &ClosedPolyline) -> f64 {
    TUBE_SAFETY_FACTOR * clearance(curve)
}

fn clearance(curve: &ClosedPolyline) -> f64 {
    let pts = curve.vertices();
    let n = pts.len();
    let turning = (0..n)
        .map(|i| {
            let a = pts[i] - pts[(i + n - 1) % n];
            let b = pts[(i + 1) % n] - pts[i];
            let angle = a.angle(&b);
            let half_edge = 0.5 * a.norm().min(b.norm());
            if angle < 1e-12 {
                f64::INFINITY
            } else {
                half_edge / (0.5 * angle).tan()
            }
        })
        .fold(f64::INFINITY, f64::min);
    curve
        .min_nonadjacent_distance()
        .map_or(turning, |d| d.min(turning))
}

/// A solid torus around a companion curve, parametrised by the lifted angle
/// `theta` along the core and a point `(u, v)` of the unit disk.
#[derive(Debug, Clone)]
pub struct SolidTorusEmbedding {
    core: ClosedPolyline,
    radius: f64,
    frame: FrameField,
    twist: i64,
    normals: Vec<Vector>,
}

const SECTIONS_PER_EDGE: usize = 4;

impl SolidTorusEmbedding {
    /// Builds the embedding; `radius` defaults to [`safe_tube_radius`].
    pub fn new(
        core: ClosedPolyline,
        radius: Option<f64>,
        twist: i64,
    ) -> Result<Self, GeometryError> {
        let safe = safe_tube_radius(&core);
        let radius = radius.unwrap_or(safe);
        if !(radius > 0.0) || radius > safe * (1.0 + 1e-12) {
            return Err(GeometryError::InvalidInput(format!(
                "tube radius {radius:e} must be positive and at most the safe radius {safe:e}"
            )));
        }
        let frame = rotation_minimizing_frame(&core);
        let normals = (0..core.len())
            .map(|i| frame.closed_normal(i, twist))
            .collect();
        let torus = SolidTorusEmbedding {
            core,
            radius,
            frame,
            twist,
            normals,
        };
        if let Some((a, b)) = torus.overlapping_sections() {
            return Err(GeometryError::Construction(format!(
                "tube of radius {radius:e} overlaps itself: cross-sections at core parameters {a} and {b} intersect"
            )));
        }
        Ok(torus)
    }

    pub fn core(&self) -> &ClosedPolyline {
        &self.core
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// Centre and in-plane axes `(N, B)` of the cross-section at core parameter
    /// `s` (vertex index plus fraction along the outgoing edge).
    pub fn section(&self, s: f64) -> (Point, Vector, Vector) {
        let n = self.core.len();
        let s = s.rem_euclid(n as f64);
        let i = (s.floor() as usize).min(n - 1);
        let f = s - i as f64;
        let j = (i + 1) % n;
        let pts = self.core.vertices();
        let centre = pts[i] + (pts[j] - pts[i]) * f;
        let t = (self.frame.tangents[i] * (1.0 - f) + self.frame.tangents[j] * f).normalize();
        let raw = self.normals[i] * (1.0 - f) + self.normals[j] * f;
        let normal = (raw - t * raw.dot(&t)).normalize();
        let binormal = t.cross(&normal);
        (centre, normal, binormal)
    }

    /// Image of the solid-torus point `(theta, u, v)`.
    pub fn map(&self, theta: f64, u: f64, v: f64) -> Point {
        let s = (theta / TAU).rem_euclid(1.0) * self.core.len() as f64;
        let (centre, normal, binormal) = self.section(s);
        centre + (normal * u + binormal * v) * self.radius
    }

    fn overlapping_sections(&self) -> Option<(f64, f64)> {
        let count = SECTIONS_PER_EDGE * self.core.len();
        let sections: Vec<(f64, Point, Vector)> = (0..count)
            .map(|k| {
                let s = k as f64 / SECTIONS_PER_EDGE as f64;
                let (c, n, b) = self.section(s);
                (s, c, n.cross(&b))
            })
            .collect();
        for (a, sa) in sections.iter().enumerate() {
            for sb in &sections[a + 1..] {
                if disks_intersect(&sa.1, &sa.2, &sb.1, &sb.2, self.radius) {
                    return Some((sa.0, sb.0));
                }
            }
        }
        None
    }
}

// Whether two disks of equal radius with the given centres and unit normals meet.
fn disks_intersect(c1: &Point, n1: &Vector, c2: &Point, n2: &Vector, r: f64) -> bool {
    if (c2 - c1).norm() >= 2.0 * r {
        return false;
    }
    let dir = n1.cross(n2);
    let dn = dir.norm();
    if dn < 1e-12 {
        return (c2 - c1).dot(n1).abs() < 1e-12;
    }
    let u = dir / dn;
    let (d1, d2) = (n1.dot(&c1.coords), n2.dot(&c2.coords));
    let p0 = Point::from((n2.cross(&dir) * d1 + dir.cross(n1) * d2) / (dn * dn));
    let chord = |c: &Point| -> Option<(f64, f64)> {
        let t = (c - p0).dot(&u);
        let h2 = (c - (p0 + u * t)).norm_squared();
        (h2 < r * r).then(|| {
            let w = (r * r - h2).sqrt();
            (t - w, t + w)
        })
    };
    match (chord(c1), chord(c2)) {
        (Some((a0, a1)), Some((b0, b1))) => a0 < b1 && b0 < a1,
        _ => false,
    }
}

/// Maps a pattern into the solid torus, sampling each pattern edge
/// `samples_per_edge` times, and repairs genericity of the result.
pub fn embed_pattern(
    torus: &SolidTorusEmbedding,
    pattern: &PatternCurve,
    samples_per_edge: usize,
) -> Result<ClosedPolyline, GeometryError> {
    if samples_per_edge == 0 {
        return Err(GeometryError::InvalidInput(
            "samples_per_edge must be positive".into(),
        ));
    }
    let mut points = Vec::with_capacity(pattern.len() * samples_per_edge);
    for (a, b) in pattern.edges() {
        for k in 0..samples_per_edge {
            let f = k as f64 / samples_per_edge as f64;
            points.push(torus.map(
                a.theta + (b.theta - a.theta) * f,
                a.u + (b.u - a.u) * f,
                a.v + (b.v - a.v) * f,
            ));
        }
    }
    let curve = ClosedPolyline::new(points).map_err(|e| {
        GeometryError::Construction(format!(
            "embedded pattern is not a valid curve ({e}); reduce the tube radius or refine the sampling"
        ))
    })?;
    if curve.is_generic() {
        return Ok(curve);
    }
    let epsilon = (0.25 * curve.feature_size()).min(1e-7);
    curve.perturb_generic(epsilon)
}

/// Triangulated boundary torus of a solid torus embedding, on a
/// `longitudinal x meridional` grid of vertices.
#[derive(Debug, Clone)]
pub struct TubeMesh {
    pub vertices: Vec<Point>,
    /// Triangles oriented with outward normals.
    pub triangles: Vec<[usize; 3]>,
    pub longitudinal_res: usize,
    pub meridional_res: usize,
}

impl TubeMesh {
    pub fn vertex_index(&self, ring: usize, around: usize) -> usize {
        (ring % self.longitudinal_res) * self.meridional_res + around % self.meridional_res
    }

    /// Grid coordinates `(ring, around)` of a vertex.
    pub fn grid_coords(&self, vertex: usize) -> (usize, usize) {
        (vertex / self.meridional_res, vertex % self.meridional_res)
    }

    pub fn edge_count(&self) -> usize {
        3 * self.triangles.len() / 2
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }

    /// Vertices of the reference meridian: the cross-section ring at ring 0.
    pub fn meridian_cycle(&self) -> Vec<usize> {
        (0..self.meridional_res)
            .map(|j| self.vertex_index(0, j))
            .collect()
    }

    /// Vertices of the reference longitude: the frame line at angle 0.
    pub fn longitude_cycle(&self) -> Vec<usize> {
        (0..self.longitudinal_res)
            .map(|i| self.vertex_index(i, 0))
            .collect()
    }

    pub fn heights(&self) -> Vec<f64> {
        self.vertices.iter().map(|p| p.z).collect()
    }
}

pub fn tube_mesh(
    torus: &SolidTorusEmbedding,
    longitudinal_res: usize,
    meridional_res: usize,
) -> Result<TubeMesh, GeometryError> {
    if longitudinal_res < 8 || meridional_res < 8 {
        return Err(GeometryError::InvalidInput(format!(
            "mesh resolution must be at least 8x8, got {longitudinal_res}x{meridional_res}"
        )));
    }
    let n = torus.core().len() as f64;
    let base: Vec<Point> = (0..longitudinal_res)
        .flat_map(|i| {
            let (centre, normal, binormal) = torus.section(i as f64 * n / longitudinal_res as f64);
            (0..meridional_res).map(move |j| {
                let phi = TAU * j as f64 / meridional_res as f64;
                centre + (normal * phi.cos() + binormal * phi.sin()) * torus.radius()
            })
        })
        .collect();

    // deterministic jitter separating vertex heights
    let mut scale = 1e-9;
    let vertices = loop {
        let jittered: Vec<Point> = base
            .iter()
            .enumerate()
            .map(|(k, p)| Point::new(p.x, p.y, p.z + scale * golden_fraction(k + 1)))
            .collect();
        let mut zs: Vec<f64> = jittered.iter().map(|p| p.z).collect();
        zs.sort_by(f64::total_cmp);
        if zs.windows(2).all(|w| w[1] - w[0] > HEIGHT_TOLERANCE) {
            break jittered;
        }
        scale *= 2.0;
        if scale > 1e-6 {
            return Err(GeometryError::Construction(
                "could not separate mesh vertex heights".into(),
            ));
        }
    };

    let mut triangles = Vec::with_capacity(2 * longitudinal_res * meridional_res);
    let idx = |i: usize, j: usize| (i % longitudinal_res) * meridional_res + j % meridional_res;
    for i in 0..longitudinal_res {
        for j in 0..meridional_res {
            let a = idx(i, j);
            let b = idx(i + 1, j);
            let c = idx(i + 1, j + 1);
            let d = idx(i, j + 1);
            triangles.push([a, c, b]);
            triangles.push([a, d, c]);
        }
    }
    Ok(TubeMesh {
        vertices,
        triangles,
        longitudinal_res,
        meridional_res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, tilt: f64) -> ClosedPolyline {
        ClosedPolyline::new(
            (0..n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64 + 0.1;
                    Point::new(t.cos(), t.sin(), tilt * t.cos())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn safe_radius_of_a_circle_matches_brute_force() {
        let c = circle(16, 0.0);
        // brute force over sampled points of every non-adjacent edge pair
        let pts = c.vertices();
        let n = pts.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let adjacent = i == j || (i + 1) % n == j || (j + 1) % n == i;
                if adjacent {
                    continue;
                }
                for a in 0..=50 {
                    for b in 0..=50 {
                        let p = pts[i] + (pts[(i + 1) % n] - pts[i]) * (a as f64 / 50.0);
                        let q = pts[j] + (pts[(j + 1) % n] - pts[j]) * (b as f64 / 50.0);
                        best = best.min((p - q).norm());
                    }
                }
            }
        }
        let r = safe_tube_radius(&c);
        assert!(r <= 0.45 * best + 1e-12);
        assert!(r > 0.0);
    }

    #[test]
    fn near_touching_arcs_bound_the_radius() {
        let d = 0.01;
        // a thin rectangle: two long sides d apart
        let c = ClosedPolyline::new(vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(0.5, 0.0, 0.01),
            Point::new(1.0, 0.0, 0.02),
            Point::new(1.0, d, 0.03),
            Point::new(0.5, d, 0.04),
            Point::new(0.0, d, 0.05),
        ])
        .unwrap();
        assert!(safe_tube_radius(&c) <= 0.45 * d + 1e-12);
    }

    #[test]
    fn disk_intersection_cases() {
        let z = Vector::z();
        let x = Vector::x();
        let o = Point::origin();
        assert!(disks_intersect(&o, &z, &Point::new(0.5, 0.0, 0.0), &x, 1.0));
        assert!(!disks_intersect(
            &o,
            &z,
            &Point::new(0.0, 0.0, 0.5),
            &z,
            1.0
        ));
        assert!(!disks_intersect(
            &o,
            &z,
            &Point::new(3.0, 0.0, 0.0),
            &x,
            1.0
        ));
        // perpendicular disk whose chord misses the first disk
        assert!(!disks_intersect(
            &o,
            &z,
            &Point::new(0.0, 0.0, 1.5),
            &x,
            1.0
        ));
    }

    #[test]
    fn oversized_radius_is_rejected() {
        let c = circle(16, 0.3);
        let safe = safe_tube_radius(&c);
        assert!(SolidTorusEmbedding::new(c.clone(), Some(2.0 * safe), 0).is_err());
        assert!(SolidTorusEmbedding::new(c, None, 0).is_ok());
    }

    #[test]
    fn mesh_counts() {
        let torus = SolidTorusEmbedding::new(circle(16, 0.3), None, 0).unwrap();
        let mesh = tube_mesh(&torus, 32, 16).unwrap();
        assert_eq!(mesh.vertices.len(), 512);
        assert_eq!(mesh.triangles.len(), 1024);
        assert_eq!(mesh.euler_characteristic(), 0);
        assert_eq!(mesh.meridian_cycle().len(), 16);
        assert_eq!(mesh.longitude_cycle().len(), 32);
        assert!(tube_mesh(&torus, 4, 16).is_err());
        for p in &mesh.vertices {
            let d = torus
                .core()
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, _)| {
                    let (a, b) = torus.core().edge(i);
                    crate::geometry::point_segment_distance(p, &a, &b)
                })
                .fold(f64::INFINITY, f64::min);
            assert!(d <= torus.radius() + 1e-6);
        }
    }

    #[test]
    fn outward_orientation() {
        let torus = SolidTorusEmbedding::new(circle(16, 0.0), None, 0).unwrap();
        let mesh = tube_mesh(&torus, 16, 8).unwrap();
        for (k, t) in mesh.triangles.iter().enumerate() {
            let [a, b, c] = t.map(|v| mesh.vertices[v]);
            let normal = (b - a).cross(&(c - a));
            let centroid = Point::from((a.coords + b.coords + c.coords) / 3.0);
            let ring = mesh.grid_coords(t[0]).0;
            let (centre, _, _) = torus.section(ring as f64 * 16.0 / 16.0);
            assert!(
                normal.dot(&(centroid - centre)) > 0.0,
                "triangle {k} points inward"
            );
        }
    }
}
