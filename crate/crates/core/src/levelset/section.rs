use std::collections::HashMap;

use nalgebra::Point2;

use super::{curve_class_on_torus, LevelError};
use crate::geometry::{Point, TubeMesh, HEIGHT_TOLERANCE};

/// A point on a mesh edge `lo -> hi` at fraction `t` from `lo`. A mesh vertex
/// is represented with `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePoint {
    pub lo: usize,
    pub hi: usize,
    pub t: f64,
}

impl EdgePoint {
    pub fn vertex(v: usize) -> Self {
        EdgePoint {
            lo: v,
            hi: v,
            t: 0.0,
        }
    }

    pub fn position(&self, mesh: &TubeMesh) -> Point {
        let a = mesh.vertices[self.lo];
        let b = mesh.vertices[self.hi];
        a + (b - a) * self.t
    }
}

/// A closed curve on the mesh: `points[k] -> points[k + 1]` runs inside
/// triangle `triangles[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionCurve {
    pub points: Vec<EdgePoint>,
    pub triangles: Vec<usize>,
    pub polygon: Vec<Point2<f64>>,
    /// `(meridian, longitude)` coordinates of the class in the first homology
    /// of the torus.
    pub homology: (i64, i64),
    pub essential: bool,
}

impl SectionCurve {
    /// Builds a curve and classifies it.
    pub fn on_mesh(
        mesh: &TubeMesh,
        points: Vec<EdgePoint>,
        triangles: Vec<usize>,
    ) -> Result<Self, LevelError> {
        if points.len() != triangles.len() || points.len() < 2 {
            return Err(LevelError::Topology(format!(
                "curve needs one triangle per segment, got {} points and {} triangles",
                points.len(),
                triangles.len()
            )));
        }
        let polygon = points
            .iter()
            .map(|p| {
                let q = p.position(mesh);
                Point2::new(q.x, q.y)
            })
            .collect();
        let mut curve = SectionCurve {
            points,
            triangles,
            polygon,
            homology: (0, 0),
            essential: false,
        };
        curve.homology = curve_class_on_torus(mesh, &curve)?;
        curve.essential = curve.homology != (0, 0);
        Ok(curve)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Signed area of the planar polygon (positive when counter-clockwise).
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.polygon)
    }
}

pub(crate) fn signed_area(polygon: &[Point2<f64>]) -> f64 {
    let n = polygon.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (polygon[i], polygon[(i + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum::<f64>()
}

pub(crate) fn require_regular(heights: &[f64], z: f64) -> Result<(), LevelError> {
    match heights
        .iter()
        .position(|h| (h - z).abs() <= HEIGHT_TOLERANCE)
    {
        Some(vertex) => Err(LevelError::NotRegular { z, vertex }),
        None => Ok(()),
    }
}

/// Closed curves in which the plane at height `z` cuts the mesh, oriented as
/// the boundary of the part of the torus below `z`.
pub fn section_torus(mesh: &TubeMesh, z: f64) -> Result<Vec<SectionCurve>, LevelError> {
    let heights = mesh.heights();
    require_regular(&heights, z)?;
    let crossing = |a: usize, b: usize| -> EdgePoint {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        EdgePoint {
            lo,
            hi,
            t: (z - heights[lo]) / (heights[hi] - heights[lo]),
        }
    };

    // directed segments keyed by the undirected edge they start on
    let mut segments: Vec<(EdgePoint, EdgePoint, usize)> = Vec::new();
    for (index, tri) in mesh.triangles.iter().enumerate() {
        let below = tri.map(|v| heights[v] < z);
        let count = below.iter().filter(|&&b| b).count();
        if count == 0 || count == 3 {
            continue;
        }
        // the vertex alone on its side, then the other two in cyclic order
        let k = (0..3)
            .find(|&k| below[k] == (count == 1))
            .expect("a lone vertex exists");
        let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
        let (pab, pac) = (crossing(a, b), crossing(a, c));
        // sublevel region to the left when seen from outside
        if count == 1 {
            segments.push((pab, pac, index));
        } else {
            segments.push((pac, pab, index));
        }
    }

    let mut starting: HashMap<(usize, usize), usize> = HashMap::with_capacity(segments.len());
    for (k, (start, _, _)) in segments.iter().enumerate() {
        if starting.insert((start.lo, start.hi), k).is_some() {
            return Err(LevelError::Topology(format!(
                "mesh edge ({}, {}) starts two section segments",
                start.lo, start.hi
            )));
        }
    }

    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();
    for first in 0..segments.len() {
        if used[first] {
            continue;
        }
        let mut points = Vec::new();
        let mut triangles = Vec::new();
        let mut k = first;
        loop {
            used[k] = true;
            let (start, end, tri) = segments[k];
            points.push(start);
            triangles.push(tri);
            let next = *starting.get(&(end.lo, end.hi)).ok_or_else(|| {
                LevelError::Topology(format!(
                    "section at z = {z} leaves the mesh through edge ({}, {})",
                    end.lo, end.hi
                ))
            })?;
            if next == first {
                break;
            }
            if used[next] {
                return Err(LevelError::Topology(format!(
                    "section at z = {z} revisits a segment"
                )));
            }
            k = next;
        }
        curves.push(SectionCurve::on_mesh(mesh, points, triangles)?);
    }
    Ok(curves)
}
