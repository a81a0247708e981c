use nalgebra::Point2;
use serde::{Deserialize, Serialize};

use super::{LevelError, SectionCurve};
use crate::geometry::{Point, TubeMesh, Vector};

/// One connected piece of the solid torus cut by the plane: a planar region
/// inside the tube together with its boundary curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelComponent {
    /// Region index: `c + 1` is the region just inside curve `c`.
    pub region: usize,
    /// Indices of the bounding section curves.
    pub boundary: Vec<usize>,
    /// Number of essential boundary curves.
    pub essential_count: usize,
    pub principal: bool,
    /// Crossings of the satellite with this component.
    pub k_hits: usize,
}

/// Nesting structure of the section curves in the plane and the pieces of
/// the solid torus they bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Grouping {
    /// Innermost curve enclosing each curve.
    pub parent: Vec<Option<usize>>,
    /// Whether each region lies inside the solid torus; region 0 is unbounded.
    pub inside: Vec<bool>,
    pub components: Vec<LevelComponent>,
}

impl Grouping {
    /// Region containing a planar point, by the innermost enclosing curve.
    pub fn region_of(&self, curves: &[SectionCurve], p: &Point2<f64>) -> usize {
        let mut best: Option<(f64, usize)> = None;
        for (c, curve) in curves.iter().enumerate() {
            if point_in_polygon(&curve.polygon, p) {
                let area = curve.signed_area().abs();
                if best.is_none_or(|(a, _)| area < a) {
                    best = Some((area, c));
                }
            }
        }
        best.map_or(0, |(_, c)| c + 1)
    }

    pub fn component_of_region(&self, region: usize) -> Option<usize> {
        self.components.iter().position(|c| c.region == region)
    }
}

/// Crossing-number point-in-polygon test.
pub fn point_in_polygon(polygon: &[Point2<f64>], p: &Point2<f64>) -> bool {
    let n = polygon.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn nesting(curves: &[SectionCurve]) -> Vec<Option<usize>> {
    let areas: Vec<f64> = curves.iter().map(|c| c.signed_area().abs()).collect();
    (0..curves.len())
        .map(|c| {
            let probe = curves[c].polygon[0];
            (0..curves.len())
                .filter(|&d| d != c && areas[d] > areas[c])
                .filter(|&d| point_in_polygon(&curves[d].polygon, &probe))
                .min_by(|&a, &b| areas[a].total_cmp(&areas[b]))
        })
        .collect()
}

const RAY_DIRECTIONS: [[f64; 3]; 3] = [[0.13, 0.07, 1.0], [-0.11, 0.17, 1.0], [0.05, -0.19, 1.0]];

// Parity of ray crossings with the mesh, or `None` when the ray passes too
// close to a triangle edge to decide.
fn ray_parity(mesh: &TubeMesh, origin: &Point, dir: &Vector) -> Option<bool> {
    const EDGE_EPS: f64 = 1e-9;
    let mut parity = false;
    for tri in &mesh.triangles {
        let [a, b, c] = tri.map(|v| mesh.vertices[v]);
        if a.z.max(b.z).max(c.z) < origin.z {
            continue;
        }
        let e1 = b - a;
        let e2 = c - a;
        let h = dir.cross(&e2);
        let det = e1.dot(&h);
        if det.abs() < 1e-14 {
            continue;
        }
        let s = origin - a;
        let u = s.dot(&h) / det;
        let q = s.cross(&e1);
        let v = dir.dot(&q) / det;
        let t = e2.dot(&q) / det;
        if u < -EDGE_EPS || v < -EDGE_EPS || u + v > 1.0 + EDGE_EPS || t < -EDGE_EPS {
            continue;
        }
        if u < EDGE_EPS || v < EDGE_EPS || u + v > 1.0 - EDGE_EPS || t < EDGE_EPS {
            return None;
        }
        parity = !parity;
    }
    Some(parity)
}

/// Majority vote of three ray-parity tests.
pub fn point_in_solid(mesh: &TubeMesh, p: &Point) -> Option<bool> {
    let votes: Vec<bool> = RAY_DIRECTIONS
        .iter()
        .filter_map(|d| ray_parity(mesh, p, &Vector::new(d[0], d[1], d[2]).normalize()))
        .collect();
    let yes = votes.iter().filter(|&&v| v).count();
    let no = votes.len() - yes;
    if yes >= 2 {
        Some(true)
    } else if no >= 2 {
        Some(false)
    } else {
        None
    }
}

// Candidate sample points just inside curve `c` and outside its children.
fn region_samples(
    curves: &[SectionCurve],
    children: &[usize],
    c: usize,
    scale: f64,
) -> Vec<Point2<f64>> {
    let poly = &curves[c].polygon;
    let n = poly.len();
    let orientation = curves[c].signed_area().signum();
    let mut edges: Vec<usize> = (0..n).collect();
    edges.sort_by(|&a, &b| {
        let la = (poly[(a + 1) % n] - poly[a]).norm();
        let lb = (poly[(b + 1) % n] - poly[b]).norm();
        lb.total_cmp(&la).then(a.cmp(&b))
    });
    let mut out = Vec::new();
    for nudge in [1e-6, 1e-5, 1e-4] {
        for &e in edges.iter().take(6) {
            let (a, b) = (poly[e], poly[(e + 1) % n]);
            let d = b - a;
            let len = d.norm();
            if len == 0.0 {
                continue;
            }
            // left normal points inside a counter-clockwise polygon
            let inward = nalgebra::Vector2::new(-d.y, d.x) * (orientation / len);
            let p = nalgebra::center(&a, &b) + inward * (nudge * scale).min(0.25 * len);
            if point_in_polygon(poly, &p)
                && !children
                    .iter()
                    .any(|&k| point_in_polygon(&curves[k].polygon, &p))
            {
                out.push(p);
            }
        }
    }
    out
}

/// Groups section curves into the planar pieces of the solid torus at `z`.
///
/// Curves nest in the plane; the regions between them alternate between
/// inside and outside the solid torus. Each bounded region is tested with
/// ray parity against the mesh and must agree with that alternation.
pub fn group_components(
    mesh: &TubeMesh,
    z: f64,
    curves: &[SectionCurve],
) -> Result<Grouping, LevelError> {
    let parent = nesting(curves);
    let m = curves.len();
    let mut children = vec![Vec::new(); m];
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(c);
        }
    }
    let depth = |mut c: usize| {
        let mut d = 0;
        while let Some(p) = parent[c] {
            d += 1;
            c = p;
        }
        d
    };
    let scale = crate::geometry::diameter(&mesh.vertices);

    let mut inside = vec![false; m + 1];
    for c in 0..m {
        let samples = region_samples(curves, &children[c], c, scale);
        let verdict = samples
            .iter()
            .find_map(|p| point_in_solid(mesh, &Point::new(p.x, p.y, z)))
            .ok_or_else(|| {
                LevelError::Numerical(format!(
                    "no unambiguous inside test for the region inside curve {c} at z = {z}"
                ))
            })?;
        if verdict != (depth(c) % 2 == 0) {
            return Err(LevelError::Numerical(format!(
                "inside test for the region inside curve {c} at z = {z} contradicts the nesting"
            )));
        }
        inside[c + 1] = verdict;
    }

    let components = (0..m)
        .filter(|&c| inside[c + 1])
        .map(|c| {
            let mut boundary = vec![c];
            boundary.extend_from_slice(&children[c]);
            let essential_count = boundary.iter().filter(|&&b| curves[b].essential).count();
            LevelComponent {
                region: c + 1,
                boundary,
                essential_count,
                principal: essential_count % 2 == 1,
                k_hits: 0,
            }
        })
        .collect();
    Ok(Grouping {
        parent,
        inside,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::section::signed_area;

    #[test]
    fn polygon_membership() {
        let square = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        assert!(point_in_polygon(&square, &Point2::new(0.5, 0.5)));
        assert!(!point_in_polygon(&square, &Point2::new(1.5, 0.5)));
        assert!(!point_in_polygon(&square, &Point2::new(-0.1, 0.2)));
        assert!((signed_area(&square) - 1.0).abs() < 1e-15);
    }
}
