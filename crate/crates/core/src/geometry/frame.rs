use std::f64::consts::TAU;

use nalgebra::{Rotation3, Unit};

use super::{ClosedPolyline, Point, Vector};

/// Per-vertex orthonormal triads transported along a closed curve with minimal
/// rotation about the tangent.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    pub tangents: Vec<Vector>,
    pub normals: Vec<Vector>,
    pub binormals: Vec<Vector>,
    /// Signed angle (radians, about the first tangent) from the first normal
    /// to the normal obtained by transporting it once around the loop.
    pub closure_twist: f64,
}

impl FrameField {
    pub fn len(&self) -> usize {
        self.tangents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tangents.is_empty()
    }

    /// Normal at vertex `i` after spreading the closure defect uniformly and
    /// adding `twist` full turns, so the corrected field closes up exactly.
    pub fn closed_normal(&self, i: usize, twist: i64) -> Vector {
        let n = self.len();
        let angle = (TAU * twist as f64 - self.closure_twist) * (i % n) as f64 / n as f64;
        let axis = Unit::new_normalize(self.tangents[i % n]);
        Rotation3::from_axis_angle(&axis, angle) * self.normals[i % n]
    }
}

/// Double-reflection transport of an initial normal along the vertex chain.
/// Returns `(tangents, normals)`; for closed chains the tangent at a vertex
/// bisects its two edges.
pub fn transport_frames(points: &[Point], closed: bool) -> (Vec<Vector>, Vec<Vector>) {
    let n = points.len();
    assert!(n >= 2, "frame transport needs at least two points");
    let edge_dir = |i: usize| (points[(i + 1) % n] - points[i]).normalize();
    let tangents: Vec<Vector> = (0..n)
        .map(|i| {
            if closed {
                let t = edge_dir((i + n - 1) % n) + edge_dir(i);
                if t.norm() > 1e-12 {
                    t.normalize()
                } else {
                    edge_dir(i)
                }
            } else if i == 0 {
                edge_dir(0)
            } else if i == n - 1 {
                edge_dir(n - 2)
            } else {
                let t = edge_dir(i - 1) + edge_dir(i);
                if t.norm() > 1e-12 {
                    t.normalize()
                } else {
                    edge_dir(i)
                }
            }
        })
        .collect();

    let mut normals = Vec::with_capacity(n);
    normals.push(initial_normal(&tangents[0]));
    for i in 0..n - 1 {
        let next = reflect_twice(
            &points[i],
            &points[i + 1],
            &tangents[i],
            &tangents[i + 1],
            &normals[i],
        );
        normals.push(next);
    }
    (tangents, normals)
}

fn initial_normal(t: &Vector) -> Vector {
    let axes = [Vector::x(), Vector::y(), Vector::z()];
    let least = axes
        .iter()
        .min_by(|a, b| a.dot(t).abs().total_cmp(&b.dot(t).abs()))
        .unwrap();
    (least - t * least.dot(t)).normalize()
}

// One step of the double-reflection rotation-minimizing transport.
fn reflect_twice(x0: &Point, x1: &Point, t0: &Vector, t1: &Vector, r0: &Vector) -> Vector {
    let v1 = x1 - x0;
    let c1 = v1.dot(&v1);
    let r_l = r0 - v1 * (2.0 / c1 * v1.dot(r0));
    let t_l = t0 - v1 * (2.0 / c1 * v1.dot(t0));
    let v2 = t1 - t_l;
    let c2 = v2.dot(&v2);
    let r = if c2 > 1e-30 {
        r_l - v2 * (2.0 / c2 * v2.dot(&r_l))
    } else {
        r_l
    };
    // re-orthonormalise against the new tangent
    (r - t1 * r.dot(t1)).normalize()
}

pub fn rotation_minimizing_frame(curve: &ClosedPolyline) -> FrameField {
    let points = curve.vertices();
    let n = points.len();
    let (tangents, normals) = transport_frames(points, true);
    let carried = reflect_twice(
        &points[n - 1],
        &points[0],
        &tangents[n - 1],
        &tangents[0],
        &normals[n - 1],
    );
    let r0 = normals[0];
    let closure_twist = tangents[0].dot(&r0.cross(&carried)).atan2(r0.dot(&carried));
    let binormals = tangents
        .iter()
        .zip(&normals)
        .map(|(t, r)| t.cross(r))
        .collect();
    FrameField {
        tangents,
        normals,
        binormals,
        closure_twist,
    }
}
