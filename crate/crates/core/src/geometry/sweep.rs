use serde::{Deserialize, Serialize};

use super::{ClosedPolyline, GeometryError, HEIGHT_TOLERANCE};

/// Critical heights of a generic curve and the intersection count on every
/// interval between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepProfile {
    /// Heights of the local extrema of the height function, ascending.
    pub critical_values: Vec<f64>,
    /// `interval_counts[i]` is the level count strictly between
    /// `critical_values[i - 1]` and `critical_values[i]`; the first and last
    /// entries are the empty levels below and above the curve.
    pub interval_counts: Vec<usize>,
}

impl SweepProfile {
    pub fn max_count(&self) -> usize {
        self.interval_counts.iter().copied().max().unwrap_or(0)
    }

    /// Midpoints of the bounded intervals, one per consecutive pair of
    /// critical values.
    pub fn regular_levels(&self) -> Vec<f64> {
        self.critical_values
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }
}

/// Number of edges crossing the horizontal plane at height `z`.
pub fn level_count(curve: &ClosedPolyline, z: f64) -> Result<usize, GeometryError> {
    if let Some(vertex) = curve
        .vertices()
        .iter()
        .position(|p| (p.z - z).abs() <= HEIGHT_TOLERANCE)
    {
        return Err(GeometryError::NotRegular { z, vertex });
    }
    Ok(count_crossings(curve, z))
}

fn count_crossings(curve: &ClosedPolyline, z: f64) -> usize {
    (0..curve.len())
        .filter(|&i| {
            let (a, b) = curve.edge(i);
            (a.z - z) * (b.z - z) < 0.0
        })
        .count()
}

/// Sweeps a generic curve bottom to top.
pub fn sweep_profile(curve: &ClosedPolyline) -> Result<SweepProfile, GeometryError> {
    curve.require_generic()?;
    let verts = curve.vertices();
    let n = verts.len();
    let mut critical_values: Vec<f64> = (0..n)
        .filter(|&i| {
            let prev = verts[(i + n - 1) % n].z;
            let next = verts[(i + 1) % n].z;
            let here = verts[i].z;
            (prev < here) == (next < here)
        })
        .map(|i| verts[i].z)
        .collect();
    critical_values.sort_by(f64::total_cmp);

    let mut heights = curve.heights();
    heights.sort_by(f64::total_cmp);
    let mut interval_counts = Vec::with_capacity(critical_values.len() + 1);
    interval_counts.push(0);
    for w in critical_values.windows(2) {
        let z = regular_point_between(w[0], w[1], &heights);
        interval_counts.push(count_crossings(curve, z));
    }
    interval_counts.push(0);
    Ok(SweepProfile {
        critical_values,
        interval_counts,
    })
}

// The midpoint of (lo, hi) unless it lands on a vertex height; then the
// midpoint of the widest gap between vertex heights inside the interval.
fn regular_point_between(lo: f64, hi: f64, sorted_heights: &[f64]) -> f64 {
    let mid = 0.5 * (lo + hi);
    if sorted_heights
        .iter()
        .all(|h| (h - mid).abs() > HEIGHT_TOLERANCE)
    {
        return mid;
    }
    let mut cuts: Vec<f64> = vec![lo];
    cuts.extend(sorted_heights.iter().copied().filter(|&h| h > lo && h < hi));
    cuts.push(hi);
    cuts.windows(2)
        .max_by(|a, b| (a[1] - a[0]).total_cmp(&(b[1] - b[0])))
        .map(|w| 0.5 * (w[0] + w[1]))
        .unwrap_or(mid)
}

/// Trunk of the embedding: the largest level count over regular heights.
pub fn trunk_embedding(curve: &ClosedPolyline) -> Result<usize, GeometryError> {
    Ok(sweep_profile(curve)?.max_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use std::f64::consts::TAU;

    fn tilted_circle() -> ClosedPolyline {
        let vertices = (0..16)
            .map(|i| {
                let t = TAU * i as f64 / 16.0 + 0.1;
                Point::new(t.cos(), t.sin(), 0.4 * t.cos())
            })
            .collect();
        ClosedPolyline::new(vertices).unwrap()
    }

    #[test]
    fn circle_sweep() {
        let c = tilted_circle();
        let profile = sweep_profile(&c).unwrap();
        assert_eq!(profile.critical_values.len(), 2);
        assert_eq!(profile.interval_counts, vec![0, 2, 0]);
        assert_eq!(trunk_embedding(&c).unwrap(), 2);
        assert_eq!(level_count(&c, 0.0).unwrap(), 2);
        assert_eq!(level_count(&c, 5.0).unwrap(), 0);
        assert_eq!(level_count(&c, -5.0).unwrap(), 0);
    }

    #[test]
    fn vertex_height_is_not_regular() {
        let c = tilted_circle();
        let z = c.vertices()[3].z;
        assert!(matches!(
            level_count(&c, z),
            Err(GeometryError::NotRegular { vertex: 3, .. })
        ));
    }

    #[test]
    fn non_generic_curve_has_no_profile() {
        let square = ClosedPolyline::new(vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(1.0, 1.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
        ])
        .unwrap();
        assert!(matches!(
            sweep_profile(&square),
            Err(GeometryError::NotGeneric(_))
        ));
    }
}
