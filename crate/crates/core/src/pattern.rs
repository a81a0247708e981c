//! Pattern curves in the solid torus `S¹ × D²` and two-sided bounds on the
//! generalized Thurston norm of the meridian-disk class.
//!
//! Points are stored with a lifted angle `theta`, so the total angle advance
//! of a closed pattern is exactly `2π` times its winding number.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{segment_distance, Point};

/// Largest allowed distance from the core in the disk fiber.
pub const FIBER_MARGIN: f64 = 0.95;

const ANGLE_TOLERANCE: f64 = 1e-12;
const INTERSECTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatternError {
    #[error("invalid pattern: {0}")]
    Invalid(String),
    #[error("angle {theta} is not regular: it meets the angle of vertex {vertex}")]
    NotRegular { theta: f64, vertex: usize },
    #[error("not a satellite pattern: some meridian disk misses the curve")]
    NotSatellite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternPoint {
    pub theta: f64,
    pub u: f64,
    pub v: f64,
}

impl PatternPoint {
    pub fn new(theta: f64, u: f64, v: f64) -> Self {
        PatternPoint { theta, u, v }
    }

    fn as_point(&self, shift: f64) -> Point {
        Point::new(self.theta + shift, self.u, self.v)
    }
}

/// A closed curve in the solid torus.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCurve {
    points: Vec<PatternPoint>,
    winding: i64,
}

/// Certified interval for the norm `N` of the meridian-disk class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub lower: u64,
    pub upper: u64,
    /// Meridian angle whose disk realises `upper`.
    pub witness_theta: f64,
}

impl NormBounds {
    /// The lower bound `|w| - 1` assumes a connected minimising surface; it is
    /// only a heuristic when that bound is positive.
    pub fn lower_is_heuristic(&self) -> bool {
        self.lower > 0
    }

    pub fn contains(&self, n: u64) -> bool {
        self.lower <= n && n <= self.upper
    }
}

impl PatternCurve {
    /// Builds a pattern from its vertices followed by a closing point, which
    /// repeats the first vertex's disk coordinates with the angle advanced by
    /// a whole number of turns.
    pub fn new(mut points: Vec<PatternPoint>) -> Result<Self, PatternError> {
        if points.len() < 4 {
            return Err(PatternError::Invalid(format!(
                "need at least 3 vertices plus the closing point, got {} point(s)",
                points.len()
            )));
        }
        if let Some(i) = points
            .iter()
            .position(|p| !(p.theta.is_finite() && p.u.is_finite() && p.v.is_finite()))
        {
            return Err(PatternError::Invalid(format!(
                "point {i} has a non-finite coordinate"
            )));
        }
        let closing = points.pop().unwrap();
        let first = points[0];
        if (closing.u - first.u).abs() > ANGLE_TOLERANCE
            || (closing.v - first.v).abs() > ANGLE_TOLERANCE
        {
            return Err(PatternError::Invalid(
                "closing point does not return to the first disk position".into(),
            ));
        }
        let turns = (closing.theta - first.theta) / TAU;
        let winding = turns.round();
        if (turns - winding).abs() > 1e-9 {
            return Err(PatternError::Invalid(format!(
                "total angle advance is {turns} turns, not an integer"
            )));
        }
        if let Some(i) = points
            .iter()
            .position(|p| p.u * p.u + p.v * p.v > FIBER_MARGIN * FIBER_MARGIN + 1e-12)
        {
            return Err(PatternError::Invalid(format!(
                "vertex {i} lies outside the disk of radius {FIBER_MARGIN}"
            )));
        }
        let curve = PatternCurve {
            points,
            winding: winding as i64,
        };
        curve.check_embedded()?;
        if curve.min_meridian_sweep().1 == 0 {
            return Err(PatternError::NotSatellite);
        }
        Ok(curve)
    }

    pub fn points(&self) -> &[PatternPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The closing point: the first vertex advanced by `winding` turns.
    pub fn closing_point(&self) -> PatternPoint {
        let first = self.points[0];
        PatternPoint::new(first.theta + TAU * self.winding as f64, first.u, first.v)
    }

    /// Vertices followed by the closing point, the form accepted by [`PatternCurve::new`].
    pub fn lifted_points(&self) -> Vec<PatternPoint> {
        let mut all = self.points.clone();
        all.push(self.closing_point());
        all
    }

    /// Edges in order, the last one ending at the closing point.
    pub fn edges(&self) -> impl Iterator<Item = (PatternPoint, PatternPoint)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| {
            let end = if i + 1 < n {
                self.points[i + 1]
            } else {
                self.closing_point()
            };
            (self.points[i], end)
        })
    }

    /// The same curve with its orientation reversed.
    pub fn reversed(&self) -> PatternCurve {
        let mut lifted = self.lifted_points();
        lifted.reverse();
        PatternCurve {
            points: lifted[..lifted.len() - 1].to_vec(),
            winding: -self.winding,
        }
    }

    fn check_embedded(&self) -> Result<(), PatternError> {
        let edges: Vec<(PatternPoint, PatternPoint)> = self.edges().collect();
        let n = edges.len();
        for (i, (a, b)) in edges.iter().enumerate() {
            let len =
                ((b.theta - a.theta).powi(2) + (b.u - a.u).powi(2) + (b.v - a.v).powi(2)).sqrt();
            if len <= INTERSECTION_TOLERANCE {
                return Err(PatternError::Invalid(format!("edge {i} has zero length")));
            }
        }
        for i in 0..n {
            let (a0, a1) = edges[i];
            let (_, b1) = edges[(i + 1) % n];
            // the next edge starts where this one ends, up to whole turns
            let d1 = a1.as_point(0.0) - a0.as_point(0.0);
            let d2 = b1.as_point(0.0) - a1.as_point(0.0)
                + nalgebra::Vector3::new(
                    if i + 1 == n {
                        TAU * self.winding as f64
                    } else {
                        0.0
                    },
                    0.0,
                    0.0,
                );
            if d1.cross(&d2).norm() <= 1e-12 * d1.norm() * d2.norm() && d1.dot(&d2) < 0.0 {
                return Err(PatternError::Invalid(format!(
                    "edges {i} and {} fold back onto each other",
                    (i + 1) % n
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (p0, p1) = edges[i];
                let (q0, q1) = edges[j];
                let (plo, phi) = (p0.theta.min(p1.theta), p0.theta.max(p1.theta));
                let (qlo, qhi) = (q0.theta.min(q1.theta), q0.theta.max(q1.theta));
                let kmin = ((plo - qhi) / TAU).floor() as i64 - 1;
                let kmax = ((phi - qlo) / TAU).ceil() as i64 + 1;
                for k in kmin..=kmax {
                    let shift = TAU * k as f64;
                    if qhi + shift < plo - 1e-6 || qlo + shift > phi + 1e-6 {
                        continue;
                    }
                    let d = segment_distance(
                        &p0.as_point(0.0),
                        &p1.as_point(0.0),
                        &q0.as_point(shift),
                        &q1.as_point(shift),
                    );
                    if d > INTERSECTION_TOLERANCE {
                        continue;
                    }
                    // adjacent edges legitimately share their common endpoint
                    let shares_endpoint = adjacent && {
                        let (x, y) = if j == i + 1 { (p1, q0) } else { (p0, q1) };
                        (x.as_point(0.0) - y.as_point(shift)).norm() <= INTERSECTION_TOLERANCE
                    };
                    if !shares_endpoint {
                        return Err(PatternError::Invalid(format!(
                            "pattern self-intersects: edges {i} and {j} are {d:e} apart"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_regular(&self, theta0: f64) -> Result<(), PatternError> {
        for (vertex, p) in self.points.iter().enumerate() {
            let r = (p.theta - theta0).rem_euclid(TAU);
            if r <= ANGLE_TOLERANCE || TAU - r <= ANGLE_TOLERANCE {
                return Err(PatternError::NotRegular {
                    theta: theta0,
                    vertex,
                });
            }
        }
        Ok(())
    }

    /// Total angle advance divided by `2π`.
    pub fn winding_number(&self) -> i64 {
        self.winding
    }

    /// Number of points where the curve meets the meridian disk at `theta0`.
    pub fn meridian_count_at(&self, theta0: f64) -> Result<usize, PatternError> {
        self.check_regular(theta0)?;
        Ok(self.count_at(theta0))
    }

    fn count_at(&self, theta0: f64) -> usize {
        self.edges()
            .map(|(a, b)| {
                let (lo, hi) = (a.theta.min(b.theta), a.theta.max(b.theta));
                let first = ((lo - theta0) / TAU).floor() as i64 + 1;
                let last = ((hi - theta0) / TAU).ceil() as i64 - 1;
                (last - first + 1).max(0) as usize
            })
            .sum()
    }

    /// Sorted distinct vertex angles reduced to `[0, 2π)`.
    fn vertex_angles(&self) -> Vec<f64> {
        let mut angles: Vec<f64> = self
            .points
            .iter()
            .map(|p| p.theta.rem_euclid(TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_TOLERANCE);
        angles
    }

    /// Exact minimum of the meridian count: one probe per gap between
    /// consecutive vertex angles. Ties resolve to the smallest angle.
    pub fn min_meridian_sweep(&self) -> (f64, usize) {
        let angles = self.vertex_angles();
        let k = angles.len();
        (0..k)
            .map(|i| {
                let lo = angles[i];
                let hi = if i + 1 < k {
                    angles[i + 1]
                } else {
                    angles[0] + TAU
                };
                let mid = (0.5 * (lo + hi)).rem_euclid(TAU);
                (mid, self.count_at(mid))
            })
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.total_cmp(&b.0)))
            .unwrap()
    }

    /// Lower bound from the winding number, upper bound from the best meridian
    /// disk (a disk has Euler characteristic 1).
    pub fn norm_bounds(&self) -> NormBounds {
        let (witness_theta, count) = self.min_meridian_sweep();
        NormBounds {
            lower: self.winding.unsigned_abs().saturating_sub(1),
            upper: (count as u64).saturating_sub(1),
            witness_theta,
        }
    }
}

const VERTICES_PER_PASS: usize = 32;
const CABLE_RADIUS: f64 = 0.5;

/// The core circle `S¹ × {0}`.
pub fn core_pattern() -> PatternCurve {
    let n = 8;
    let points = (0..=n)
        .map(|k| PatternPoint::new(TAU * k as f64 / n as f64, 0.0, 0.0))
        .collect();
    PatternCurve::new(points).expect("core pattern is valid")
}

/// `(strands, twists)` cable: `strands` parallel points on a circle in the
/// fiber, rotating by `2π·twists/strands` per pass along the core.
pub fn cable_pattern(strands: u32, twists: i64) -> Result<PatternCurve, PatternError> {
    if strands == 0 {
        return Err(PatternError::Invalid(
            "a cable needs at least one strand".into(),
        ));
    }
    let total = strands as usize * VERTICES_PER_PASS;
    let points = (0..=total)
        .map(|k| {
            let theta = TAU * k as f64 / VERTICES_PER_PASS as f64;
            let psi = theta * twists as f64 / strands as f64;
            PatternPoint::new(theta, CABLE_RADIUS * psi.cos(), CABLE_RADIUS * psi.sin())
        })
        .collect();
    PatternCurve::new(points).map_err(|e| match e {
        PatternError::Invalid(_) => PatternError::Invalid(format!(
            "cable({strands}, {twists}) is not a knot: strands and twists must be coprime"
        )),
        other => other,
    })
}

/// Whitehead double pattern: the core doubled into two parallel strands that
/// are closed off by two interlocking hooks.
pub fn whitehead_pattern() -> PatternCurve {
    let a = 0.5;
    let tip = 0.25;
    let reach = 0.5;
    let samples = 32;
    let strand = |k: usize| {
        let f = k as f64 / samples as f64;
        let theta = reach + (TAU - 2.0 * reach) * f;
        let beta = FRAC_PI_2 * (1.0 - f);
        (theta, a * beta.cos(), a * beta.sin())
    };
    let mut points = Vec::new();
    for k in 0..=samples {
        let (t, u, v) = strand(k);
        points.push(PatternPoint::new(t, u, v));
    }
    points.push(PatternPoint::new(TAU + tip, a, 0.0));
    points.push(PatternPoint::new(TAU + tip, -a, 0.0));
    for k in (0..=samples).rev() {
        let (t, u, v) = strand(k);
        points.push(PatternPoint::new(t, -u, -v));
    }
    points.push(PatternPoint::new(-tip, 0.0, -a));
    points.push(PatternPoint::new(-tip, 0.0, a));
    points.push(points[0]);
    PatternCurve::new(points).expect("whitehead pattern is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_numbers() {
        assert_eq!(core_pattern().winding_number(), 1);
        assert_eq!(cable_pattern(1, 0).unwrap().winding_number(), 1);
        assert_eq!(cable_pattern(2, 3).unwrap().winding_number(), 2);
        assert_eq!(cable_pattern(3, 2).unwrap().winding_number(), 3);
        assert_eq!(whitehead_pattern().winding_number(), 0);
    }

    #[test]
    fn rejects_fractional_closure() {
        let points = vec![
            PatternPoint::new(0.0, 0.0, 0.0),
            PatternPoint::new(1.0, 0.1, 0.0),
            PatternPoint::new(2.0, 0.0, 0.1),
            PatternPoint::new(3.0, 0.0, 0.0),
        ];
        assert!(matches!(
            PatternCurve::new(points),
            Err(PatternError::Invalid(_))
        ));
    }

    #[test]
    fn rejects_points_outside_the_fiber_margin() {
        let mut points: Vec<PatternPoint> = (0..=4)
            .map(|k| PatternPoint::new(TAU * k as f64 / 4.0, 0.0, 0.0))
            .collect();
        points[1].u = 0.96;
        assert!(PatternCurve::new(points).is_err());
    }

    #[test]
    fn rejects_non_coprime_cables() {
        assert!(cable_pattern(2, 4).is_err());
        assert!(cable_pattern(0, 1).is_err());
    }

    #[test]
    fn rejects_patterns_inside_a_ball() {
        // a small loop that never goes around: winding 0, misses most meridians
        let points = vec![
            PatternPoint::new(0.1, 0.0, 0.0),
            PatternPoint::new(0.5, 0.3, 0.0),
            PatternPoint::new(0.3, 0.0, 0.4),
            PatternPoint::new(0.1, 0.0, 0.0),
        ];
        assert_eq!(PatternCurve::new(points), Err(PatternError::NotSatellite));
    }

    #[test]
    fn meridian_counts() {
        let core = core_pattern();
        assert_eq!(core.meridian_count_at(0.3).unwrap(), 1);
        assert_eq!(core.meridian_count_at(-7.0).unwrap(), 1);
        assert!(matches!(
            core.meridian_count_at(TAU / 8.0 * 3.0),
            Err(PatternError::NotRegular { vertex: 3, .. })
        ));
        let cable = cable_pattern(2, 3).unwrap();
        for k in 0..50 {
            let theta = 0.013 + k as f64 * 0.1371;
            assert_eq!(cable.meridian_count_at(theta).unwrap(), 2);
        }
    }

    #[test]
    fn whitehead_counts_by_region() {
        let w = whitehead_pattern();
        assert_eq!(w.meridian_count_at(0.0).unwrap(), 4); // inside the clasp
        assert_eq!(w.meridian_count_at(0.4).unwrap(), 2);
        assert_eq!(w.meridian_count_at(3.0).unwrap(), 2);
        assert_eq!(w.min_meridian_sweep().1, 2);
    }

    #[test]
    fn norm_bounds_of_the_catalog() {
        let core = core_pattern().norm_bounds();
        assert_eq!((core.lower, core.upper), (0, 0));
        let cable = cable_pattern(2, 3).unwrap().norm_bounds();
        assert_eq!((cable.lower, cable.upper), (1, 1));
        let white = whitehead_pattern().norm_bounds();
        assert_eq!((white.lower, white.upper), (0, 1));
        assert!(white.contains(1));
    }

    #[test]
    fn reversal_negates_winding_and_keeps_bounds() {
        for p in [
            core_pattern(),
            cable_pattern(3, 2).unwrap(),
            whitehead_pattern(),
        ] {
            let r = p.reversed();
            assert_eq!(r.winding_number(), -p.winding_number());
            let (a, b) = (p.norm_bounds(), r.norm_bounds());
            assert_eq!((a.lower, a.upper), (b.lower, b.upper));
            assert_eq!(PatternCurve::new(r.lifted_points()).unwrap(), r);
        }
    }
}
