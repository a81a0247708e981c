//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trunkweave::geometry::{ClosedPolyline, Point};
use trunkweave::pattern::{PatternCurve, PatternPoint};

/// Level count by direct edge scan at height `z`.
pub fn brute_count(curve: &ClosedPolyline, z: f64) -> usize {
    let v = curve.vertices();
    let n = v.len();
    (0..n)
        .filter(|&i| (v[i].z - z) * (v[(i + 1) % n].z - z) < 0.0)
        .count()
}

/// Maximum of [`brute_count`] over `samples` equally spaced heights strictly
/// inside the height range, plus the list of counts.
pub fn dense_sweep(curve: &ClosedPolyline, samples: usize) -> (usize, Vec<usize>) {
    let zs: Vec<f64> = curve.vertices().iter().map(|p| p.z).collect();
    let lo = zs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let counts: Vec<usize> = (0..samples)
        .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / samples as f64)
        .map(|z| brute_count(curve, z))
        .collect();
    (*counts.iter().max().unwrap_or(&0), counts)
}

/// A generic polyline whose xy-projection is a star-shaped polygon, so it is
/// embedded, with heights a random permutation of well separated values.
pub fn random_generic_polyline(rng: &mut ChaCha8Rng) -> ClosedPolyline {
    loop {
        let n = rng.gen_range(5..=24);
        let mut angles: Vec<f64> = (0..n)
            .map(|k| TAU * (k as f64 + rng.gen_range(0.1..0.9)) / n as f64)
            .collect();
        angles.sort_by(f64::total_cmp);
        let mut levels: Vec<usize> = (0..n).collect();
        levels.shuffle(rng);
        let points: Vec<Point> = angles
            .iter()
            .zip(&levels)
            .map(|(&a, &l)| {
                let r = rng.gen_range(0.5..1.5);
                let z = (l as f64 + rng.gen_range(-0.2..0.2)) / n as f64;
                Point::new(r * a.cos(), r * a.sin(), z)
            })
            .collect();
        if let Ok(curve) = ClosedPolyline::new(points) {
            if curve.is_generic() {
                return curve;
            }
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random cable-like pattern with `strands` passes, back-tracking angles and
/// radial wobble, rejected until it is a valid pattern.
pub fn random_pattern(rng: &mut ChaCha8Rng) -> PatternCurve {
    loop {
        let strands: i64 = rng.gen_range(1..=3);
        let twists: i64 = loop {
            let q = rng.gen_range(-4i64..=4);
            if gcd(strands.unsigned_abs(), q.unsigned_abs()) == 1 {
                break q;
            }
        };
        let per_pass = rng.gen_range(12..=40);
        let total = strands as usize * per_pass;
        let freq = rng.gen_range(1..=3) as f64;
        let amp = rng.gen_range(0.0..1.5);
        let phase = rng.gen_range(0.0..TAU);
        let wobble = rng.gen_range(0.0..0.3);
        let points: Vec<PatternPoint> = (0..=total)
            .map(|k| {
                let base = TAU * k as f64 / per_pass as f64;
                // periodic in the lifted angle, so the closing point matches
                let theta = base + amp * (freq * base / strands as f64 + phase).sin();
                let psi = base * twists as f64 / strands as f64;
                let r = 0.5 + wobble * (3.0 * base / strands as f64).cos();
                PatternPoint::new(theta, r * psi.cos(), r * psi.sin())
            })
            .collect();
        if let Ok(p) = PatternCurve::new(points) {
            return p;
        }
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Determinant of the knot, from the Fox colouring matrix of a projection.
pub fn knot_determinant(curve: &ClosedPolyline) -> u64 {
    // project along a direction unrelated to any fixture's symmetry
    let axis = nalgebra::Vector3::new(0.3141, -0.2718, 0.9119).normalize();
    let e1 = axis
        .cross(&nalgebra::Vector3::new(1.0, 0.0, 0.0))
        .normalize();
    let e2 = axis.cross(&e1);
    let pts: Vec<(f64, f64, f64)> = curve
        .vertices()
        .iter()
        .map(|p| (p.coords.dot(&e1), p.coords.dot(&e2), p.coords.dot(&axis)))
        .collect();
    let n = pts.len();

    // (under position, over position) along the curve, position = edge + fraction
    let mut crossings: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            let r = (b.0 - a.0, b.1 - a.1);
            let s = (d.0 - c.0, d.1 - c.1);
            let denom = r.0 * s.1 - r.1 * s.0;
            if denom.abs() < 1e-15 {
                continue;
            }
            let q = (c.0 - a.0, c.1 - a.1);
            let t = (q.0 * s.1 - q.1 * s.0) / denom;
            let u = (q.0 * r.1 - q.1 * r.0) / denom;
            if !(0.0..1.0).contains(&t) || !(0.0..1.0).contains(&u) {
                continue;
            }
            let depth_i = a.2 + t * (b.2 - a.2);
            let depth_j = c.2 + u * (d.2 - c.2);
            let (pi, pj) = (i as f64 + t, j as f64 + u);
            if depth_i > depth_j {
                crossings.push((pj, pi));
            } else {
                crossings.push((pi, pj));
            }
        }
    }
    let m = crossings.len();
    if m == 0 {
        return 1;
    }
    let mut unders: Vec<f64> = crossings.iter().map(|c| c.0).collect();
    unders.sort_by(f64::total_cmp);
    // arc k starts at the k-th under-crossing
    let arc_of = |pos: f64| -> usize {
        let k = unders.partition_point(|&u| u <= pos);
        (k + m - 1) % m
    };
    let mut matrix = vec![vec![0i128; m]; m];
    for (row, &(under, over)) in crossings.iter().enumerate() {
        let k = unders.partition_point(|&u| u < under);
        let outgoing = k % m;
        let incoming = (k + m - 1) % m;
        matrix[row][arc_of(over)] += 2;
        matrix[row][incoming] -= 1;
        matrix[row][outgoing] -= 1;
    }
    let minor: Vec<Vec<i128>> = matrix[1..].iter().map(|r| r[1..].to_vec()).collect();
    bareiss_determinant(minor).unsigned_abs() as u64
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_determinant(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
