//! Built-in knot and pattern fixtures.

use std::f64::consts::TAU;

use crate::geometry::{ClosedPolyline, Point};
use crate::pattern::{cable_pattern, core_pattern, whitehead_pattern, PatternCurve};

use super::format::{KnotFile, KnotMetadata, PatternFile, PatternMetadata};

pub const KNOT_NAMES: [&str; 3] = ["unknot", "trefoil", "figure-eight"];
pub const PATTERN_NAMES: [&str; 4] = ["core", "cable-2-3", "cable-3-2", "whitehead"];

/// A 16-gon on a gently tilted circle.
pub fn unknot() -> ClosedPolyline {
    let points = (0..16)
        .map(|i| {
            let t = TAU * (i as f64 + 0.1) / 16.0;
            Point::new(t.cos(), t.sin(), 0.04 * t.cos())
        })
        .collect();
    ClosedPolyline::new(points)
        .expect("unknot fixture is valid")
        .normalized()
}

/// The (2, 3) torus knot on 24 vertices, laid on its side so that each of its
/// three lobes contributes one maximum and one minimum of height.
pub fn trefoil() -> ClosedPolyline {
    let points = (0..24)
        .map(|i| {
            let t = TAU * (i as f64 + 0.05) / 24.0;
            let rho = 3.0 + (3.0 * t).cos();
            let (x, y, z) = (
                rho * (2.0 * t).cos(),
                rho * (2.0 * t).sin(),
                (3.0 * t).sin(),
            );
            Point::new(y, z, x + 0.03 * y)
        })
        .collect();
    ClosedPolyline::new(points)
        .expect("trefoil fixture is valid")
        .normalized()
}

/// Plat closure of the four-strand braid `σ₂² σ₁⁻¹ σ₂`: two caps, four
/// crossing steps, two cups.
pub fn figure_eight() -> ClosedPolyline {
    // (left slot, left strand passes over)
    let word = [(1usize, true), (1, true), (0, false), (1, true)];
    plat_closure(&word)
}

fn plat_closure(word: &[(usize, bool)]) -> ClosedPolyline {
    let slots = 4;
    let steps = word.len();
    // paths[s]: points of the strand entering at top slot s, listed downward
    let mut at_slot: Vec<usize> = (0..slots).collect(); // strand occupying each slot
    let mut paths: Vec<Vec<Point>> = (0..slots)
        .map(|s| vec![Point::new(s as f64, 0.0, 0.0)])
        .collect();
    for (k, &(left, over)) in word.iter().enumerate() {
        let (z0, z1) = (-(k as f64), -(k as f64 + 1.0));
        let zm = 0.5 * (z0 + z1);
        for slot in 0..slots {
            let strand = at_slot[slot];
            let x = slot as f64;
            if slot == left || slot == left + 1 {
                let moving_right = slot == left;
                let target = if moving_right { x + 1.0 } else { x - 1.0 };
                let depth = if moving_right == over { 0.3 } else { -0.3 };
                paths[strand].push(Point::new(0.5 * (x + target), depth, zm));
                paths[strand].push(Point::new(target, 0.0, z1));
            } else {
                paths[strand].push(Point::new(x, 0.0, z1));
            }
        }
        at_slot.swap(left, left + 1);
    }
    let bottom = -(steps as f64);
    let mut slot_of = vec![0; slots];
    for (slot, &strand) in at_slot.iter().enumerate() {
        slot_of[strand] = slot;
    }

    // trace the closed curve: down a strand, through a cup, up a strand, through a cap
    let cap_partner = |s: usize| s ^ 1;
    let caps = [(0.5, 0.55), (2.5, 0.7)];
    let cups = [(0.5, bottom - 0.6), (2.5, bottom - 0.45)];
    let mut vertices = Vec::new();
    let mut strand = 0;
    let mut visited = 0;
    loop {
        visited += 2;
        vertices.extend(paths[strand].iter().copied());
        let bottom_slot = slot_of[strand];
        let (cx, cz) = cups[bottom_slot / 2];
        vertices.push(Point::new(cx, 0.0, cz));
        let up = at_slot[cap_partner(bottom_slot)];
        vertices.extend(paths[up].iter().rev().copied());
        let (hx, hz) = caps[up / 2];
        vertices.push(Point::new(hx, 0.0, hz));
        strand = cap_partner(up);
        if strand == 0 {
            break;
        }
    }
    assert_eq!(visited, slots, "plat closure has more than one component");
    let curve = ClosedPolyline::new(vertices).expect("plat closure is embedded");
    let epsilon = (0.25 * curve.feature_size()).min(1e-4);
    curve
        .perturb_generic(epsilon)
        .expect("plat closure can be made generic")
        .normalized()
}

pub fn knot(name: &str) -> Option<KnotFile> {
    let (curve, known_trunk, nontrivial) = match name {
        "unknot" => (unknot(), 2, false),
        "trefoil" => (trefoil(), 4, true),
        "figure-eight" => (figure_eight(), 4, true),
        _ => return None,
    };
    Some(KnotFile::from_curve(
        name,
        &curve,
        KnotMetadata {
            known_trunk: Some(known_trunk),
            nontrivial: Some(nontrivial),
        },
    ))
}

pub fn pattern_curve(name: &str) -> Option<PatternCurve> {
    match name {
        "core" => Some(core_pattern()),
        "cable-2-3" => cable_pattern(2, 3).ok(),
        "cable-3-2" => cable_pattern(3, 2).ok(),
        "whitehead" => Some(whitehead_pattern()),
        _ => None,
    }
}

pub fn pattern(name: &str) -> Option<PatternFile> {
    let curve = pattern_curve(name)?;
    let norm = match name {
        "core" => 0,
        "cable-2-3" | "whitehead" => 1,
        "cable-3-2" => 2,
        _ => unreachable!(),
    };
    Some(PatternFile::from_curve(
        name,
        &curve,
        PatternMetadata { norm: Some(norm) },
    ))
}
