use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LevelError, LevelSection};
use crate::geometry::{ClosedPolyline, TubeMesh, HEIGHT_TOLERANCE};

/// A far-side failure: an essential boundary curve of a component with no
/// other component carrying an essential boundary beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarSideViolation {
    pub component: usize,
    pub curve: usize,
}

/// Every essential boundary of every component must see, on its far side in
/// the compactified plane, another component with an essential boundary.
pub fn check_lemma31(section: &LevelSection) -> Vec<FarSideViolation> {
    if section.curves.is_empty() {
        return Vec::new();
    }
    let config = section.sphere_configuration();
    config
        .far_side_violations()
        .into_iter()
        .map(|(region, curve)| FarSideViolation {
            component: section
                .grouping
                .component_of_region(region)
                .expect("surface regions are components"),
            curve,
        })
        .collect()
}

/// Per-level results of the intersection bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub z: f64,
    /// Points of the satellite on the plane.
    pub count_k: usize,
    /// Number of principal components.
    pub z_i: usize,
    /// Essential boundary count of every component.
    pub n_j: Vec<usize>,
    /// Satellite hits of every component.
    pub k_hits: Vec<usize>,
    /// `count_k > n_lower * z_i`, or vacuous.
    pub passes: bool,
    /// No principal component at this level.
    pub vacuous: bool,
    /// Sum over principal components of `n_lower + 2 - n_j`.
    pub chain_bound: i64,
    /// `count_k >= chain_bound > n_lower * z_i` (true when vacuous).
    pub chain_holds: bool,
    /// Every principal component satisfies `k_hits + n_j - 2 >= n_lower`.
    pub components_hold: bool,
    pub far_side_violations: usize,
    pub homology_sum_zero: bool,
    /// All essential curves share one primitive class up to sign.
    pub parallel: bool,
    pub essential_class: Option<(i64, i64)>,
    /// Sum over odd `n_j` of `2 - n_j`.
    pub sphere_value: i64,
    pub outside_hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedLevel {
    pub z: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub n_lower: u64,
    pub rows: Vec<LevelRow>,
    pub skipped: Vec<SkippedLevel>,
}

impl LevelReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.passes)
    }

    pub fn chain_holds(&self) -> bool {
        self.rows.iter().all(|r| r.chain_holds && r.components_hold)
    }

    pub fn parity_holds(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.z_i % 2 == 0 && r.n_j.iter().sum::<usize>() % 2 == 0)
    }

    pub fn homology_holds(&self) -> bool {
        self.rows.iter().all(|r| r.homology_sum_zero && r.parallel)
    }

    pub fn far_side_violations(&self) -> usize {
        self.rows.iter().map(|r| r.far_side_violations).sum()
    }

    pub fn outside_hits(&self) -> usize {
        self.rows.iter().map(|r| r.outside_hits).sum()
    }

    pub fn non_vacuous(&self) -> usize {
        self.rows.iter().filter(|r| !r.vacuous).count()
    }
}

/// Regular levels between consecutive distinct vertex heights of the mesh and
/// the satellite. Heights closer than the height tolerance count as one.
pub fn level_heights(mesh: &TubeMesh, satellite: &ClosedPolyline) -> Vec<f64> {
    let mut heights = mesh.heights();
    heights.extend(satellite.heights());
    heights.sort_by(f64::total_cmp);
    heights.dedup_by(|b, a| *b - *a <= HEIGHT_TOLERANCE);
    heights.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

fn level_row(section: &LevelSection, n_lower: u64) -> LevelRow {
    let components = section.components();
    let z_i = section.z_principal();
    let n_lower_i = n_lower as i64;
    let chain_bound: i64 = components
        .iter()
        .filter(|c| c.principal)
        .map(|c| n_lower_i + 2 - c.essential_count as i64)
        .sum();
    let vacuous = z_i == 0;
    let threshold = n_lower * z_i as u64;
    let count_k = section.z_count_k;
    let passes = vacuous || count_k as u64 > threshold;
    let chain_holds = vacuous || (count_k as i64 >= chain_bound && chain_bound > threshold as i64);
    let components_hold = components
        .iter()
        .filter(|c| c.principal)
        .all(|c| (c.k_hits + c.essential_count) as i64 - 2 >= n_lower_i);
    let direction = section.essential_direction();
    LevelRow {
        z: section.z,
        count_k,
        z_i,
        n_j: components.iter().map(|c| c.essential_count).collect(),
        k_hits: components.iter().map(|c| c.k_hits).collect(),
        passes,
        vacuous,
        chain_bound,
        chain_holds,
        components_hold,
        far_side_violations: super::check_lemma31(section).len(),
        homology_sum_zero: section.homology_sum() == (0, 0),
        parallel: direction.is_ok(),
        essential_class: direction.ok().flatten(),
        sphere_value: section.sphere_configuration_value(),
        outside_hits: section.outside_hits,
    }
}

impl LevelSection {
    fn sphere_configuration_value(&self) -> i64 {
        if self.curves.is_empty() {
            0
        } else {
            self.sphere_configuration().conclusion_value()
        }
    }
}

/// Checks `count_k > n_lower * z_i` at every regular level of the mesh and
/// satellite, together with the intermediate bounds that lead to it. The
/// bound needs a positive norm, so `n_lower = 0` is refused.
pub fn verify_prop34(
    satellite: &ClosedPolyline,
    mesh: &TubeMesh,
    n_lower: u64,
) -> Result<LevelReport, LevelError> {
    if n_lower < 1 {
        return Err(LevelError::Precondition(
            "positive norm required: the pattern's norm lower bound is 0".into(),
        ));
    }
    Ok(level_table(satellite, mesh, n_lower))
}

/// The per-level table without the positivity requirement on `n_lower`.
/// Levels that fail to section cleanly are recorded as skipped.
pub fn level_table(satellite: &ClosedPolyline, mesh: &TubeMesh, n_lower: u64) -> LevelReport {
    let levels = level_heights(mesh, satellite);
    let results: Vec<Result<LevelRow, SkippedLevel>> = levels
        .par_iter()
        .map(|&z| {
            LevelSection::compute(mesh, z, Some(satellite))
                .map(|section| level_row(&section, n_lower))
                .map_err(|e| SkippedLevel {
                    z,
                    reason: e.to_string(),
                })
        })
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(s) => skipped.push(s),
        }
    }
    LevelReport {
        n_lower,
        rows,
        skipped,
    }
}
