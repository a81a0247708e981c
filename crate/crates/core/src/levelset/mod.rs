//! Horizontal sections of the companion torus and the solid torus it bounds.

mod components;
mod homology;
mod section;
mod verify;

use nalgebra::Point2;
use thiserror::Error;

pub use components::{
    group_components, point_in_polygon, point_in_solid, Grouping, LevelComponent,
};
pub use homology::{curve_class_on_torus, primitive_direction};
pub use section::{section_torus, EdgePoint, SectionCurve};
pub use verify::{
    check_lemma31, level_heights, level_table, verify_prop34, FarSideViolation, LevelReport,
    LevelRow, SkippedLevel,
};

use crate::geometry::{ClosedPolyline, GeometryError, TubeMesh};
use crate::spherelemma::{NestingForest, SphereConfiguration};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LevelError {
    #[error("height {z} is not a regular value: it meets mesh vertex {vertex}")]
    NotRegular { z: f64, vertex: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("section topology error: {0}")]
    Topology(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The plane at height `z` cut against the companion tube and, optionally, a
/// satellite inside it.
#[derive(Debug, Clone)]
pub struct LevelSection {
    pub z: f64,
    pub curves: Vec<SectionCurve>,
    pub grouping: Grouping,
    /// Points where the satellite meets the plane.
    pub z_count_k: usize,
    /// Satellite points that fall outside every component.
    pub outside_hits: usize,
}

impl LevelSection {
    pub fn compute(
        mesh: &TubeMesh,
        z: f64,
        satellite: Option<&ClosedPolyline>,
    ) -> Result<Self, LevelError> {
        let curves = section_torus(mesh, z)?;
        let mut grouping = group_components(mesh, z, &curves)?;
        let mut z_count_k = 0;
        let mut outside_hits = 0;
        if let Some(k) = satellite {
            if let Some(vertex) = k
                .heights()
                .iter()
                .position(|h| (h - z).abs() <= crate::geometry::HEIGHT_TOLERANCE)
            {
                return Err(LevelError::NotRegular { z, vertex });
            }
            for i in 0..k.len() {
                let (a, b) = k.edge(i);
                if (a.z < z) == (b.z < z) {
                    continue;
                }
                z_count_k += 1;
                let p = a + (b - a) * ((z - a.z) / (b.z - a.z));
                let region = grouping.region_of(&curves, &Point2::new(p.x, p.y));
                match grouping.component_of_region(region) {
                    Some(c) => grouping.components[c].k_hits += 1,
                    None => outside_hits += 1,
                }
            }
        }
        Ok(LevelSection {
            z,
            curves,
            grouping,
            z_count_k,
            outside_hits,
        })
    }

    pub fn components(&self) -> &[LevelComponent] {
        &self.grouping.components
    }

    pub fn z_principal(&self) -> usize {
        count_principal(self)
    }

    pub fn essential_total(&self) -> usize {
        self.curves.iter().filter(|c| c.essential).count()
    }

    /// Sum of the classes of all curves, each oriented as boundary of the
    /// part of the torus below the plane.
    pub fn homology_sum(&self) -> (i64, i64) {
        self.curves.iter().fold((0, 0), |acc, c| {
            (acc.0 + c.homology.0, acc.1 + c.homology.1)
        })
    }

    /// The common primitive class of the essential curves, `Ok(None)` if
    /// there are none, `Err(())` if they are not all parallel.
    pub fn essential_direction(&self) -> Result<Option<(i64, i64)>, ()> {
        let mut direction = None;
        for c in self.curves.iter().filter(|c| c.essential) {
            let d = primitive_direction(c.homology).ok_or(())?;
            match direction {
                None => direction = Some(d),
                Some(prev) if prev != d => return Err(()),
                _ => {}
            }
        }
        Ok(direction)
    }

    /// The section as a circle system on the sphere: inside regions are
    /// surfaces, outside regions gaps.
    pub fn sphere_configuration(&self) -> SphereConfiguration {
        let forest = NestingForest::from_parents(self.grouping.parent.clone())
            .expect("planar nesting is a forest");
        SphereConfiguration::new(
            forest,
            self.grouping.inside.clone(),
            self.curves.iter().map(|c| c.essential).collect(),
        )
        .expect("inside regions alternate with outside regions")
    }
}

/// Number of principal components, those with an odd number of essential
/// boundary curves.
pub fn count_principal(section: &LevelSection) -> usize {
    section.components().iter().filter(|c| c.principal).count()
}

/// `max(a + b - 2, 0)`: the norm bound carried by a surface with `a`
/// essential boundary curves meeting the pattern `b` times.
pub fn norm_candidate(a: u64, b: u64) -> u64 {
    (a + b).saturating_sub(2)
}
