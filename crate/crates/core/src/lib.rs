//! Trunk numbers of piecewise-linear knots, satellite constructions and the
//! level-set machinery used to compare the trunk of a satellite with the
//! trunk of its companion.
//!
//! The crate is organised by subsystem:
//!
//! * [`geometry`]: closed polylines, level sweeps, frames, tubes and satellites.
//! * [`pattern`]: curves in the solid torus and bounds on the norm of the
//!   meridian-disk class.
//! * [`levelset`]: horizontal sections of the companion torus, homology
//!   classes of section curves and per-level inequality checks.
//! * [`spherelemma`]: exhaustive verification of the combinatorial lemma about
//!   circle systems on the sphere.
//! * [`cli`]: file formats, the fixture catalog, run reports and command
//!   drivers used by the `trunkweave` binary.

pub mod cli;
pub mod geometry;
pub mod levelset;
pub mod pattern;
pub mod spherelemma;

pub use geometry::{
    ClosedPolyline, FrameField, GenericityReport, GeometryError, SolidTorusEmbedding, SweepProfile,
    TubeMesh,
};
pub use levelset::{LevelError, LevelSection, SectionCurve};
pub use pattern::{NormBounds, PatternCurve, PatternError};
pub use spherelemma::{NestingForest, SphereConfiguration};
