//! Exact planar geometry over cyclotomic fields.

mod isometry;
pub mod pointset;
pub mod predicates;
mod tile;

pub use crate::cyclo::CycloNumber;

/// Points of the plane, identified with field elements.
pub type Point = CycloNumber;

pub use isometry::Isometry;
pub use pointset::{difference_set, samples, within, PointSet, SpatialIndex, EPS};
pub use tile::{pinwheel_control_point, ArrowKind, EdgeArrow, Patch, Prototile, Tile, TilingSystem};
