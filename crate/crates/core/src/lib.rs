//! Exact-arithmetic inflation tilings and finite-scale diagnostics for
//! Delone sets: local complexity, repetitivity, local indistinguishability,
//! symmetry and aperiodicity.

pub mod cyclo;
pub mod delone;
pub mod error;
pub mod geometry;
pub mod inflation;
pub mod io;
pub mod symmetry;

pub use cyclo::{CycloNumber, Rational};
pub use error::{Error, Result};
pub use geometry::{Isometry, Patch, Point, PointSet, Prototile, Tile, TilingSystem};
