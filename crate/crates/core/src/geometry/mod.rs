//! Small-dimension polyhedral geometry.
//!
//! Everything here works in the action space `R^m` with `m ≤ 8`: Voronoi
//! cells of finite point sets in H-representation, exhaustive vertex
//! enumeration, LP-certified boundedness and interior tests, the covering
//! radius δ of a base action's cell, and a sampled estimate of the alignment
//! constant μ_min,1.
//!
//! All functions are pure.

mod alignment;
mod halfspace;
mod hull;
mod voronoi;

pub use alignment::{min_alignment, AlignmentEstimate, SamplingConfig, WitnessKind};
pub use halfspace::{enumerate_vertices, is_bounded, is_empty, HalfspaceSystem, PolytopeVertices};
pub use hull::contains_in_interior;
pub use voronoi::{covering_radius, voronoi_cell, voronoi_halfspaces, VoronoiCellReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("dimension {0} exceeds the enumeration limit of {max}", max = crate::tol::MAX_ENUM_DIM)]
    DimensionTooLarge(usize),
    #[error("polyhedron is empty")]
    EmptyPolytope,
    #[error("Voronoi cell of the base action is unbounded")]
    UnboundedCell,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("halfspace {0} has a zero normal")]
    ZeroNormal(usize),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl From<crate::lp::LpError> for GeometryError {
    fn from(e: crate::lp::LpError) -> Self {
        GeometryError::NumericalFailure(e.to_string())
    }
}
