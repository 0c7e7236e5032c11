//! Nearest-neighbor control (NNC) of passive systems with a finite set of
//! control actions.
//!
//! The feedback `u = φ(y)` picks the action in a finite set `U ⊂ R^m` that is
//! closest to `-y`. This crate builds and validates such sets, computes the
//! covering radius δ of the base action's Voronoi cell (which fixes the
//! achievable stabilization ball through `γ(δ) ≤ ε`), and simulates the
//! resulting closed loops with a sample-and-hold integrator.
//!
//! Module map:
//!
//! - [`geometry`]: Voronoi cells, vertex enumeration, boundedness and
//!   interior tests, covering radius, alignment constant.
//! - [`action_sets`]: regular simplices, grids, the planar trine, minimal-set
//!   design and validation.
//! - [`systems`]: control-affine systems, storage functions, observability
//!   gains, Gramians and the built-in example plant.
//! - [`controller`]: the nearest-neighbor map and its sector/incremental
//!   compositions, plus design-condition checks.
//! - [`simulator`]: closed-loop integration, convergence metrics and sweeps.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action_sets;
pub mod controller;
pub mod geometry;
pub mod lp;
pub mod simulator;
pub mod systems;
pub mod tol;

/// Column vector used for actions, outputs and states.
pub type Vector = nalgebra::DVector<f64>;
/// Dense matrix.
pub type Matrix = nalgebra::DMatrix<f64>;

pub use action_sets::{ActionSet, ValidationReport};
pub use controller::{FeedbackLaw, LawVariant, NearestNeighborLaw, SectorFeedback};
pub use geometry::{HalfspaceSystem, PolytopeVertices, SamplingConfig};
pub use simulator::{ConvergenceReport, SimConfig, Trajectory};
pub use systems::{ControlAffineSystem, ObservabilityGain, StorageFunction};
