//! Nearest-neighbor feedback `φ(y) = argmin_{v∈U} ‖v + y‖`, its sector and
//! incremental compositions, and the design checks tying a set to a target
//! accuracy.

mod design;
mod law;
mod nearest;
mod sector;

pub use design::{
    check_proposition1, check_proposition2, check_proposition3, check_proposition4, largest_delta, DesignVerdict,
};
pub use law::{FeedbackLaw, FeedbackLawSpec, LawVariant};
pub use nearest::{NearestNeighborLaw, Selection};
pub use sector::{SectorFeedback, SectorMap};

use thiserror::Error;

use crate::action_sets::ActionSetError;
use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControllerError {
    #[error("law variant needs a sector map")]
    MissingSector,
    #[error("incremental law needs u_star and y_star")]
    MissingSetpoint,
    #[error("u_star is not an element of the action set")]
    SetpointNotInSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sector condition violated: {0}")]
    SectorViolation(String),
    #[error("no δ > 0 satisfies the gain condition")]
    NoSolution,
    #[error("gain stays below ε on every probed argument")]
    GainBounded,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    ActionSet(#[from] ActionSetError),
}
