//! Control-affine plants `ẋ = f(x) + g(x)u, y = h(x)`, storage functions,
//! observability gains, and the built-in example plant.
//!
//! Plants are registered in code ([`SystemRegistry`]) rather than parsed
//! from expressions. All evaluators are pure and `Send + Sync`.

mod audit;
mod gramian;
mod incremental;
mod linear;
mod registry;
mod sigma_ex;

pub use audit::{passivity_audit, AuditConfig, PassivityAudit};
pub use gramian::{observability_gramian, GRAMIAN_STEPS};
pub use incremental::{incremental_system, IncrementalSystem, ShiftedStorage};
pub use linear::{LinearSystem, QuadraticStorage};
pub use registry::{gain_by_name, Plant, PlantBuilder, SystemRegistry};
pub use sigma_ex::{gamma_bar_ex, sigma_ex, SigmaEx, SigmaExIncrementalStorage, SigmaExStorage};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::{tol, Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("(x*, u*) is not a steady state: residual {0:e} exceeds {tol:e}", tol = tol::STEADY_STATE)]
    NotSteadyState(f64),
    #[error("equilibrium parameter must be nonzero")]
    DegenerateEquilibrium,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub trait ControlAffineSystem: Send + Sync {
    fn state_dim(&self) -> usize;
    fn input_dim(&self) -> usize;
    /// `f(x)`
    fn drift(&self, x: &Vector) -> Vector;
    /// `g(x)`, an `n × m` matrix.
    fn input_matrix(&self, x: &Vector) -> Matrix;
    /// `h(x)`, of dimension `m`.
    fn output(&self, x: &Vector) -> Vector;

    fn vector_field(&self, x: &Vector, u: &Vector) -> Vector {
        self.drift(x) + self.input_matrix(x) * u
    }
}

pub trait StorageFunction: Send + Sync {
    fn value(&self, x: &Vector) -> f64;
    fn gradient(&self, x: &Vector) -> Vector;
}

/// A steady-state pair with its residual `‖f(x*) + g(x*)u*‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStatePair {
    pub x_star: Vector,
    pub u_star: Vector,
    pub residual: f64,
}

impl SteadyStatePair {
    pub fn new(sys: &dyn ControlAffineSystem, x_star: Vector, u_star: Vector) -> Result<Self, SystemError> {
        if x_star.len() != sys.state_dim() {
            return Err(SystemError::DimensionMismatch { expected: sys.state_dim(), got: x_star.len() });
        }
        if u_star.len() != sys.input_dim() {
            return Err(SystemError::DimensionMismatch { expected: sys.input_dim(), got: u_star.len() });
        }
        let residual = sys.vector_field(&x_star, &u_star).norm();
        Ok(Self { x_star, u_star, residual })
    }
}

/// Gain γ of a large-time norm-observability bound `‖x(t)‖ ≤ γ(‖y‖_[t,t+τ])`.
#[derive(Clone)]
pub struct ObservabilityGain {
    label: String,
    tau: f64,
    gamma: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for ObservabilityGain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObservabilityGain").field("label", &self.label).field("tau", &self.tau).finish()
    }
}

impl ObservabilityGain {
    /// Requires `τ > 0` and `γ(0) = 0`.
    pub fn new(
        label: impl Into<String>,
        tau: f64,
        gamma: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, SystemError> {
        if !(tau > 0.0) {
            return Err(SystemError::InvalidParameter(format!("observation window must be positive, got {tau}")));
        }
        if gamma(0.0) != 0.0 {
            return Err(SystemError::InvalidParameter("gain must vanish at zero".into()));
        }
        Ok(Self { label: label.into(), tau, gamma: Arc::new(gamma) })
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.gamma)(s)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Strict increase on the given sample points (sorted internally).
    pub fn is_increasing_on(&self, samples: &[f64]) -> bool {
        let mut s: Vec<f64> = samples.iter().copied().filter(|v| *v >= 0.0).collect();
        s.sort_by(f64::total_cmp);
        s.dedup();
        s.windows(2).all(|w| self.eval(w[0]) < self.eval(w[1]))
    }
}
