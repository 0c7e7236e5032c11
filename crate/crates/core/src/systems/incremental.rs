use std::sync::Arc;

use super::{ControlAffineSystem, SteadyStatePair, StorageFunction, SystemError};
use crate::{tol, Matrix, Vector};

/// The plant in incremental coordinates `x̄ = x − x*`, `ū = u − u*`:
/// `x̄̇ = f(x̄+x*) − f(x*) + [g(x̄+x*) − g(x*)]u* + g(x̄+x*)ū`,
/// `ȳ = h(x̄+x*) − h(x*)`.
#[derive(Clone)]
pub struct IncrementalSystem {
    inner: Arc<dyn ControlAffineSystem>,
    x_star: Vector,
    u_star: Vector,
    f_star: Vector,
    g_star: Matrix,
    h_star: Vector,
}

impl std::fmt::Debug for IncrementalSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IncrementalSystem").field("x_star", &self.x_star).field("u_star", &self.u_star).finish()
    }
}

/// Builds the shifted plant; rejects pairs whose residual exceeds the
/// steady-state tolerance.
pub fn incremental_system(
    inner: Arc<dyn ControlAffineSystem>,
    pair: &SteadyStatePair,
) -> Result<IncrementalSystem, SystemError> {
    if pair.x_star.len() != inner.state_dim() {
        return Err(SystemError::DimensionMismatch { expected: inner.state_dim(), got: pair.x_star.len() });
    }
    if pair.u_star.len() != inner.input_dim() {
        return Err(SystemError::DimensionMismatch { expected: inner.input_dim(), got: pair.u_star.len() });
    }
    let residual = inner.vector_field(&pair.x_star, &pair.u_star).norm();
    if !(residual <= tol::STEADY_STATE) {
        return Err(SystemError::NotSteadyState(residual));
    }
    let f_star = inner.drift(&pair.x_star);
    let g_star = inner.input_matrix(&pair.x_star);
    let h_star = inner.output(&pair.x_star);
    Ok(IncrementalSystem { inner, x_star: pair.x_star.clone(), u_star: pair.u_star.clone(), f_star, g_star, h_star })
}

impl IncrementalSystem {
    pub fn x_star(&self) -> &Vector {
        &self.x_star
    }

    pub fn u_star(&self) -> &Vector {
        &self.u_star
    }

    /// `h(x*)`
    pub fn y_star(&self) -> &Vector {
        &self.h_star
    }
}

impl ControlAffineSystem for IncrementalSystem {
    fn state_dim(&self) -> usize {
        self.inner.state_dim()
    }

    fn input_dim(&self) -> usize {
        self.inner.input_dim()
    }

    fn drift(&self, xb: &Vector) -> Vector {
        let x = xb + &self.x_star;
        self.inner.drift(&x) - &self.f_star + (self.inner.input_matrix(&x) - &self.g_star) * &self.u_star
    }

    fn input_matrix(&self, xb: &Vector) -> Matrix {
        self.inner.input_matrix(&(xb + &self.x_star))
    }

    fn output(&self, xb: &Vector) -> Vector {
        self.inner.output(&(xb + &self.x_star)) - &self.h_star
    }
}

/// Evaluates a storage defined on incremental coordinates at original
/// coordinates: `x ↦ S(x − x*)`.
#[derive(Clone)]
pub struct ShiftedStorage {
    inner: Arc<dyn StorageFunction>,
    x_star: Vector,
}

impl ShiftedStorage {
    pub fn new(inner: Arc<dyn StorageFunction>, x_star: Vector) -> Self {
        Self { inner, x_star }
    }
}

impl StorageFunction for ShiftedStorage {
    fn value(&self, x: &Vector) -> f64 {
        self.inner.value(&(x - &self.x_star))
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.inner.gradient(&(x - &self.x_star))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{SigmaEx, SigmaExIncrementalStorage};

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn example_steady_state() {
        let pair = SteadyStatePair::new(&SigmaEx, v(&[0.0, 0.0, -1.0]), v(&[1.0, 0.0])).unwrap();
        assert_eq!(pair.residual, 0.0);
        let sys = incremental_system(Arc::new(SigmaEx), &pair).unwrap();
        assert_eq!(sys.y_star(), &v(&[0.0, -1.0]));
        assert_eq!(sys.drift(&Vector::zeros(3)), Vector::zeros(3));
        assert_eq!(sys.output(&Vector::zeros(3)), Vector::zeros(2));
        // ȳ₂ = x₃³ − x₃*³
        let y = sys.output(&v(&[0.0, 0.0, 1.0]));
        assert_eq!(y, v(&[0.0, 1.0]));
    }

    #[test]
    fn rejects_non_steady_pairs() {
        let pair = SteadyStatePair::new(&SigmaEx, v(&[0.0, 0.0, -1.0]), v(&[0.0, 0.0])).unwrap();
        assert!(pair.residual > 0.5);
        assert!(matches!(incremental_system(Arc::new(SigmaEx), &pair), Err(SystemError::NotSteadyState(_))));
        assert!(matches!(
            SteadyStatePair::new(&SigmaEx, v(&[0.0, 0.0]), v(&[1.0, 0.0])),
            Err(SystemError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shifted_storage_vanishes_at_the_setpoint() {
        let s = ShiftedStorage::new(Arc::new(SigmaExIncrementalStorage { x3_star: -1.0 }), v(&[0.0, 0.0, -1.0]));
        assert_eq!(s.value(&v(&[0.0, 0.0, -1.0])), 0.0);
        assert_eq!(s.gradient(&v(&[0.0, 0.0, -1.0])), Vector::zeros(3));
        assert!(s.value(&Vector::zeros(3)) > 0.0);
    }
}
