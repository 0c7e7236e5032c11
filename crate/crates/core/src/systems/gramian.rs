use super::SystemError;
use crate::Matrix;

/// Quadrature intervals used by [`observability_gramian`].
pub const GRAMIAN_STEPS: usize = 2048;

/// `W = ∫₀^τ e^{Aᵀs} CᵀC e^{As} ds`.
///
/// The transition matrix is propagated with the fourth-order Taylor step
/// (the RK4 update for linear fields) and the integrand is combined with
/// composite Simpson weights.
pub fn observability_gramian(a: &Matrix, c: &Matrix, tau: f64) -> Result<Matrix, SystemError> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(SystemError::InvalidParameter("A must be square and non-empty".into()));
    }
    if c.ncols() != n {
        return Err(SystemError::DimensionMismatch { expected: n, got: c.ncols() });
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(SystemError::InvalidParameter(format!("window must be positive and finite, got {tau}")));
    }
    let h = tau / GRAMIAN_STEPS as f64;
    let ha = a * h;
    let ha2 = &ha * &ha;
    let ha3 = &ha2 * &ha;
    let ha4 = &ha3 * &ha;
    let step = Matrix::identity(n, n) + &ha + ha2 * 0.5 + ha3 / 6.0 + ha4 / 24.0;
    let ctc = c.transpose() * c;

    let mut phi = Matrix::identity(n, n);
    let mut w = Matrix::zeros(n, n);
    for k in 0..=GRAMIAN_STEPS {
        let weight = if k == 0 || k == GRAMIAN_STEPS {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        w += phi.transpose() * &ctc * &phi * weight;
        phi = &step * phi;
    }
    w *= h / 3.0;
    Ok((&w + w.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn oscillator_over_half_period() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let c = Matrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let w = observability_gramian(&a, &c, PI).unwrap();
        let expected = Matrix::identity(2, 2) * (PI / 2.0);
        assert!((w - expected).amax() < 1e-6);
    }

    #[test]
    fn scalar_decay() {
        // ∫₀¹ e^{−2s} ds
        let a = Matrix::from_element(1, 1, -1.0);
        let c = Matrix::from_element(1, 1, 1.0);
        let w = observability_gramian(&a, &c, 1.0).unwrap();
        assert!((w[(0, 0)] - (1.0 - (-2.0f64).exp()) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn guards() {
        let a = Matrix::zeros(2, 2);
        assert!(observability_gramian(&a, &Matrix::zeros(1, 3), 1.0).is_err());
        assert!(observability_gramian(&a, &Matrix::zeros(1, 2), 0.0).is_err());
        assert!(observability_gramian(&Matrix::zeros(2, 3), &Matrix::zeros(1, 3), 1.0).is_err());
    }
}
