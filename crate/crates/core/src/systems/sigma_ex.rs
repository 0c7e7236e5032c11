use std::f64::consts::PI;

use super::{ControlAffineSystem, ObservabilityGain, StorageFunction, SystemError};
use crate::{Matrix, Vector};

/// Three-state, two-input passive example:
/// `ẋ = (−x₂ + x₃³, x₁, −x₁) + [[1,0],[0,0],[0,1]]u`, `y = (x₁, x₃³)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SigmaEx;

impl ControlAffineSystem for SigmaEx {
    fn state_dim(&self) -> usize {
        3
    }

    fn input_dim(&self) -> usize {
        2
    }

    fn drift(&self, x: &Vector) -> Vector {
        Vector::from_column_slice(&[-x[1] + x[2].powi(3), x[0], -x[0]])
    }

    fn input_matrix(&self, _x: &Vector) -> Matrix {
        Matrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    }

    fn output(&self, x: &Vector) -> Vector {
        Vector::from_column_slice(&[x[0], x[2].powi(3)])
    }
}

/// `H(x) = ½x₁² + ½x₂² + ¼x₃⁴`
#[derive(Debug, Clone, Copy, Default)]
pub struct SigmaExStorage;

impl StorageFunction for SigmaExStorage {
    fn value(&self, x: &Vector) -> f64 {
        0.5 * x[0] * x[0] + 0.5 * x[1] * x[1] + 0.25 * x[2].powi(4)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        Vector::from_column_slice(&[x[0], x[1], x[2].powi(3)])
    }
}

/// Storage of the shifted plant in incremental coordinates `x̄ = x − x*`:
/// `½x̄₁² + ½x̄₂² + B(x₃, x₃*)` with `B` the Bregman divergence of `s⁴/4`,
/// i.e. `¼(x₃⁴ − x₃*⁴) − x₃*³(x₃ − x₃*)`. Its derivative along the shifted
/// plant is exactly `⟨ȳ, ū⟩`.
#[derive(Debug, Clone, Copy)]
pub struct SigmaExIncrementalStorage {
    pub x3_star: f64,
}

impl StorageFunction for SigmaExIncrementalStorage {
    fn value(&self, xb: &Vector) -> f64 {
        let (a, d) = (self.x3_star, xb[2]);
        // d²(6a² + 4ad + d²)/4, the expanded Bregman term.
        0.5 * xb[0] * xb[0] + 0.5 * xb[1] * xb[1] + 0.25 * d * d * (6.0 * a * a + 4.0 * a * d + d * d)
    }

    fn gradient(&self, xb: &Vector) -> Vector {
        let x3 = xb[2] + self.x3_star;
        Vector::from_column_slice(&[xb[0], xb[1], x3.powi(3) - self.x3_star.powi(3)])
    }
}

/// The example plant with its storage and gain `γ(s) = 4s + s^{1/3}` (τ = π).
pub fn sigma_ex() -> (SigmaEx, SigmaExStorage, ObservabilityGain) {
    let gain = ObservabilityGain::new("sigma_ex", PI, |s| 4.0 * s + s.cbrt()).expect("γ(0) = 0");
    (SigmaEx, SigmaExStorage, gain)
}

/// Incremental gain `γ̄(s, x₃*) = 4s + 4s²/(3x₃*²)` of the shifted example.
pub fn gamma_bar_ex(s: f64, x3_star: f64) -> Result<f64, SystemError> {
    if x3_star == 0.0 || !x3_star.is_finite() {
        return Err(SystemError::DegenerateEquilibrium);
    }
    Ok(4.0 * s + 4.0 / (3.0 * x3_star * x3_star) * s * s)
}

impl ObservabilityGain {
    /// [`gamma_bar_ex`] at fixed `x₃*`, as a gain object.
    pub fn sigma_ex_incremental(x3_star: f64) -> Result<Self, SystemError> {
        gamma_bar_ex(0.0, x3_star)?;
        ObservabilityGain::new(format!("sigma_ex_inc:{x3_star}"), PI, move |s| {
            4.0 * s + 4.0 / (3.0 * x3_star * x3_star) * s * s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{incremental_system, SteadyStatePair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn origin_is_an_equilibrium() {
        let (sys, _, _) = sigma_ex();
        assert_eq!(sys.drift(&Vector::zeros(3)), Vector::zeros(3));
        assert_eq!(sys.output(&Vector::zeros(3)), Vector::zeros(2));
    }

    #[test]
    fn storage_rate_is_supplied_power() {
        let (sys, h, _) = sigma_ex();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = Vector::from_fn(3, |_, _| rng.gen_range(-3.0..3.0));
            let u = Vector::from_fn(2, |_, _| rng.gen_range(-3.0..3.0));
            let grad = h.gradient(&x);
            assert!(grad.dot(&sys.drift(&x)).abs() < 1e-10);
            let supplied = sys.output(&x).dot(&u);
            assert!((grad.dot(&(sys.input_matrix(&x) * &u)) - supplied).abs() < 1e-10);
        }
    }

    #[test]
    fn gain_boundary_value() {
        let (_, _, gamma) = sigma_ex();
        assert_eq!(gamma.eval(0.125), 1.0);
        assert_eq!(gamma.eval(0.0), 0.0);
        assert!(gamma.is_increasing_on(&[0.0, 1e-6, 0.01, 0.1, 1.0, 10.0, 1e3]));
    }

    #[test]
    fn incremental_gain() {
        assert_eq!(gamma_bar_ex(0.0, -1.0).unwrap(), 0.0);
        assert!((gamma_bar_ex(0.1, -1.0).unwrap() - (0.4 + 4.0 / 3.0 * 0.01)).abs() < 1e-15);
        assert!(gamma_bar_ex(0.1, -1.0).unwrap() <= 0.5);
        assert_eq!(gamma_bar_ex(0.1, 0.0), Err(SystemError::DegenerateEquilibrium));
        assert!(ObservabilityGain::sigma_ex_incremental(0.0).is_err());
    }

    #[test]
    fn incremental_storage_is_a_passivity_certificate() {
        let pair = SteadyStatePair::new(&SigmaEx, v(&[0.0, 0.0, -1.0]), v(&[1.0, 0.0])).unwrap();
        let shifted = incremental_system(Arc::new(SigmaEx), &pair).unwrap();
        let h0 = SigmaExIncrementalStorage { x3_star: -1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let xb = Vector::from_fn(3, |_, _| rng.gen_range(-2.0..2.0));
            let ub = Vector::from_fn(2, |_, _| rng.gen_range(-2.0..2.0));
            assert!(h0.value(&xb) >= 0.0);
            let rate = h0.gradient(&xb).dot(&shifted.vector_field(&xb, &ub));
            assert!((rate - shifted.output(&xb).dot(&ub)).abs() < 1e-10);
            // Value and gradient agree.
            let e = 1e-6;
            let fd = (h0.value(&(&xb + v(&[0.0, 0.0, e]))) - h0.value(&(&xb - v(&[0.0, 0.0, e])))) / (2.0 * e);
            assert!((fd - h0.gradient(&xb)[2]).abs() < 1e-6);
        }
    }
}
