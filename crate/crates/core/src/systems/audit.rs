use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ControlAffineSystem, StorageFunction};
use crate::{tol, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub sample_count: usize,
    /// States are drawn uniformly from the cube `[−w, w]ⁿ`.
    pub half_width: f64,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { sample_count: 1000, half_width: 5.0, seed: 0 }
    }
}

/// Worst sampled violations of the passivity conditions
/// `⟨∇H, f⟩ ≤ 0` and `g(x)ᵀ∇H(x) = h(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassivityAudit {
    pub samples: usize,
    /// `max(0, max ⟨∇H, f⟩)`
    pub max_dissipation_violation: f64,
    /// `max ‖gᵀ∇H − h‖∞`
    pub max_output_mismatch: f64,
    /// `max ‖∇H − central difference‖∞`
    pub max_gradient_error: f64,
    pub min_storage: f64,
    pub worst_state: Option<Vec<f64>>,
}

impl PassivityAudit {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_dissipation_violation <= tol
            && self.max_output_mismatch <= tol
            && self.max_gradient_error <= tol::FINITE_DIFFERENCE
            && self.min_storage >= -tol
    }
}

pub fn passivity_audit(
    sys: &dyn ControlAffineSystem,
    storage: &dyn StorageFunction,
    cfg: &AuditConfig,
) -> PassivityAudit {
    let n = sys.state_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = PassivityAudit {
        samples: cfg.sample_count,
        max_dissipation_violation: 0.0,
        max_output_mismatch: 0.0,
        max_gradient_error: 0.0,
        min_storage: f64::INFINITY,
        worst_state: None,
    };
    let mut worst = f64::NEG_INFINITY;
    let w = cfg.half_width.abs();
    for _ in 0..cfg.sample_count {
        let x = Vector::from_fn(n, |_, _| if w > 0.0 { rng.gen_range(-w..=w) } else { 0.0 });
        let grad = storage.gradient(&x);
        let diss = grad.dot(&sys.drift(&x)).max(0.0);
        let mismatch = (sys.input_matrix(&x).transpose() * &grad - sys.output(&x)).amax();
        let mut fd_err: f64 = 0.0;
        for j in 0..n {
            let mut e = Vector::zeros(n);
            e[j] = tol::FD_STEP;
            let fd = (storage.value(&(&x + &e)) - storage.value(&(&x - &e))) / (2.0 * tol::FD_STEP);
            fd_err = fd_err.max((fd - grad[j]).abs() / grad[j].abs().max(1.0));
        }
        out.max_dissipation_violation = out.max_dissipation_violation.max(diss);
        out.max_output_mismatch = out.max_output_mismatch.max(mismatch);
        out.max_gradient_error = out.max_gradient_error.max(fd_err);
        out.min_storage = out.min_storage.min(storage.value(&x));
        let score = diss.max(mismatch);
        if score > worst {
            worst = score;
            out.worst_state = Some(x.iter().copied().collect());
        }
    }
    out
}
