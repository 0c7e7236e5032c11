//! Sample-and-hold simulation of the closed loop `ẋ = f(x) + g(x)u` with `u`
//! produced by a [`FeedbackLaw`](crate::controller::FeedbackLaw), plus
//! convergence diagnostics.

mod metrics;
mod sweep;
mod trajectory;

pub use metrics::{convergence_metrics, ConvergenceReport};
pub use sweep::{batch_sweep, sample_initial_conditions};
pub use trajectory::Trajectory;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::{ControllerError, FeedbackLaw};
use crate::systems::{ControlAffineSystem, StorageFunction};
use crate::{tol, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state left the finite range at t = {time}")]
    NonFiniteState { time: f64 },
    #[error(transparent)]
    Controller(#[from] ControllerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub dt: f64,
    /// The action is recomputed every `hold_steps` integration steps.
    pub hold_steps: usize,
    pub t_final: f64,
    /// Every `record_stride`-th step is recorded; `t = 0` and `t_final`
    /// always are.
    pub record_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { dt: 1e-3, hold_steps: 1, t_final: 50.0, record_stride: 1 }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidConfig(m));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be positive and finite, got {}", self.dt));
        }
        if !(self.t_final >= self.dt) || !self.t_final.is_finite() {
            return bad(format!("t_final must be finite and ≥ dt, got {}", self.t_final));
        }
        if self.hold_steps == 0 {
            return bad("hold_steps must be ≥ 1".into());
        }
        if self.record_stride == 0 {
            return bad("record_stride must be ≥ 1".into());
        }
        if self.t_final / self.dt > 1e9 {
            return bad("too many steps".into());
        }
        Ok(())
    }

    /// Number of integration steps; the last one is shortened to end at
    /// `t_final` exactly.
    pub fn step_count(&self) -> usize {
        ((self.t_final / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }
}

fn rk4_step(sys: &dyn ControlAffineSystem, x: &Vector, u: &Vector, h: f64) -> Vector {
    let k1 = sys.vector_field(x, u);
    let k2 = sys.vector_field(&(x + &k1 * (h / 2.0)), u);
    let k3 = sys.vector_field(&(x + &k2 * (h / 2.0)), u);
    let k4 = sys.vector_field(&(x + &k3 * h), u);
    x + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}

/// Fixed-step RK4 with the action held constant over each window of
/// `hold_steps` steps and recomputed from the output sampled at the window
/// start. The recorded action at a sample is the one in force from that time.
pub fn simulate(
    sys: &dyn ControlAffineSystem,
    law: &mut FeedbackLaw,
    x0: &Vector,
    cfg: &SimConfig,
    storage: Option<&dyn StorageFunction>,
) -> Result<Trajectory, SimError> {
    cfg.validate()?;
    let (n, m) = (sys.state_dim(), sys.input_dim());
    if x0.len() != n {
        return Err(SimError::DimensionMismatch { expected: n, got: x0.len() });
    }
    if law.set().dim() != m {
        return Err(SimError::DimensionMismatch { expected: m, got: law.set().dim() });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(SimError::NonFiniteState { time: 0.0 });
    }

    let steps = cfg.step_count();
    let mut traj = Trajectory::with_capacity(steps / cfg.record_stride + 2, storage.is_some());
    let mut x = x0.clone();
    let mut u = Vector::zeros(m);
    let mut t = 0.0;
    for k in 0..=steps {
        let y = sys.output(&x);
        if k % cfg.hold_steps == 0 {
            u = law.act(&y)?.action;
        }
        if k % cfg.record_stride == 0 || k == steps {
            traj.push(t, &x, y, &u, storage.map(|s| s.value(&x)));
        }
        if k == steps {
            break;
        }
        let t_next = if k + 1 == steps { cfg.t_final } else { (k + 1) as f64 * cfg.dt };
        x = rk4_step(sys, &x, &u, t_next - t);
        t = t_next;
        if x.iter().any(|v| !v.is_finite()) || x.norm() > tol::BLOW_UP {
            return Err(SimError::NonFiniteState { time: t });
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action_sets::{planar_trine, ActionSet};
    use crate::systems::{sigma_ex, LinearSystem};
    use crate::Matrix;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::default().validate().is_ok());
        for cfg in [
            SimConfig { dt: 0.0, ..Default::default() },
            SimConfig { dt: f64::NAN, ..Default::default() },
            SimConfig { t_final: 1e-4, ..Default::default() },
            SimConfig { hold_steps: 0, ..Default::default() },
            SimConfig { record_stride: 0, ..Default::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(SimError::InvalidConfig(_))), "{cfg:?}");
        }
        assert_eq!(SimConfig { dt: 0.1, t_final: 1.0, ..Default::default() }.step_count(), 10);
        assert_eq!(SimConfig { dt: 0.3, t_final: 1.0, ..Default::default() }.step_count(), 4);
    }

    #[test]
    fn zero_input_conserves_storage() {
        // A set whose base cell is large keeps u = 0 along the whole run.
        let (sys, h, _) = sigma_ex();
        let set = planar_trine(0.0, 1e3).unwrap();
        let mut law = FeedbackLaw::unity(set);
        let cfg = SimConfig { dt: 1e-3, t_final: 10.0, record_stride: 100, ..Default::default() };
        let traj = simulate(&sys, &mut law, &v(&[1.0, 0.5, 0.8]), &cfg, Some(&h)).unwrap();
        assert!(traj.actions.iter().all(|u| u.norm() == 0.0));
        let hs = traj.storage.as_ref().unwrap();
        let spread = hs.iter().fold(0.0f64, |a, v| a.max((v - hs[0]).abs()));
        assert!(spread < 1e-9, "drift {spread:e}");
        assert_eq!(*traj.times.last().unwrap(), 10.0);
        assert_eq!(traj.times[0], 0.0);
    }

    #[test]
    fn actions_change_only_at_window_starts() {
        let (sys, _, _) = sigma_ex();
        let mut law = FeedbackLaw::unity(planar_trine(0.0, 0.1).unwrap());
        let cfg = SimConfig { dt: 1e-2, hold_steps: 7, t_final: 5.0, record_stride: 1 };
        let traj = simulate(&sys, &mut law, &v(&[2.0, 2.0, 1.5]), &cfg, None).unwrap();
        for k in 1..traj.len() {
            if traj.actions[k] != traj.actions[k - 1] {
                assert_eq!(k % 7, 0, "switch at step {k}");
            }
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let sys = LinearSystem::new(
            Matrix::from_element(1, 1, 50.0),
            Matrix::from_element(1, 1, 1.0),
            Matrix::from_element(1, 1, 1.0),
        )
        .unwrap();
        let set = ActionSet::new(vec![v(&[0.0]), v(&[1.0]), v(&[-1.0])], 0).unwrap();
        let mut law = FeedbackLaw::unity(set);
        let cfg = SimConfig { dt: 1e-2, t_final: 10.0, ..Default::default() };
        match simulate(&sys, &mut law, &v(&[1.0]), &cfg, None) {
            Err(SimError::NonFiniteState { time }) => assert!(time > 0.0 && time < 10.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_checks() {
        let (sys, _, _) = sigma_ex();
        let mut law = FeedbackLaw::unity(planar_trine(0.0, 0.1).unwrap());
        let cfg = SimConfig { t_final: 1.0, ..Default::default() };
        assert!(matches!(simulate(&sys, &mut law, &v(&[1.0]), &cfg, None), Err(SimError::DimensionMismatch { .. })));
        let set = ActionSet::new(vec![v(&[0.0]), v(&[1.0]), v(&[-1.0])], 0).unwrap();
        let mut law1 = FeedbackLaw::unity(set);
        assert!(simulate(&sys, &mut law1, &v(&[1.0, 0.0, 0.0]), &cfg, None).is_err());
    }

    #[test]
    fn deterministic() {
        let (sys, h, _) = sigma_ex();
        let cfg = SimConfig { dt: 1e-3, t_final: 3.0, ..Default::default() };
        let run = || {
            let mut law = FeedbackLaw::unity(planar_trine(0.0, 0.1).unwrap());
            simulate(&sys, &mut law, &v(&[2.0, -1.0, 0.5]), &cfg, Some(&h)).unwrap()
        };
        assert_eq!(run().to_csv_string(), run().to_csv_string());
    }
}
