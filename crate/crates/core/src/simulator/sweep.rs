use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{convergence_metrics, simulate, ConvergenceReport, SimConfig, SimError};
use crate::controller::FeedbackLaw;
use crate::systems::{ControlAffineSystem, StorageFunction};
use crate::Vector;

/// Uniform samples from `[−w, w]^dim`, reproducible from `seed`.
pub fn sample_initial_conditions(count: usize, dim: usize, half_width: f64, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = half_width.abs();
    (0..count).map(|_| Vector::from_fn(dim, |_, _| if w > 0.0 { rng.gen_range(-w..=w) } else { 0.0 })).collect()
}

/// Independent runs, each with a fresh copy of `template`. Reports come back
/// in input order; a failed run fills only its own slot.
#[allow(clippy::too_many_arguments)]
pub fn batch_sweep(
    sys: &dyn ControlAffineSystem,
    template: &FeedbackLaw,
    initial_conditions: &[Vector],
    cfg: &SimConfig,
    storage: Option<&dyn StorageFunction>,
    epsilon: f64,
    center: &Vector,
    tail_action: Option<&Vector>,
) -> Vec<Result<ConvergenceReport, SimError>> {
    initial_conditions
        .par_iter()
        .map(|x0| {
            let mut law = template.clone();
            law.reset();
            let traj = simulate(sys, &mut law, x0, cfg, storage)?;
            Ok(convergence_metrics(&traj, epsilon, center, tail_action))
        })
        .collect()
}
