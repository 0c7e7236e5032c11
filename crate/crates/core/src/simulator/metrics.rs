use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::Vector;

/// Ball-entry and energy diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub epsilon: f64,
    pub center: Vec<f64>,
    /// First sample time from which every later sample lies in the closed
    /// ε-ball around `center`.
    pub entry_time: Option<f64>,
    /// Largest distance to `center` from `entry_time` on.
    pub post_entry_sup: Option<f64>,
    /// Whether the action equals the expected tail action at every sample
    /// from `entry_time` on.
    pub tail_action_constant: Option<bool>,
    /// First sample time from which the action equals the tail action.
    pub action_settle_time: Option<f64>,
    /// Largest increase of the storage between consecutive samples, 0 without
    /// storage.
    pub h_max_increase: f64,
    pub final_distance: f64,
}

/// Entry into `B_ε(center)` is judged on recorded samples only.
pub fn convergence_metrics(
    traj: &Trajectory,
    epsilon: f64,
    center: &Vector,
    tail_action: Option<&Vector>,
) -> ConvergenceReport {
    let dist: Vec<f64> = traj.states.iter().map(|x| (x - center).norm()).collect();
    let entry = match dist.iter().rposition(|d| *d > epsilon) {
        None if !dist.is_empty() => Some(0),
        Some(last) if last + 1 < dist.len() => Some(last + 1),
        _ => None,
    };
    let same = |u: &Vector, tail: &Vector| u.len() == tail.len() && (u - tail).amax() <= 1e-12;
    let settle = tail_action.and_then(|tail| match traj.actions.iter().rposition(|u| !same(u, tail)) {
        None if !traj.is_empty() => Some(0),
        Some(last) if last + 1 < traj.len() => Some(last + 1),
        _ => None,
    });
    let h_max_increase =
        traj.storage.as_ref().map(|h| h.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)).unwrap_or(0.0);
    ConvergenceReport {
        epsilon,
        center: center.iter().copied().collect(),
        entry_time: entry.map(|k| traj.times[k]),
        post_entry_sup: entry.map(|k| dist[k..].iter().copied().fold(0.0, f64::max)),
        tail_action_constant: tail_action.and(entry).map(|k| settle.is_some_and(|s| s <= k)),
        action_settle_time: settle.map(|k| traj.times[k]),
        h_max_increase,
        final_distance: dist.last().copied().unwrap_or(f64::NAN),
    }
}
