use serde::{Deserialize, Serialize};

use super::{ControllerError, SectorFeedback};
use crate::action_sets::ActionSet;
use crate::geometry::{covering_radius, min_alignment, SamplingConfig};
use crate::systems::ObservabilityGain;

/// Outcome of a design check with every intermediate value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignVerdict {
    pub proposition: u8,
    pub delta: f64,
    pub epsilon: f64,
    /// `γ(δ/k₁)`, with `k₁ = 1` for the unity law.
    pub gamma_value: f64,
    pub gain_condition: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k3: Option<f64>,
    /// Sampled estimate, never a certificate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_min1_estimated: Option<f64>,
    /// `k₁²/k₃² + μ²`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector_condition: Option<bool>,
    pub passed: bool,
}

fn positive(name: &str, v: f64) -> Result<(), ControllerError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ControllerError::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Allowance for rounding in the computed δ when comparing against ε.
const GAIN_SLACK: f64 = 1e-12;

fn within(value: f64, epsilon: f64) -> bool {
    value <= epsilon * (1.0 + GAIN_SLACK)
}

fn gain_only(
    proposition: u8,
    set: &ActionSet,
    gamma: &ObservabilityGain,
    epsilon: f64,
) -> Result<DesignVerdict, ControllerError> {
    positive("epsilon", epsilon)?;
    let delta = covering_radius(set)?;
    let gamma_value = gamma.eval(delta);
    let gain_condition = within(gamma_value, epsilon);
    Ok(DesignVerdict {
        proposition,
        delta,
        epsilon,
        gamma_value,
        gain_condition,
        k1: None,
        k3: None,
        mu_min1_estimated: None,
        sector_value: None,
        sector_condition: None,
        passed: gain_condition,
    })
}

fn with_sector(
    proposition: u8,
    set: &ActionSet,
    sector: &SectorFeedback,
    gamma: &ObservabilityGain,
    epsilon: f64,
    sampling: SamplingConfig,
) -> Result<DesignVerdict, ControllerError> {
    positive("epsilon", epsilon)?;
    let delta = covering_radius(set)?;
    let mu = min_alignment(set, sampling)?.value;
    let gamma_value = gamma.eval(delta / sector.k1);
    let gain_condition = within(gamma_value, epsilon);
    let sector_value = (sector.k1 / sector.k3).powi(2) + mu * mu;
    let sector_condition = sector_value > 1.0;
    Ok(DesignVerdict {
        proposition,
        delta,
        epsilon,
        gamma_value,
        gain_condition,
        k1: Some(sector.k1),
        k3: Some(sector.k3),
        mu_min1_estimated: Some(mu),
        sector_value: Some(sector_value),
        sector_condition: Some(sector_condition),
        passed: gain_condition && sector_condition,
    })
}

/// Unity law: `γ(δ) ≤ ε`.
pub fn check_proposition1(
    set: &ActionSet,
    gamma: &ObservabilityGain,
    epsilon: f64,
) -> Result<DesignVerdict, ControllerError> {
    gain_only(1, set, gamma, epsilon)
}

/// Sector law: `k₁²/k₃² + μ_min,1² > 1` and `γ(δ/k₁) ≤ ε`.
pub fn check_proposition2(
    set: &ActionSet,
    sector: &SectorFeedback,
    gamma: &ObservabilityGain,
    epsilon: f64,
    sampling: SamplingConfig,
) -> Result<DesignVerdict, ControllerError> {
    with_sector(2, set, sector, gamma, epsilon, sampling)
}

/// Incremental unity law; `gamma_bar` is the gain of the shifted plant.
/// δ is translation invariant, so the shifted set may be passed directly.
pub fn check_proposition3(
    set: &ActionSet,
    gamma_bar: &ObservabilityGain,
    epsilon: f64,
) -> Result<DesignVerdict, ControllerError> {
    gain_only(3, set, gamma_bar, epsilon)
}

/// Incremental sector law; same conditions as [`check_proposition2`] with `γ̄`.
pub fn check_proposition4(
    set: &ActionSet,
    sector: &SectorFeedback,
    gamma_bar: &ObservabilityGain,
    epsilon: f64,
    sampling: SamplingConfig,
) -> Result<DesignVerdict, ControllerError> {
    with_sector(4, set, sector, gamma_bar, epsilon, sampling)
}

const RELATIVE_TOL: f64 = 1e-12;

/// Largest `δ` with `γ(δ/k₁) ≤ ε`, by exponential bracketing and bisection.
pub fn largest_delta(gamma: &ObservabilityGain, epsilon: f64, k1: f64) -> Result<f64, ControllerError> {
    positive("epsilon", epsilon)?;
    positive("k1", k1)?;
    let ok = |s: f64| gamma.eval(s) <= epsilon;
    let (mut lo, mut hi);
    if ok(1.0) {
        lo = 1.0;
        hi = 2.0;
        while ok(hi) {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(ControllerError::GainBounded);
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while !ok(lo) {
            hi = lo;
            lo *= 0.5;
            if lo == 0.0 {
                return Err(ControllerError::NoSolution);
            }
        }
    }
    while hi - lo > RELATIVE_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo * k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action_sets::{planar_trine, ActionSet};
    use crate::controller::SectorMap;
    use crate::systems::{gain_by_name, sigma_ex};
    use crate::Vector;

    #[test]
    fn proposition1_examples() {
        let (_, _, gamma) = sigma_ex();
        let v = check_proposition1(&planar_trine(0.0, 0.1).unwrap(), &gamma, 1.0).unwrap();
        assert!(v.passed);
        assert!((v.delta - 0.1).abs() < 1e-12);
        assert!((v.gamma_value - (0.4 + 0.1f64.cbrt())).abs() < 1e-12);
        let at_boundary = check_proposition1(&planar_trine(0.0, 0.125).unwrap(), &gamma, 1.0).unwrap();
        assert!(at_boundary.gain_condition, "γ = {}", at_boundary.gamma_value);
        assert!(!check_proposition1(&planar_trine(0.0, 0.2).unwrap(), &gamma, 1.0).unwrap().passed);
    }

    #[test]
    fn proposition1_propagates_unbounded_cells() {
        let set = ActionSet::new(
            vec![Vector::zeros(2), Vector::from_column_slice(&[1.0, 0.0]), Vector::from_column_slice(&[0.0, 1.0])],
            0,
        )
        .unwrap();
        let (_, _, gamma) = sigma_ex();
        assert!(matches!(check_proposition1(&set, &gamma, 1.0), Err(ControllerError::Geometry(_))));
    }

    #[test]
    fn proposition2_examples() {
        let (_, _, gamma) = sigma_ex();
        let set = planar_trine(0.0, 1.0).unwrap();
        let k10 = SectorFeedback::from_map(SectorMap::IdentityGain(10.0), 2).unwrap();
        let v = check_proposition2(&set, &k10, &gamma, 1.0, SamplingConfig::default()).unwrap();
        assert!(v.passed);
        assert!((v.gamma_value - (0.4 + 0.1f64.cbrt())).abs() < 1e-9);
        let loose = SectorFeedback::new(SectorMap::IdentityGain(1.0), 1.0, 1.0, 1.25, 2).unwrap();
        let v = check_proposition2(&set, &loose, &gamma, 1.0, SamplingConfig::default()).unwrap();
        assert!((v.sector_value.unwrap() - 0.89).abs() < 1e-6);
        assert_eq!(v.sector_condition, Some(false));
        assert!(!v.passed);
    }

    #[test]
    fn largest_delta_examples() {
        let (_, _, gamma) = sigma_ex();
        assert_eq!(largest_delta(&gamma, 1.0, 1.0).unwrap(), 0.125);
        assert!((largest_delta(&gamma, 1.0, 10.0).unwrap() - 1.25).abs() < 1e-12);
        let id = gain_by_name("identity").unwrap();
        assert!((largest_delta(&id, 0.5, 1.0).unwrap() - 0.5).abs() < 1e-12);
        let bar = gain_by_name("sigma_ex_inc:-1").unwrap();
        let d = largest_delta(&bar, 0.5, 1.0).unwrap();
        // Root of 4δ + (4/3)δ² = 0.5.
        let root = (-4.0 + (16.0f64 + 4.0 * (4.0 / 3.0) * 0.5).sqrt()) / (2.0 * 4.0 / 3.0);
        assert!((d - root).abs() < 1e-12 * root);
        assert!((d - 0.120185).abs() < 1e-6);
        assert!(d >= 0.1);
    }

    #[test]
    fn largest_delta_errors() {
        let bounded = ObservabilityGain::new("bounded", 1.0, |s| s / (1.0 + s)).unwrap();
        assert_eq!(largest_delta(&bounded, 2.0, 1.0), Err(ControllerError::GainBounded));
        let jump = ObservabilityGain::new("jump", 1.0, |s| if s > 0.0 { 5.0 } else { 0.0 }).unwrap();
        assert_eq!(largest_delta(&jump, 1.0, 1.0), Err(ControllerError::NoSolution));
        assert!(largest_delta(&jump, 0.0, 1.0).is_err());
    }
}
