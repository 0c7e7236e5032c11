//! Finite control-action sets: constructors, minimal-set design, validation.
//!
//! An [`ActionSet`] is a list of distinct actions in `R^m` with one action
//! designated as the base `u₀` (the origin for stabilization at zero, `u*`
//! when regulating to a steady state). The base is stored by index, so
//! translated sets need no special casing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{contains_in_interior, covering_radius, min_alignment, GeometryError, SamplingConfig};
use crate::{tol, Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActionSetError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid would hold {0} coordinates, more than the 10^6 limit")]
    TooManyActions(u128),
    #[error("rotation is not orthogonal (max |RᵀR − I| = {0:e})")]
    NotOrthogonal(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ActionSetRepr", into = "ActionSetRepr")]
pub struct ActionSet {
    dim: usize,
    base_index: usize,
    actions: Vec<Vector>,
}

// Wire format: {"dim": m, "base_index": i, "actions": [[...], ...]}
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionSetRepr {
    dim: usize,
    base_index: usize,
    actions: Vec<Vec<f64>>,
}

impl TryFrom<ActionSetRepr> for ActionSet {
    type Error = ActionSetError;

    fn try_from(r: ActionSetRepr) -> Result<Self, Self::Error> {
        if let Some(bad) = r.actions.iter().find(|a| a.len() != r.dim) {
            return Err(GeometryError::DimensionMismatch { expected: r.dim, got: bad.len() }.into());
        }
        ActionSet::new(r.actions.into_iter().map(Vector::from_vec).collect(), r.base_index)
    }
}

impl From<ActionSet> for ActionSetRepr {
    fn from(s: ActionSet) -> Self {
        ActionSetRepr {
            dim: s.dim,
            base_index: s.base_index,
            actions: s.actions.iter().map(|a| a.iter().copied().collect()).collect(),
        }
    }
}

impl ActionSet {
    pub fn new(actions: Vec<Vector>, base_index: usize) -> Result<Self, ActionSetError> {
        let Some(first) = actions.first() else {
            return Err(ActionSetError::InvalidParameter("action set is empty".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(ActionSetError::InvalidParameter("actions must have dimension ≥ 1".into()));
        }
        if base_index >= actions.len() {
            return Err(GeometryError::IndexOutOfRange { index: base_index, len: actions.len() }.into());
        }
        for (i, a) in actions.iter().enumerate() {
            if a.len() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, got: a.len() }.into());
            }
            if !a.iter().all(|v| v.is_finite()) {
                return Err(ActionSetError::InvalidParameter(format!("action {i} is not finite")));
            }
            for (j, b) in actions.iter().enumerate().skip(i + 1) {
                if (a - b).norm() <= tol::GEOM {
                    return Err(GeometryError::DuplicatePoints(i, j).into());
                }
            }
        }
        Ok(Self { dim, base_index, actions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn actions(&self) -> &[Vector] {
        &self.actions
    }

    pub fn base_index(&self) -> usize {
        self.base_index
    }

    pub fn base(&self) -> &Vector {
        &self.actions[self.base_index]
    }

    pub fn non_base(&self) -> impl Iterator<Item = &Vector> {
        self.actions.iter().enumerate().filter(move |(i, _)| *i != self.base_index).map(|(_, a)| a)
    }

    /// `U + c`, same base index.
    pub fn translated(&self, c: &Vector) -> Self {
        Self { dim: self.dim, base_index: self.base_index, actions: self.actions.iter().map(|a| a + c).collect() }
    }

    /// `R·U`, same base index.
    pub fn rotated(&self, r: &Matrix) -> Self {
        Self { dim: self.dim, base_index: self.base_index, actions: self.actions.iter().map(|a| r * a).collect() }
    }

    /// `c·U`, same base index.
    pub fn scaled(&self, c: f64) -> Self {
        Self { dim: self.dim, base_index: self.base_index, actions: self.actions.iter().map(|a| a * c).collect() }
    }
}

fn positive(name: &str, v: f64) -> Result<(), ActionSetError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ActionSetError::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

fn dimension(m: usize) -> Result<(), ActionSetError> {
    if m == 0 {
        return Err(ActionSetError::InvalidParameter("dimension m must be ≥ 1".into()));
    }
    Ok(())
}

/// `λ{e₁, …, e_m, (1 − √(m+1))/m · 𝟙}` — vertices of a regular m-simplex.
fn simplex_vertices(m: usize, lambda: f64) -> Vec<Vector> {
    let last = (1.0 - ((m + 1) as f64).sqrt()) / m as f64;
    (0..m)
        .map(|i| Vector::from_fn(m, |k, _| if k == i { lambda } else { 0.0 }))
        .chain(std::iter::once(Vector::from_element(m, lambda * last)))
        .collect()
}

/// Barycenter `λ(√(m+1) − 1)/(m√(m+1)) · 𝟙` of [`simplex_vertices`].
pub fn simplex_barycenter(m: usize, lambda: f64) -> Vector {
    let s = ((m + 1) as f64).sqrt();
    Vector::from_element(m, lambda * (s - 1.0) / (m as f64 * s))
}

fn with_base(base: Vector, others: Vec<Vector>) -> Result<ActionSet, ActionSetError> {
    let mut actions = Vec::with_capacity(others.len() + 1);
    actions.push(base);
    actions.extend(others);
    ActionSet::new(actions, 0)
}

/// Regular simplex vertices plus the origin as base (index 0): `m + 2` actions.
pub fn regular_simplex(m: usize, lambda: f64) -> Result<ActionSet, ActionSetError> {
    dimension(m)?;
    positive("lambda", lambda)?;
    with_base(Vector::zeros(m), simplex_vertices(m, lambda))
}

/// Regular simplex translated so its barycenter is the origin, plus the
/// origin as base (index 0).
pub fn centered_regular_simplex(m: usize, lambda: f64) -> Result<ActionSet, ActionSetError> {
    dimension(m)?;
    positive("lambda", lambda)?;
    let b = simplex_barycenter(m, lambda);
    with_base(Vector::zeros(m), simplex_vertices(m, lambda).into_iter().map(|v| v - &b).collect())
}

/// `λ{−N, …, N}^m` in lexicographic order; the base is the origin.
pub fn grid_set(m: usize, n: usize, lambda: f64) -> Result<ActionSet, ActionSetError> {
    dimension(m)?;
    positive("lambda", lambda)?;
    if n == 0 {
        return Err(ActionSetError::InvalidParameter("grid half-width N must be ≥ 1".into()));
    }
    let side = 2 * n as u128 + 1;
    let count =
        u32::try_from(m).ok().and_then(|e| side.checked_pow(e)).ok_or(ActionSetError::TooManyActions(u128::MAX))?;
    let coords = count.saturating_mul(m as u128);
    if coords > 1_000_000 {
        return Err(ActionSetError::TooManyActions(coords));
    }
    let (count, side) = (count as usize, side as usize);
    let mut actions = Vec::with_capacity(count);
    for idx in 0..count {
        let mut rest = idx;
        let mut digits = vec![0usize; m];
        for d in digits.iter_mut().rev() {
            *d = rest % side;
            rest /= side;
        }
        actions.push(Vector::from_iterator(m, digits.iter().map(|&d| lambda * (d as f64 - n as f64))));
    }
    // All digits equal to N.
    let base_index = (0..m).fold(0, |acc, _| acc * side + n);
    ActionSet::new(actions, base_index)
}

/// `α{0, (sin θ, cos θ), (sin(θ+2π/3), cos(θ+2π/3)), (sin(θ+4π/3), cos(θ+4π/3))}`.
pub fn planar_trine(theta: f64, alpha: f64) -> Result<ActionSet, ActionSetError> {
    positive("alpha", alpha)?;
    if !theta.is_finite() {
        return Err(ActionSetError::InvalidParameter("theta must be finite".into()));
    }
    let dirs = (0..3)
        .map(|k| {
            let a = theta + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            Vector::from_column_slice(&[alpha * a.sin(), alpha * a.cos()])
        })
        .collect();
    with_base(Vector::zeros(2), dirs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplexVariant {
    NonCentered,
    Centered,
}

/// ‖ṽᵢ‖ where ṽᵢ has `2 − m − √(m+1)` in slot i and ones elsewhere.
fn tilde_norm(m: usize) -> f64 {
    let mf = m as f64;
    (mf - 1.0 + (2.0 - mf - (mf + 1.0).sqrt()).powi(2)).sqrt()
}

/// Covering radius of `S_reg ∪ {0}`: `(λ/2)·max(√m, ‖ṽᵢ‖)`.
///
/// The cell of the origin has vertices `(λ/2)𝟙` and `(λ/2)ṽᵢ`. For m ≥ 2 the
/// ṽᵢ are the farthest; for m = 1 it is `(λ/2)𝟙`, giving δ = λ/2.
pub fn noncentered_delta(m: usize, lambda: f64) -> f64 {
    0.5 * lambda * (m as f64).sqrt().max(tilde_norm(m))
}

/// Covering radius of `S⁰_reg ∪ {0}`: `λ(m/2)√(m/(m+1))`.
pub fn centered_delta(m: usize, lambda: f64) -> f64 {
    let mf = m as f64;
    lambda * 0.5 * mf * (mf / (mf + 1.0)).sqrt()
}

/// Scale λ that gives the requested covering radius.
pub fn lambda_for_delta(m: usize, delta: f64, variant: SimplexVariant) -> f64 {
    let mf = m as f64;
    match variant {
        SimplexVariant::NonCentered => 2.0 * delta / mf.sqrt().max(tilde_norm(m)),
        SimplexVariant::Centered => (2.0 * delta / mf) * ((mf + 1.0) / mf).sqrt(),
    }
}

/// `(R·S ∪ {0}) + u*` with λ chosen so the covering radius equals `delta`.
///
/// The base (index 0) is `u_star`; the result has `m + 2` actions.
pub fn design_minimal_set(
    m: usize,
    delta: f64,
    rotation: &Matrix,
    u_star: &Vector,
    variant: SimplexVariant,
) -> Result<ActionSet, ActionSetError> {
    dimension(m)?;
    positive("delta", delta)?;
    if rotation.shape() != (m, m) {
        return Err(ActionSetError::InvalidParameter(format!("rotation must be {m}×{m}, got {:?}", rotation.shape())));
    }
    if u_star.len() != m {
        return Err(GeometryError::DimensionMismatch { expected: m, got: u_star.len() }.into());
    }
    let deviation = (rotation.transpose() * rotation - Matrix::identity(m, m)).amax();
    if !(deviation <= tol::GEOM) {
        return Err(ActionSetError::NotOrthogonal(deviation));
    }
    let lambda = lambda_for_delta(m, delta, variant);
    let simplex = match variant {
        SimplexVariant::NonCentered => regular_simplex(m, lambda)?,
        SimplexVariant::Centered => centered_regular_simplex(m, lambda)?,
    };
    Ok(simplex.rotated(rotation).translated(u_star))
}

/// Outcome of checking the interior/boundedness hypothesis on a set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub assumption_ok: bool,
    pub delta: Option<f64>,
    /// Sampled estimate, present when requested and the hypothesis holds.
    pub mu_min1: Option<f64>,
    pub witness: Option<String>,
    pub non_base_count: usize,
    /// The non-base actions number exactly `m + 1`, the fewest that can
    /// surround the base.
    pub minimal_cardinality: bool,
}

/// Checks that the base lies in the interior of the hull of the other
/// actions and that its Voronoi cell is bounded; reports δ and optionally
/// μ_min,1. Failures are reported, never returned as errors.
pub fn validate(set: &ActionSet, want_mu: bool, sampling: SamplingConfig) -> ValidationReport {
    let others: Vec<Vector> = set.non_base().cloned().collect();
    let mut report = ValidationReport {
        assumption_ok: false,
        delta: None,
        mu_min1: None,
        witness: None,
        non_base_count: others.len(),
        minimal_cardinality: false,
    };
    if !contains_in_interior(&others, set.base()) {
        report.witness = Some("base not in interior of conv(non-base actions)".into());
        return report;
    }
    match covering_radius(set) {
        Ok(delta) => report.delta = Some(delta),
        Err(GeometryError::UnboundedCell) => {
            report.witness = Some("base Voronoi cell unbounded".into());
            return report;
        }
        Err(e) => {
            report.witness = Some(format!("covering radius failed: {e}"));
            return report;
        }
    }
    report.assumption_ok = true;
    report.minimal_cardinality = others.len() == set.dim() + 1;
    if want_mu {
        match min_alignment(set, sampling) {
            Ok(est) => report.mu_min1 = Some(est.value),
            Err(e) => report.witness = Some(format!("alignment estimate failed: {e}")),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn regular_simplex_m1() {
        let s = regular_simplex(1, 1.0).unwrap();
        assert_eq!(s.base(), &v(&[0.0]));
        assert_eq!(s.actions()[1], v(&[1.0]));
        assert!((s.actions()[2][0] - (1.0 - 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn regular_simplex_is_regular() {
        let s = regular_simplex(2, 1.0).unwrap();
        let verts: Vec<&Vector> = s.non_base().collect();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(((verts[i] - verts[j]).norm() - 2f64.sqrt()).abs() < 1e-12);
            }
        }
        let s3 = regular_simplex(3, 2.0).unwrap();
        assert!((&s3.actions()[4] - Vector::from_element(3, -2.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn centered_simplex_has_zero_mean_and_equal_radii() {
        for m in 1..=6 {
            let s = centered_regular_simplex(m, 1.3).unwrap();
            let sum: Vector = s.non_base().fold(Vector::zeros(m), |acc, a| acc + a);
            assert!(sum.norm() < 1e-12, "m={m}");
            let r0 = s.actions()[1].norm();
            assert!(s.non_base().all(|a| (a.norm() - r0).abs() < 1e-12));
        }
        let s = centered_regular_simplex(1, 1.0).unwrap();
        let b = (2f64.sqrt() - 1.0) / 2f64.sqrt();
        assert!((s.actions()[1][0] - (1.0 - b)).abs() < 1e-15);
        assert!((s.actions()[2][0] - (1.0 - 2f64.sqrt() - b)).abs() < 1e-15);
    }

    #[test]
    fn grid_layout() {
        let g = grid_set(1, 1, 1.0).unwrap();
        assert_eq!(g.actions(), &[v(&[-1.0]), v(&[0.0]), v(&[1.0])]);
        assert_eq!(g.base_index(), 1);
        let g = grid_set(2, 3, 1.0).unwrap();
        assert_eq!(g.len(), 49);
        assert_eq!(g.base(), &v(&[0.0, 0.0]));
        assert!(matches!(grid_set(2, 1000, 1.0), Err(ActionSetError::TooManyActions(_))));
        assert!(matches!(grid_set(40, 1, 1.0), Err(ActionSetError::TooManyActions(_))));
    }

    #[test]
    fn trine_values() {
        let t = planar_trine(0.0, 1.0).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!((&t.actions()[1] - v(&[0.0, 1.0])).norm() < 1e-15);
        assert!((&t.actions()[2] - v(&[h, -0.5])).norm() < 1e-15);
        assert!((&t.actions()[3] - v(&[-h, -0.5])).norm() < 1e-15);
        let t = planar_trine(PI / 2.0, 1.0).unwrap();
        assert!((&t.actions()[1] - v(&[1.0, 0.0])).norm() < 1e-15);
        assert!(planar_trine(0.0, 0.0).is_err());
    }

    #[test]
    fn design_round_trip_small() {
        let s =
            design_minimal_set(2, 0.1, &Matrix::identity(2, 2), &Vector::zeros(2), SimplexVariant::Centered).unwrap();
        assert_eq!(s.len(), 4);
        assert!((covering_radius(&s).unwrap() - 0.1).abs() < 1e-12);
        let u = v(&[1.0, 0.0]);
        let s = design_minimal_set(2, 0.1, &Matrix::identity(2, 2), &u, SimplexVariant::Centered).unwrap();
        assert_eq!(s.base(), &u);
        assert!((covering_radius(&s).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn centered_lambda_formula() {
        for m in 1..=6 {
            let mf = m as f64;
            let expected = (2.0 * 0.3 / mf) * ((mf + 1.0) / mf).sqrt();
            assert_eq!(lambda_for_delta(m, 0.3, SimplexVariant::Centered), expected);
        }
    }

    #[test]
    fn noncentered_m1_uses_the_positive_vertex() {
        let s = design_minimal_set(1, 0.2, &Matrix::identity(1, 1), &Vector::zeros(1), SimplexVariant::NonCentered)
            .unwrap();
        assert!((covering_radius(&s).unwrap() - 0.2).abs() < 1e-12);
        assert!((noncentered_delta(1, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn design_reproduces_the_trine() {
        for theta in [0.0, 0.3, PI / 7.0, 2.0] {
            let alpha = 0.7;
            let (s, c) = (theta.sin(), theta.cos());
            let k = -std::f64::consts::FRAC_1_SQRT_2;
            let r = Matrix::from_row_slice(2, 2, &[k * (s + c), k * (s - c), k * (-s + c), k * (s + c)]);
            let designed = design_minimal_set(2, alpha, &r, &Vector::zeros(2), SimplexVariant::Centered).unwrap();
            let trine = planar_trine(theta, alpha).unwrap();
            for a in trine.actions() {
                assert!(designed.actions().iter().any(|b| (a - b).norm() < 1e-12), "θ={theta}: {a} missing");
            }
        }
    }

    #[test]
    fn rejects_non_orthogonal_rotation() {
        let r = Matrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            design_minimal_set(2, 0.1, &r, &Vector::zeros(2), SimplexVariant::Centered),
            Err(ActionSetError::NotOrthogonal(_))
        ));
    }

    #[test]
    fn validation_reports() {
        let ok = validate(&planar_trine(0.0, 0.1).unwrap(), true, SamplingConfig::default());
        assert!(ok.assumption_ok && ok.minimal_cardinality);
        assert!((ok.delta.unwrap() - 0.1).abs() < 1e-12);
        assert!((ok.mu_min1.unwrap() - 0.5).abs() < 1e-9);

        let corner = ActionSet::new(vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])], 0).unwrap();
        let bad = validate(&corner, true, SamplingConfig::default());
        assert!(!bad.assumption_ok && bad.delta.is_none() && bad.mu_min1.is_none());
        assert_eq!(bad.witness.as_deref(), Some("base not in interior of conv(non-base actions)"));

        for m in 1..=6 {
            assert!(validate(&regular_simplex(m, 1.0).unwrap(), false, SamplingConfig::default()).assumption_ok);
        }
        let grid = validate(&grid_set(2, 1, 1.0).unwrap(), false, SamplingConfig::default());
        assert!(grid.assumption_ok && !grid.minimal_cardinality && grid.mu_min1.is_none());
    }

    #[test]
    fn json_wire_format() {
        let s = planar_trine(0.0, 1.0).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"dim":2,"base_index":0,"actions":[[0.0,0.0],[0.0,1.0],"#));
        let back: ActionSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<ActionSet>(r#"{"dim":1,"base_index":0,"actions":[[0.0]],"x":1}"#).is_err());
        assert!(serde_json::from_str::<ActionSet>(r#"{"dim":2,"base_index":0,"actions":[[0.0]]}"#).is_err());
        assert!(serde_json::from_str::<ActionSet>(r#"{"dim":1,"base_index":3,"actions":[[0.0],[1.0]]}"#).is_err());
        assert!(serde_json::from_str::<ActionSet>(r#"{"dim":1,"base_index":0,"actions":[[0.0],[0.0]]}"#).is_err());
    }
}
