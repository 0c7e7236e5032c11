use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::voronoi::cell_vertices;
use super::{voronoi_halfspaces, GeometryError, HalfspaceSystem};
use crate::action_sets::ActionSet;
use crate::{tol, Vector};

/// Knobs of the μ_min,1 estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    /// Interior samples per clipped cell edge.
    pub edge_samples: usize,
    /// Clip box half-width as a multiple of the set's spread around the base.
    pub far_multiplier: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { edge_samples: 16, far_multiplier: 100.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Vertex,
    RecessionRay,
    EdgeSample,
}

/// Sampled lower estimate of μ_min,1 with the point attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentEstimate {
    pub value: f64,
    /// Index of the action whose cell attains the minimum.
    pub cell_index: usize,
    /// Minimizing point of that cell (for a ray, a far point along it).
    pub witness: Vector,
    pub kind: WitnessKind,
}

fn cosine(a: &Vector, b: &Vector) -> f64 {
    a.dot(b) / (a.norm() * b.norm())
}

/// Estimate of the largest μ with `⟨φ(z), −z⟩ ≥ μ‖φ(z)‖‖z‖` whenever φ(z) is
/// not the base action, computed relative to the base.
///
/// For each non-base action `uᵢ`, the cosine between `uᵢ` and points `w` of
/// its cell is evaluated at the vertices of the cell clipped to a far box, at
/// the extreme rays of the cell's recession cone, and along clipped edges.
/// The cell lies in the open halfspace `⟨uᵢ, w⟩ > 0`, where the cosine is
/// quasi-concave, so vertices and rays already carry the infimum; edge
/// samples serve as a cross-check.
pub fn min_alignment(set: &ActionSet, sampling: SamplingConfig) -> Result<AlignmentEstimate, GeometryError> {
    let base = set.base().clone();
    let rel: Vec<Vector> = set.actions().iter().map(|u| u - &base).collect();
    if cell_vertices(&rel, set.base_index(), None)?.is_none() {
        return Err(GeometryError::UnboundedCell);
    }
    let spread = rel.iter().map(|u| u.norm()).fold(0.0, f64::max);
    let far = sampling.far_multiplier.max(2.0) * spread;
    let dim = set.dim();

    let mut best: Option<AlignmentEstimate> = None;
    let mut consider = |value: f64, cell_index: usize, point: Vector, kind: WitnessKind| {
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(AlignmentEstimate { value, cell_index, witness: point + &base, kind });
        }
    };

    for (i, ui) in rel.iter().enumerate() {
        if i == set.base_index() {
            continue;
        }
        if ui.norm() <= tol::GEOM {
            return Err(GeometryError::Degenerate(format!("action {i} equals the base action")));
        }
        let full = voronoi_halfspaces(&rel, i)?;

        let clipped = cell_vertices(&rel, i, Some(far))?
            .ok_or_else(|| GeometryError::NumericalFailure("clipped cell without vertices".into()))?;
        for w in &clipped.vertices {
            consider(cosine(ui, w), i, w.clone(), WitnessKind::Vertex);
        }

        for d in recession_rays(&full)? {
            consider(cosine(ui, &d), i, ui + &d * far, WitnessKind::RecessionRay);
        }

        if sampling.edge_samples > 0 {
            let mut boxed = full.clone();
            boxed.extend(&HalfspaceSystem::cube(ui, far))?;
            let active: Vec<Vec<usize>> =
                clipped.vertices.iter().map(|w| boxed.active_rows(w, 1e-7 * far.max(1.0))).collect();
            for (a, b) in (0..clipped.len()).tuple_combinations() {
                let shared = active[a].iter().filter(|r| active[b].contains(r)).count();
                if shared + 1 < dim {
                    continue;
                }
                let (wa, wb) = (&clipped.vertices[a], &clipped.vertices[b]);
                for s in 1..=sampling.edge_samples {
                    let t = s as f64 / (sampling.edge_samples + 1) as f64;
                    let w = wa * (1.0 - t) + wb * t;
                    consider(cosine(ui, &w), i, w, WitnessKind::EdgeSample);
                }
            }
        }
    }
    best.ok_or_else(|| GeometryError::Degenerate("set has no non-base action".into()))
}

/// Unit extreme rays of `{d : Ad ≤ 0}` for a pointed cone.
fn recession_rays(h: &HalfspaceSystem) -> Result<Vec<Vector>, GeometryError> {
    let dim = h.dim();
    let unit = h.normalized();
    let feasible = |d: &Vector| unit.normals().iter().all(|n| n.dot(d) <= 1e-9);
    let mut rays: Vec<Vector> = Vec::new();
    let mut keep = |d: Vector| {
        if feasible(&d) && !rays.iter().any(|r| (r - &d).norm() < 1e-9) {
            rays.push(d);
        }
    };
    if dim == 1 {
        keep(Vector::from_element(1, 1.0));
        keep(Vector::from_element(1, -1.0));
        return Ok(rays);
    }
    for subset in (0..unit.len()).combinations(dim - 1) {
        // Generalized cross product of the dim−1 rows.
        let d = Vector::from_fn(dim, |k, _| {
            let minor = DMatrix::from_fn(dim - 1, dim - 1, |r, c| {
                let col = if c < k { c } else { c + 1 };
                unit.normals()[subset[r]][col]
            });
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * minor.determinant()
        });
        let norm = d.norm();
        if norm < 1e-10 {
            continue;
        }
        let d = d / norm;
        keep(d.clone());
        keep(-d);
    }
    Ok(rays)
}
