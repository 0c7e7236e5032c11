use itertools::Itertools;
use nalgebra::DMatrix;

use super::GeometryError;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::{tol, Vector};

/// Polyhedron `{x : ⟨nᵢ, x⟩ ≤ bᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceSystem {
    dim: usize,
    normals: Vec<Vector>,
    offsets: Vec<f64>,
}

impl HalfspaceSystem {
    /// Empty system (the whole space).
    pub fn new(dim: usize) -> Self {
        Self { dim, normals: Vec::new(), offsets: Vec::new() }
    }

    pub fn from_rows(dim: usize, normals: Vec<Vector>, offsets: Vec<f64>) -> Result<Self, GeometryError> {
        if normals.len() != offsets.len() {
            return Err(GeometryError::DimensionMismatch { expected: normals.len(), got: offsets.len() });
        }
        let mut h = Self::new(dim);
        for (n, b) in normals.into_iter().zip(offsets) {
            h.push(n, b)?;
        }
        Ok(h)
    }

    /// Axis-aligned box `|xⱼ − cⱼ| ≤ r`.
    pub fn cube(center: &Vector, radius: f64) -> Self {
        let dim = center.len();
        let mut h = Self::new(dim);
        for j in 0..dim {
            let e = Vector::from_fn(dim, |k, _| if k == j { 1.0 } else { 0.0 });
            h.normals.push(e.clone());
            h.offsets.push(center[j] + radius);
            h.normals.push(-e);
            h.offsets.push(radius - center[j]);
        }
        h
    }

    pub fn push(&mut self, normal: Vector, offset: f64) -> Result<(), GeometryError> {
        if normal.len() != self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, got: normal.len() });
        }
        if normal.iter().all(|v| *v == 0.0) {
            return Err(GeometryError::ZeroNormal(self.normals.len()));
        }
        self.normals.push(normal);
        self.offsets.push(offset);
        Ok(())
    }

    pub fn extend(&mut self, other: &HalfspaceSystem) -> Result<(), GeometryError> {
        for (n, b) in other.rows() {
            self.push(n.clone(), b)?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Vector, f64)> {
        self.normals.iter().zip(self.offsets.iter().copied())
    }

    /// Same polyhedron with unit normals.
    pub fn normalized(&self) -> Self {
        let (normals, offsets) = self
            .rows()
            .map(|(n, b)| {
                let s = n.norm();
                (n / s, b / s)
            })
            .unzip();
        Self { dim: self.dim, normals, offsets }
    }

    /// Largest signed violation `max(⟨nᵢ,x⟩ − bᵢ)` over unit normals; ≤ 0 inside.
    pub fn max_violation(&self, x: &Vector) -> f64 {
        self.rows().map(|(n, b)| (n.dot(x) - b) / n.norm()).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.max_violation(x) <= tol
    }

    /// Indices of rows active at `x` within `tol` (unit-normal distance).
    pub fn active_rows(&self, x: &Vector, tol: f64) -> Vec<usize> {
        self.rows().enumerate().filter(|(_, (n, b))| ((n.dot(x) - b) / n.norm()).abs() <= tol).map(|(i, _)| i).collect()
    }
}

/// Vertex list of a polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeVertices {
    pub dim: usize,
    pub vertices: Vec<Vector>,
}

impl PolytopeVertices {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Largest distance from `center` to a vertex, with the vertex attaining it.
    pub fn farthest_from(&self, center: &Vector) -> Option<(f64, &Vector)> {
        self.vertices.iter().map(|v| ((v - center).norm(), v)).max_by(|a, b| a.0.total_cmp(&b.0))
    }
}

/// H-to-V conversion by solving every `dim`-subset of rows.
///
/// Singular subsets are skipped and infeasible intersection points discarded.
/// A polyhedron without vertices (it contains a line) yields an empty list
/// unless it is empty, which is reported as [`GeometryError::EmptyPolytope`].
pub fn enumerate_vertices(h: &HalfspaceSystem) -> Result<PolytopeVertices, GeometryError> {
    let dim = h.dim();
    if dim > tol::MAX_ENUM_DIM {
        return Err(GeometryError::DimensionTooLarge(dim));
    }
    let unit = h.normalized();
    let mut vertices: Vec<Vector> = Vec::new();
    if dim > 0 {
        for subset in (0..unit.len()).combinations(dim) {
            let a = DMatrix::from_fn(dim, dim, |r, c| unit.normals[subset[r]][c]);
            if a.determinant().abs() < 1e-12 {
                continue;
            }
            let b = Vector::from_fn(dim, |r, _| unit.offsets[subset[r]]);
            let Some(x) = a.lu().solve(&b) else { continue };
            if !x.iter().all(|v| v.is_finite()) || !unit.contains(&x, tol::GEOM) {
                continue;
            }
            let dedup_tol = 1e-8 * x.norm().max(1.0);
            if !vertices.iter().any(|v| (v - &x).norm() <= dedup_tol) {
                vertices.push(x);
            }
        }
    }
    if vertices.is_empty() && is_empty(h)? {
        return Err(GeometryError::EmptyPolytope);
    }
    Ok(PolytopeVertices { dim, vertices })
}

/// LP feasibility test of `{x : Ax ≤ b}`.
pub fn is_empty(h: &HalfspaceSystem) -> Result<bool, GeometryError> {
    let unit = h.normalized();
    let mut lp = LinearProgram::new(h.dim()).all_free().with_feasibility_tol(tol::GEOM);
    for (n, b) in unit.rows() {
        lp.add_row(n.as_slice(), Relation::Le, b)?;
    }
    Ok(!lp.solve()?.is_feasible())
}

/// Whether the recession cone `{d : Ad ≤ 0}` is `{0}`.
///
/// Maximizes `±dⱼ` over the cone intersected with the unit box; the cone is
/// nontrivial iff one of these optima reaches 1.
pub fn is_bounded(h: &HalfspaceSystem) -> Result<bool, GeometryError> {
    let dim = h.dim();
    if h.len() <= dim {
        return Ok(dim == 0);
    }
    let unit = h.normalized();
    for j in 0..dim {
        for sign in [1.0, -1.0] {
            let mut lp = LinearProgram::new(dim).all_free();
            for n in unit.normals() {
                lp.add_row(n.as_slice(), Relation::Le, 0.0)?;
            }
            for k in 0..dim {
                let mut e = vec![0.0; dim];
                e[k] = 1.0;
                lp.add_row(&e, Relation::Le, 1.0)?;
                e[k] = -1.0;
                lp.add_row(&e, Relation::Le, 1.0)?;
            }
            let mut c = vec![0.0; dim];
            c[j] = sign;
            lp.maximize(&c)?;
            match lp.solve()? {
                LpOutcome::Optimal { value, .. } if value > 0.5 => return Ok(false),
                LpOutcome::Optimal { .. } => {}
                other => return Err(GeometryError::NumericalFailure(format!("recession-cone LP returned {other:?}"))),
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn unit_box(dim: usize) -> HalfspaceSystem {
        HalfspaceSystem::cube(&Vector::zeros(dim), 1.0)
    }

    #[test]
    fn box_corners() {
        let verts = enumerate_vertices(&unit_box(2)).unwrap();
        assert_eq!(verts.len(), 4);
        for s in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            assert!(verts.vertices.iter().any(|x| (x - v(&s)).norm() < 1e-12));
        }
        assert_eq!(enumerate_vertices(&unit_box(3)).unwrap().len(), 8);
    }

    #[test]
    fn boundedness() {
        assert!(is_bounded(&unit_box(2)).unwrap());
        let half = HalfspaceSystem::from_rows(2, vec![v(&[1.0, 0.0])], vec![1.0]).unwrap();
        assert!(!is_bounded(&half).unwrap());
        // Three halfspaces whose normals do not positively span R²: a wedge.
        let wedge =
            HalfspaceSystem::from_rows(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])], vec![1.0, 1.0, 1.0])
                .unwrap();
        assert!(!is_bounded(&wedge).unwrap());
    }

    #[test]
    fn empty_polytope_is_reported() {
        let h = HalfspaceSystem::from_rows(1, vec![v(&[1.0]), v(&[-1.0])], vec![-1.0, -1.0]).unwrap();
        assert_eq!(enumerate_vertices(&h), Err(GeometryError::EmptyPolytope));
    }

    #[test]
    fn slab_has_no_vertices_but_is_not_empty() {
        let h = HalfspaceSystem::from_rows(2, vec![v(&[1.0, 0.0]), v(&[-1.0, 0.0])], vec![1.0, 1.0]).unwrap();
        assert!(enumerate_vertices(&h).unwrap().is_empty());
    }

    #[test]
    fn degenerate_vertex_is_listed_once() {
        // Square pyramid apex: four facets meet at (0,0,1).
        let mut h = HalfspaceSystem::new(3);
        for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            h.push(v(&[a, b, 1.0]), 1.0).unwrap();
        }
        h.push(v(&[0.0, 0.0, -1.0]), 0.0).unwrap();
        let verts = enumerate_vertices(&h).unwrap();
        assert_eq!(verts.len(), 5);
    }

    #[test]
    fn guards() {
        let h = HalfspaceSystem::new(9);
        assert_eq!(enumerate_vertices(&h), Err(GeometryError::DimensionTooLarge(9)));
        let mut h = HalfspaceSystem::new(2);
        assert_eq!(h.push(v(&[0.0, 0.0]), 1.0), Err(GeometryError::ZeroNormal(0)));
        assert!(matches!(h.push(v(&[1.0]), 1.0), Err(GeometryError::DimensionMismatch { .. })));
    }

    #[test]
    fn every_vertex_is_feasible_and_has_dim_active_rows() {
        let mut h = unit_box(3);
        h.push(v(&[1.0, 1.0, 1.0]), 1.5).unwrap();
        let verts = enumerate_vertices(&h).unwrap();
        for x in &verts.vertices {
            assert!(h.contains(x, tol::GEOM));
            assert!(h.active_rows(x, 1e-9).len() >= 3);
        }
        // Cube with one corner cut off: 7 corners + 3 new vertices.
        assert_eq!(verts.len(), 10);
    }
}
