use super::{enumerate_vertices, is_bounded, GeometryError, HalfspaceSystem, PolytopeVertices};
use crate::action_sets::ActionSet;
use crate::{tol, Vector};

/// Voronoi cell of one point of a finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiCellReport {
    pub center: Vector,
    pub halfspaces: HalfspaceSystem,
    pub bounded: bool,
    /// Present iff `bounded`.
    pub vertices: Option<PolytopeVertices>,
    /// Largest vertex distance to `center`; present iff `bounded`.
    pub delta: Option<f64>,
}

fn check_points(points: &[Vector], center_index: usize) -> Result<usize, GeometryError> {
    if center_index >= points.len() {
        return Err(GeometryError::IndexOutOfRange { index: center_index, len: points.len() });
    }
    let dim = points[center_index].len();
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(GeometryError::DimensionMismatch { expected: dim, got: p.len() });
        }
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            if (p - q).norm() <= tol::GEOM {
                return Err(GeometryError::DuplicatePoints(i, j));
            }
        }
    }
    Ok(dim)
}

fn bisector(center: &Vector, other: &Vector) -> (Vector, f64) {
    // ⟨v − c, x − (v + c)/2⟩ ≤ 0
    (other - center, 0.5 * (other.norm_squared() - center.norm_squared()))
}

fn bisectors<'a>(
    dim: usize,
    center: &Vector,
    others: impl IntoIterator<Item = &'a Vector>,
) -> Result<HalfspaceSystem, GeometryError> {
    let mut h = HalfspaceSystem::new(dim);
    for v in others {
        let (n, b) = bisector(center, v);
        h.push(n, b)?;
    }
    Ok(h)
}

/// One bisector halfspace per non-center point; the intersection is the set
/// of points at least as close to the center as to any other point.
pub fn voronoi_halfspaces(points: &[Vector], center_index: usize) -> Result<HalfspaceSystem, GeometryError> {
    let dim = check_points(points, center_index)?;
    let center = &points[center_index];
    bisectors(dim, center, points.iter().enumerate().filter(|(i, _)| *i != center_index).map(|(_, v)| v))
}

/// H-representation, boundedness verdict, vertices and δ of one cell.
pub fn voronoi_cell(points: &[Vector], center_index: usize) -> Result<VoronoiCellReport, GeometryError> {
    let halfspaces = voronoi_halfspaces(points, center_index)?;
    let center = points[center_index].clone();
    let bounded = is_bounded(&halfspaces)?;
    let vertices = if bounded { cell_vertices(points, center_index, None)? } else { None };
    let delta = vertices.as_ref().and_then(|v| v.farthest_from(&center)).map(|(d, _)| d);
    Ok(VoronoiCellReport { center, halfspaces, bounded, vertices, delta })
}

/// Smallest δ with the base action's Voronoi cell inside the closed δ-ball
/// around the base action.
pub fn covering_radius(set: &ActionSet) -> Result<f64, GeometryError> {
    let base = set.base();
    let vertices = cell_vertices(set.actions(), set.base_index(), None)?.ok_or(GeometryError::UnboundedCell)?;
    vertices
        .farthest_from(base)
        .map(|(d, _)| d)
        .ok_or_else(|| GeometryError::NumericalFailure("bounded cell without vertices".into()))
}

/// Vertices of a Voronoi cell, optionally clipped to the cube of half-width
/// `clip` around the center. Returns `None` for an unclipped unbounded cell.
///
/// Starts from the nearest neighbors and adds a point's bisector only when a
/// current vertex violates it. Once every vertex satisfies every remaining
/// bisector, the polytope spanned by the vertices is the full cell.
pub(crate) fn cell_vertices(
    points: &[Vector],
    center_index: usize,
    clip: Option<f64>,
) -> Result<Option<PolytopeVertices>, GeometryError> {
    let dim = check_points(points, center_index)?;
    if dim > tol::MAX_ENUM_DIM {
        return Err(GeometryError::DimensionTooLarge(dim));
    }
    let center = &points[center_index];
    let mut others: Vec<usize> = (0..points.len()).filter(|&i| i != center_index).collect();
    others.sort_by(|&a, &b| {
        let da = (&points[a] - center).norm_squared();
        let db = (&points[b] - center).norm_squared();
        da.total_cmp(&db).then(a.cmp(&b))
    });

    let mut taken = (2 * dim).min(others.len());
    let mut active: Vec<usize> = others[..taken].to_vec();
    loop {
        let mut h = bisectors(dim, center, active.iter().map(|&i| &points[i]))?;
        if let Some(r) = clip {
            h.extend(&HalfspaceSystem::cube(center, r))?;
        } else if !is_bounded(&h)? {
            if taken == others.len() {
                return Ok(None);
            }
            taken = (2 * taken).max(1).min(others.len());
            active = others[..taken].to_vec();
            continue;
        }

        let verts = enumerate_vertices(&h)?;
        let violators: Vec<usize> = others
            .iter()
            .copied()
            .filter(|i| !active.contains(i))
            .filter(|&i| {
                let (n, b) = bisector(center, &points[i]);
                let s = n.norm();
                verts.vertices.iter().any(|w| (n.dot(w) - b) / s > tol::GEOM)
            })
            .collect();
        if violators.is_empty() {
            return Ok(Some(verts));
        }
        active.extend(violators);
    }
}
