use crate::lp::{LinearProgram, Relation};
use crate::{tol, Vector};

/// Whether `p` lies in the interior of `conv(points)`.
///
/// Probes `p ± tol::INTERIOR·eⱼ` for every coordinate direction and checks
/// each probe for membership in the hull by LP feasibility. The problem is
/// translated to `p` and scaled to unit spread before solving.
pub fn contains_in_interior(points: &[Vector], p: &Vector) -> bool {
    let dim = p.len();
    if points.len() < 2 || points.iter().any(|q| q.len() != dim) {
        return false;
    }
    let scale = points.iter().map(|q| (q - p).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return false;
    }
    let shifted: Vec<Vector> = points.iter().map(|q| (q - p) / scale).collect();
    let margin = tol::INTERIOR / scale;

    (0..dim).all(|j| {
        [margin, -margin].iter().all(|&d| {
            let mut target = Vector::zeros(dim);
            target[j] = d;
            in_hull(&shifted, &target)
        })
    })
}

fn in_hull(points: &[Vector], target: &Vector) -> bool {
    let count = points.len();
    let mut lp = LinearProgram::new(count).with_feasibility_tol(1e-13);
    let ones = vec![1.0; count];
    let rows = std::iter::once((ones, 1.0))
        .chain((0..target.len()).map(|k| (points.iter().map(|q| q[k]).collect::<Vec<_>>(), target[k])));
    for (coeffs, rhs) in rows {
        if lp.add_row(&coeffs, Relation::Eq, rhs).is_err() {
            return false;
        }
    }
    matches!(lp.solve(), Ok(out) if out.is_feasible())
}
