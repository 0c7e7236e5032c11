use super::ControllerError;
use crate::action_sets::ActionSet;
use crate::{tol, Vector};

/// Outcome of one evaluation of φ.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub action: Vector,
    /// Indices whose distance `‖v + y‖` is within `tie_tol` of the minimum,
    /// ascending.
    pub tie_set: Vec<usize>,
    pub distance: f64,
}

/// `φ(y) = argmin_{v∈U} ‖v + y‖` with lowest-index tie-breaking and an
/// optional hysteresis margin.
///
/// With `hysteresis > 0` the law keeps the previously held action while its
/// distance stays within the margin of the minimum, so one instance must not
/// be shared between simulations. With the default margin of zero it is
/// memoryless.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestNeighborLaw {
    set: ActionSet,
    tie_tol: f64,
    hysteresis: f64,
    held: Option<usize>,
}

impl NearestNeighborLaw {
    pub fn new(set: ActionSet) -> Self {
        Self { set, tie_tol: tol::TIE, hysteresis: 0.0, held: None }
    }

    pub fn with_tie_tol(mut self, tie_tol: f64) -> Result<Self, ControllerError> {
        if !(tie_tol >= 0.0) || !tie_tol.is_finite() {
            return Err(ControllerError::InvalidParameter(format!("tie_tol must be ≥ 0, got {tie_tol}")));
        }
        self.tie_tol = tie_tol;
        Ok(self)
    }

    pub fn with_hysteresis(mut self, hysteresis: f64) -> Result<Self, ControllerError> {
        if !(hysteresis >= 0.0) || !hysteresis.is_finite() {
            return Err(ControllerError::InvalidParameter(format!("hysteresis must be ≥ 0, got {hysteresis}")));
        }
        self.hysteresis = hysteresis;
        Ok(self)
    }

    pub fn set(&self) -> &ActionSet {
        &self.set
    }

    pub fn tie_tol(&self) -> f64 {
        self.tie_tol
    }

    pub fn hysteresis(&self) -> f64 {
        self.hysteresis
    }

    pub fn held(&self) -> Option<usize> {
        self.held
    }

    /// Forgets the held action.
    pub fn reset(&mut self) {
        self.held = None;
    }

    /// Evaluates φ and updates the held action.
    pub fn phi(&mut self, y: &Vector) -> Result<Selection, ControllerError> {
        let sel = self.select(y, self.held)?;
        if self.hysteresis > 0.0 {
            self.held = Some(sel.index);
        }
        Ok(sel)
    }

    /// Pure evaluation given a held action.
    pub fn select(&self, y: &Vector, held: Option<usize>) -> Result<Selection, ControllerError> {
        if y.len() != self.set.dim() {
            return Err(ControllerError::DimensionMismatch { expected: self.set.dim(), got: y.len() });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(ControllerError::InvalidParameter("output must be finite".into()));
        }
        let dists: Vec<f64> = self.set.actions().iter().map(|v| (v + y).norm()).collect();
        let min = dists.iter().copied().fold(f64::INFINITY, f64::min);
        let tie_set: Vec<usize> = (0..dists.len()).filter(|&i| dists[i] <= min + self.tie_tol).collect();
        let index = match held {
            Some(h) if self.hysteresis > 0.0 && h < dists.len() && dists[h] <= min + self.hysteresis => h,
            _ => tie_set[0],
        };
        Ok(Selection { index, action: self.set.actions()[index].clone(), tie_set, distance: dists[index] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action_sets::planar_trine;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn picks_nearest_to_minus_y() {
        let mut law = NearestNeighborLaw::new(planar_trine(0.0, 1.0).unwrap());
        let sel = law.phi(&v(&[0.0, -2.0])).unwrap();
        assert_eq!(sel.action, v(&[0.0, 1.0]));
        assert_eq!(sel.tie_set, vec![1]);
        assert_eq!(law.phi(&v(&[0.0, 0.0])).unwrap().index, 0);
    }

    #[test]
    fn symmetric_ties_take_lowest_index() {
        let set = planar_trine(0.0, 1.0).unwrap();
        // At scale 1 the base ties as well.
        let y = -(&set.actions()[1] + &set.actions()[2]) * 1.5;
        let law = NearestNeighborLaw::new(set).with_tie_tol(1e-9).unwrap();
        let sel = law.select(&y, None).unwrap();
        assert_eq!(sel.tie_set, vec![1, 2]);
        assert_eq!(sel.index, 1);
    }

    #[test]
    fn hysteresis_holds_the_previous_action() {
        let set = planar_trine(0.0, 1.0).unwrap();
        let mut law = NearestNeighborLaw::new(set).with_hysteresis(0.1).unwrap();
        // Just past the midpoint between 0 and u₁.
        assert_eq!(law.phi(&v(&[0.0, -0.52])).unwrap().index, 1);
        // Slightly back inside the base cell: held.
        assert_eq!(law.phi(&v(&[0.0, -0.48])).unwrap().index, 1);
        // Well inside: released.
        assert_eq!(law.phi(&v(&[0.0, -0.3])).unwrap().index, 0);
        law.reset();
        assert_eq!(law.held(), None);
    }

    #[test]
    fn zero_hysteresis_is_memoryless() {
        let set = planar_trine(0.0, 1.0).unwrap();
        let mut law = NearestNeighborLaw::new(set);
        law.phi(&v(&[0.0, -0.52])).unwrap();
        assert_eq!(law.held(), None);
        assert_eq!(law.phi(&v(&[0.0, -0.48])).unwrap().index, 0);
    }

    #[test]
    fn guards() {
        let law = NearestNeighborLaw::new(planar_trine(0.0, 1.0).unwrap());
        assert!(matches!(law.select(&v(&[1.0]), None), Err(ControllerError::DimensionMismatch { .. })));
        assert!(law.select(&v(&[f64::NAN, 0.0]), None).is_err());
        assert!(law.clone().with_hysteresis(-1.0).is_err());
        assert!(law.with_tie_tol(f64::NAN).is_err());
    }
}
