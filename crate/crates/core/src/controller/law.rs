use serde::{Deserialize, Serialize};

use super::{ControllerError, NearestNeighborLaw, SectorFeedback, SectorMap, Selection};
use crate::action_sets::ActionSet;
use crate::{tol, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawVariant {
    /// `u = φ(y)`
    Unity,
    /// `u = φ(F(y))`
    Sector,
    /// `u = φ(y − y* − u*)`
    IncrementalUnity,
    /// `u = φ(F(y − y*) − u*)`
    IncrementalSector,
}

impl LawVariant {
    pub fn is_incremental(self) -> bool {
        matches!(self, LawVariant::IncrementalUnity | LawVariant::IncrementalSector)
    }

    pub fn uses_sector(self) -> bool {
        matches!(self, LawVariant::Sector | LawVariant::IncrementalSector)
    }
}

/// Wire format of a [`FeedbackLaw`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackLawSpec {
    pub variant: LawVariant,
    pub set: ActionSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<SectorMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_star: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_star: Option<Vec<f64>>,
    #[serde(default)]
    pub hysteresis: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_tol: Option<f64>,
}

/// A nearest-neighbor law together with its output pre-processing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FeedbackLawSpec", into = "FeedbackLawSpec")]
pub struct FeedbackLaw {
    variant: LawVariant,
    law: NearestNeighborLaw,
    sector: Option<SectorFeedback>,
    u_star: Option<Vector>,
    y_star: Option<Vector>,
}

impl FeedbackLaw {
    pub fn unity(set: ActionSet) -> Self {
        Self { variant: LawVariant::Unity, law: NearestNeighborLaw::new(set), sector: None, u_star: None, y_star: None }
    }

    pub fn sector(set: ActionSet, sector: SectorFeedback) -> Self {
        Self {
            variant: LawVariant::Sector,
            law: NearestNeighborLaw::new(set),
            sector: Some(sector),
            u_star: None,
            y_star: None,
        }
    }

    /// Incremental law about `(u*, y*)`; `u*` must be an element of `set`.
    pub fn incremental(
        set: ActionSet,
        u_star: Vector,
        y_star: Vector,
        sector: Option<SectorFeedback>,
    ) -> Result<Self, ControllerError> {
        let variant = if sector.is_some() { LawVariant::IncrementalSector } else { LawVariant::IncrementalUnity };
        Self::from_parts(variant, NearestNeighborLaw::new(set), sector, Some(u_star), Some(y_star))
    }

    pub fn from_parts(
        variant: LawVariant,
        law: NearestNeighborLaw,
        sector: Option<SectorFeedback>,
        u_star: Option<Vector>,
        y_star: Option<Vector>,
    ) -> Result<Self, ControllerError> {
        let m = law.set().dim();
        if variant.uses_sector() && sector.is_none() {
            return Err(ControllerError::MissingSector);
        }
        if !variant.uses_sector() && sector.is_some() {
            return Err(ControllerError::InvalidParameter(format!("{variant:?} law takes no sector map")));
        }
        if variant.is_incremental() {
            let (Some(us), Some(ys)) = (&u_star, &y_star) else {
                return Err(ControllerError::MissingSetpoint);
            };
            for v in [us, ys] {
                if v.len() != m {
                    return Err(ControllerError::DimensionMismatch { expected: m, got: v.len() });
                }
            }
            if !law.set().actions().iter().any(|a| (a - us).norm() <= tol::GEOM) {
                return Err(ControllerError::SetpointNotInSet);
            }
        } else if u_star.is_some() || y_star.is_some() {
            return Err(ControllerError::InvalidParameter(format!("{variant:?} law takes no setpoint")));
        }
        Ok(Self { variant, law, sector, u_star, y_star })
    }

    pub fn with_hysteresis(mut self, hysteresis: f64) -> Result<Self, ControllerError> {
        self.law = self.law.with_hysteresis(hysteresis)?;
        Ok(self)
    }

    pub fn variant(&self) -> LawVariant {
        self.variant
    }

    pub fn law(&self) -> &NearestNeighborLaw {
        &self.law
    }

    pub fn set(&self) -> &ActionSet {
        self.law.set()
    }

    pub fn sector_feedback(&self) -> Option<&SectorFeedback> {
        self.sector.as_ref()
    }

    pub fn u_star(&self) -> Option<&Vector> {
        self.u_star.as_ref()
    }

    pub fn y_star(&self) -> Option<&Vector> {
        self.y_star.as_ref()
    }

    pub fn reset(&mut self) {
        self.law.reset();
    }

    /// Applies the law selected by the variant.
    pub fn act(&mut self, y: &Vector) -> Result<Selection, ControllerError> {
        match self.variant {
            LawVariant::Unity => self.law.phi(y),
            LawVariant::Sector => self.phi_sector(y),
            LawVariant::IncrementalUnity | LawVariant::IncrementalSector => self.phi_incremental(y),
        }
    }

    /// `φ(F(y))`
    pub fn phi_sector(&mut self, y: &Vector) -> Result<Selection, ControllerError> {
        let f = self.sector.as_ref().ok_or(ControllerError::MissingSector)?.eval(y);
        self.law.phi(&f)
    }

    /// `φ(F(y − y*) − u*)`, with `F` the identity when no sector map is set.
    pub fn phi_incremental(&mut self, y: &Vector) -> Result<Selection, ControllerError> {
        let (Some(us), Some(ys)) = (&self.u_star, &self.y_star) else {
            return Err(ControllerError::MissingSetpoint);
        };
        if y.len() != ys.len() {
            return Err(ControllerError::DimensionMismatch { expected: ys.len(), got: y.len() });
        }
        let yb = y - ys;
        let z = match &self.sector {
            Some(s) => s.eval(&yb),
            None => yb,
        } - us;
        self.law.phi(&z)
    }
}

fn opt_vec(v: Option<Vec<f64>>) -> Option<Vector> {
    v.map(Vector::from_vec)
}

impl TryFrom<FeedbackLawSpec> for FeedbackLaw {
    type Error = ControllerError;

    fn try_from(spec: FeedbackLawSpec) -> Result<Self, Self::Error> {
        let m = spec.set.dim();
        let mut law = NearestNeighborLaw::new(spec.set).with_hysteresis(spec.hysteresis)?;
        if let Some(t) = spec.tie_tol {
            law = law.with_tie_tol(t)?;
        }
        let sector = match spec.sector {
            Some(map) => {
                let (d1, d2, d3) = map.constants();
                let (k1, k2, k3) = (spec.k1.unwrap_or(d1), spec.k2.unwrap_or(d2), spec.k3.unwrap_or(d3));
                Some(SectorFeedback::new(map, k1, k2, k3, m)?)
            }
            None if spec.k1.is_some() || spec.k2.is_some() || spec.k3.is_some() => {
                return Err(ControllerError::InvalidParameter("sector constants given without a sector map".into()))
            }
            None => None,
        };
        Self::from_parts(spec.variant, law, sector, opt_vec(spec.u_star), opt_vec(spec.y_star))
    }
}

impl From<FeedbackLaw> for FeedbackLawSpec {
    fn from(l: FeedbackLaw) -> Self {
        let tie_tol = (l.law.tie_tol() != tol::TIE).then_some(l.law.tie_tol());
        let hysteresis = l.law.hysteresis();
        let to_vec = |v: Option<Vector>| v.map(|v| v.iter().copied().collect());
        FeedbackLawSpec {
            variant: l.variant,
            k1: l.sector.as_ref().map(|s| s.k1),
            k2: l.sector.as_ref().map(|s| s.k2),
            k3: l.sector.as_ref().map(|s| s.k3),
            sector: l.sector.map(|s| s.map),
            u_star: to_vec(l.u_star),
            y_star: to_vec(l.y_star),
            hysteresis,
            tie_tol,
            set: l.law.set().clone(),
        }
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
    fn sector_gain_enlarges_the_active_region() {
        let set = planar_trine(0.0, 1.0).unwrap();
        let y = v(&[0.0, -0.2]);
        let mut unity = FeedbackLaw::unity(set.clone());
        assert_eq!(unity.act(&y).unwrap().index, 0);
        let sector = SectorFeedback::from_map(SectorMap::IdentityGain(3.0), 2).unwrap();
        let mut law = FeedbackLaw::sector(set, sector);
        assert_eq!(law.act(&y).unwrap().action, v(&[0.0, 1.0]));
    }

    #[test]
    fn unit_sector_matches_unity() {
        let set = planar_trine(0.3, 1.0).unwrap();
        let mut a = FeedbackLaw::unity(set.clone());
        let mut b = FeedbackLaw::sector(set, SectorFeedback::from_map(SectorMap::IdentityGain(1.0), 2).unwrap());
        for k in 0..100 {
            let t = k as f64 * 0.37;
            let y = v(&[t.cos() * (k as f64 / 50.0), t.sin()]);
            assert_eq!(a.act(&y).unwrap(), b.act(&y).unwrap());
        }
    }

    #[test]
    fn incremental_setpoint_is_a_fixed_point() {
        let u_star = v(&[1.0, 0.0]);
        let set = planar_trine(0.0, 0.1).unwrap().translated(&u_star);
        let y_star = v(&[0.0, -1.0]);
        let mut law = FeedbackLaw::incremental(set, u_star.clone(), y_star.clone(), None).unwrap();
        assert_eq!(law.variant(), LawVariant::IncrementalUnity);
        assert_eq!(law.act(&y_star).unwrap().action, u_star);
        // A far output selects another action.
        assert_ne!(law.act(&v(&[0.0, -3.0])).unwrap().action, u_star);
    }

    #[test]
    fn construction_guards() {
        let set = planar_trine(0.0, 1.0).unwrap();
        let nn = NearestNeighborLaw::new(set.clone());
        assert_eq!(
            FeedbackLaw::from_parts(LawVariant::Sector, nn.clone(), None, None, None),
            Err(ControllerError::MissingSector)
        );
        assert_eq!(
            FeedbackLaw::from_parts(LawVariant::IncrementalUnity, nn.clone(), None, None, None),
            Err(ControllerError::MissingSetpoint)
        );
        assert_eq!(
            FeedbackLaw::incremental(set, v(&[5.0, 5.0]), v(&[0.0, 0.0]), None),
            Err(ControllerError::SetpointNotInSet)
        );
        let mut unity = FeedbackLaw::unity(planar_trine(0.0, 1.0).unwrap());
        assert_eq!(unity.phi_incremental(&v(&[0.0, 0.0])), Err(ControllerError::MissingSetpoint));
        assert_eq!(unity.phi_sector(&v(&[0.0, 0.0])), Err(ControllerError::MissingSector));
    }

    #[test]
    fn json_round_trip() {
        let u_star = v(&[1.0, 0.0]);
        let set = planar_trine(0.0, 0.1).unwrap().translated(&u_star);
        let sector = SectorFeedback::from_map(SectorMap::IdentityGain(2.0), 2).unwrap();
        let law = FeedbackLaw::incremental(set, u_star, v(&[0.0, -1.0]), Some(sector))
            .unwrap()
            .with_hysteresis(0.01)
            .unwrap();
        let text = serde_json::to_string(&law).unwrap();
        assert!(text.starts_with("{\"variant\":\"incremental_sector\",\"set\":{"));
        assert!(text.contains("\"sector\":\"identity_gain:2\""));
        let back: FeedbackLaw = serde_json::from_str(&text).unwrap();
        assert_eq!(back, law);
    }

    #[test]
    fn json_rejects_unknown_and_inconsistent_fields() {
        let set = serde_json::to_string(&planar_trine(0.0, 1.0).unwrap()).unwrap();
        let ok = format!(r#"{{"variant": "unity", "set": {set}}}"#);
        assert!(serde_json::from_str::<FeedbackLaw>(&ok).is_ok());
        for bad in [
            format!(r#"{{"variant": "unity", "set": {set}, "gain": 1}}"#),
            format!(r#"{{"variant": "sector", "set": {set}}}"#),
            format!(r#"{{"variant": "unity", "set": {set}, "k1": 1}}"#),
            format!(r#"{{"variant": "unity", "set": {set}, "hysteresis": -1}}"#),
            format!(r#"{{"variant": "incremental_unity", "set": {set}, "u_star": [0, 0]}}"#),
        ] {
            assert!(serde_json::from_str::<FeedbackLaw>(&bad).is_err(), "{bad}");
        }
    }
}
