use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ControllerError;
use crate::Vector;

/// Output maps available by name: `identity_gain:k` (`F(y) = ky`) and
/// `diag_gain:a,b,…` (`F(y) = diag(a, b, …)y`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SectorMap {
    IdentityGain(f64),
    DiagGain(Vec<f64>),
}

impl SectorMap {
    pub fn eval(&self, y: &Vector) -> Vector {
        match self {
            SectorMap::IdentityGain(k) => y * *k,
            SectorMap::DiagGain(d) => Vector::from_fn(y.len(), |i, _| d[i] * y[i]),
        }
    }

    /// Tight constants `(k₁, k₂, k₃)` of the map.
    pub fn constants(&self) -> (f64, f64, f64) {
        match self {
            SectorMap::IdentityGain(k) => (*k, *k, *k),
            SectorMap::DiagGain(d) => {
                let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi, hi)
            }
        }
    }

    /// Required output dimension, if fixed.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SectorMap::IdentityGain(_) => None,
            SectorMap::DiagGain(d) => Some(d.len()),
        }
    }
}

impl fmt::Display for SectorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorMap::IdentityGain(k) => write!(f, "identity_gain:{k}"),
            SectorMap::DiagGain(d) => {
                let parts: Vec<String> = d.iter().map(f64::to_string).collect();
                write!(f, "diag_gain:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for SectorMap {
    type Err = ControllerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| ControllerError::InvalidParameter(msg);
        let (name, arg) = s.split_once(':').ok_or_else(|| bad(format!("sector map `{s}` needs `name:params`")))?;
        let nums: Vec<f64> = arg
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| bad(format!("sector parameter `{p}`: {e}"))))
            .collect::<Result<_, _>>()?;
        if nums.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(bad("sector gains must be positive and finite".into()));
        }
        match (name, nums.as_slice()) {
            ("identity_gain", [k]) => Ok(SectorMap::IdentityGain(*k)),
            ("diag_gain", d) if !d.is_empty() => Ok(SectorMap::DiagGain(d.to_vec())),
            _ => Err(bad(format!("unknown sector map `{s}`"))),
        }
    }
}

impl TryFrom<String> for SectorMap {
    type Error = ControllerError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SectorMap> for String {
    fn from(m: SectorMap) -> String {
        m.to_string()
    }
}

/// A sector map with declared constants
/// `k₁‖y‖² ≤ ⟨F(y), y⟩ ≤ k₂‖y‖²`, `‖F(y)‖ ≤ k₃‖y‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorFeedback {
    pub map: SectorMap,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

const SECTOR_SAMPLES: usize = 256;

impl SectorFeedback {
    /// Declared constants, checked for ordering and then on random samples.
    pub fn new(map: SectorMap, k1: f64, k2: f64, k3: f64, dim: usize) -> Result<Self, ControllerError> {
        if !(k1 > 0.0 && k2 > 0.0 && k3 > 0.0) {
            return Err(ControllerError::InvalidParameter("sector constants must be positive".into()));
        }
        if k1 > k2 || k3 < k1 {
            return Err(ControllerError::InvalidParameter(format!("need k1 ≤ k2 and k3 ≥ k1, got ({k1}, {k2}, {k3})")));
        }
        if let Some(d) = map.dim() {
            if d != dim {
                return Err(ControllerError::DimensionMismatch { expected: dim, got: d });
            }
        }
        let s = Self { map, k1, k2, k3 };
        s.validate_sampled(dim, SECTOR_SAMPLES, 0)?;
        Ok(s)
    }

    /// Uses the map's tight constants.
    pub fn from_map(map: SectorMap, dim: usize) -> Result<Self, ControllerError> {
        let (k1, k2, k3) = map.constants();
        Self::new(map, k1, k2, k3, dim)
    }

    pub fn eval(&self, y: &Vector) -> Vector {
        self.map.eval(y)
    }

    /// Checks the three sector inequalities on `samples` random directions
    /// and magnitudes.
    pub fn validate_sampled(&self, dim: usize, samples: usize, seed: u64) -> Result<(), ControllerError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
            let y = Vector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)) * scale;
            let n2 = y.norm_squared();
            if n2 == 0.0 {
                continue;
            }
            let f = self.eval(&y);
            let inner = f.dot(&y);
            let slack = 1e-12 * n2 * self.k3.max(1.0);
            if inner < self.k1 * n2 - slack || inner > self.k2 * n2 + slack {
                return Err(ControllerError::SectorViolation(format!("⟨F(y),y⟩ = {inner:e} at ‖y‖² = {n2:e}")));
            }
            if f.norm() > self.k3 * n2.sqrt() * (1.0 + 1e-12) {
                return Err(ControllerError::SectorViolation(format!("‖F(y)‖ = {:e} exceeds k3‖y‖", f.norm())));
            }
        }
        Ok(())
    }
}
