use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use super::{
    ControlAffineSystem, LinearSystem, ObservabilityGain, ShiftedStorage, SigmaExIncrementalStorage, StorageFunction,
    SystemError,
};
use crate::Vector;

type IncrementalStorageFn = dyn Fn(&Vector) -> Result<Arc<dyn StorageFunction>, SystemError> + Send + Sync;

/// A plant with whatever certificates are known for it.
#[derive(Clone)]
pub struct Plant {
    pub name: String,
    pub system: Arc<dyn ControlAffineSystem>,
    pub storage: Option<Arc<dyn StorageFunction>>,
    pub gain: Option<ObservabilityGain>,
    incremental_storage: Option<Arc<IncrementalStorageFn>>,
}

impl std::fmt::Debug for Plant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Plant")
            .field("name", &self.name)
            .field("state_dim", &self.system.state_dim())
            .field("input_dim", &self.system.input_dim())
            .field("gain", &self.gain)
            .finish()
    }
}

impl Plant {
    pub fn new(name: impl Into<String>, system: Arc<dyn ControlAffineSystem>) -> Self {
        Self { name: name.into(), system, storage: None, gain: None, incremental_storage: None }
    }

    pub fn with_storage(mut self, storage: Arc<dyn StorageFunction>) -> Self {
        self.storage = Some(storage);
        self
    }

    pub fn with_gain(mut self, gain: ObservabilityGain) -> Self {
        self.gain = Some(gain);
        self
    }

    /// Storage of the shifted plant about `x*`, given in incremental
    /// coordinates.
    pub fn with_incremental_storage(
        mut self,
        f: impl Fn(&Vector) -> Result<Arc<dyn StorageFunction>, SystemError> + Send + Sync + 'static,
    ) -> Self {
        self.incremental_storage = Some(Arc::new(f));
        self
    }

    /// Incremental storage about `x*`, evaluated at original coordinates.
    pub fn storage_about(&self, x_star: &Vector) -> Option<Result<Arc<dyn StorageFunction>, SystemError>> {
        let build = self.incremental_storage.as_ref()?;
        Some(build(x_star).map(|s| Arc::new(ShiftedStorage::new(s, x_star.clone())) as Arc<dyn StorageFunction>))
    }
}

pub type PlantBuilder = Arc<dyn Fn(Option<&str>) -> Result<Plant, SystemError> + Send + Sync>;

/// Name → plant constructor. Specs have the form `name` or `name:arg`.
#[derive(Clone)]
pub struct SystemRegistry {
    builders: BTreeMap<String, PlantBuilder>,
}

impl Default for SystemRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl SystemRegistry {
    pub fn empty() -> Self {
        Self { builders: BTreeMap::new() }
    }

    /// `sigma_ex` and `linear:<json or path>`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("sigma_ex", |_| Ok(sigma_ex_plant()));
        reg.register("linear", |arg| {
            let arg =
                arg.ok_or_else(|| SystemError::InvalidParameter("linear plant needs `linear:<json|path>`".into()))?;
            let text = if arg.trim_start().starts_with('{') {
                arg.to_string()
            } else {
                std::fs::read_to_string(arg)
                    .map_err(|e| SystemError::InvalidParameter(format!("cannot read `{arg}`: {e}")))?
            };
            let (sys, storage) = LinearSystem::from_json(&text)?;
            let mut plant = Plant::new("linear", Arc::new(sys));
            if let Some(p) = storage {
                plant = plant.with_storage(Arc::new(p));
            }
            Ok(plant)
        });
        reg
    }

    pub fn register(
        &mut self,
        name: impl Into<String>,
        builder: impl Fn(Option<&str>) -> Result<Plant, SystemError> + Send + Sync + 'static,
    ) {
        self.builders.insert(name.into(), Arc::new(builder));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }

    pub fn build(&self, spec: &str) -> Result<Plant, SystemError> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let builder = self.builders.get(name).ok_or_else(|| SystemError::UnknownName(name.to_string()))?;
        builder(arg)
    }
}

fn sigma_ex_plant() -> Plant {
    let (sys, storage, gain) = super::sigma_ex();
    Plant::new("sigma_ex", Arc::new(sys)).with_storage(Arc::new(storage)).with_gain(gain).with_incremental_storage(
        |x_star| {
            if x_star.len() != 3 {
                return Err(SystemError::DimensionMismatch { expected: 3, got: x_star.len() });
            }
            Ok(Arc::new(SigmaExIncrementalStorage { x3_star: x_star[2] }) as Arc<dyn StorageFunction>)
        },
    )
}

/// Gains by name: `sigma_ex`, `sigma_ex_inc:<x3*>`, `linear:<c>` (γ(s) = cs)
/// and `identity`.
pub fn gain_by_name(spec: &str) -> Result<ObservabilityGain, SystemError> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let number = |a: Option<&str>| -> Result<f64, SystemError> {
        let a = a.ok_or_else(|| SystemError::InvalidParameter(format!("gain `{name}` needs a parameter")))?;
        a.trim().parse::<f64>().map_err(|e| SystemError::InvalidParameter(format!("gain parameter `{a}`: {e}")))
    };
    match name {
        "sigma_ex" => Ok(super::sigma_ex().2),
        "sigma_ex_inc" => ObservabilityGain::sigma_ex_incremental(number(arg)?),
        "linear" => {
            let c = number(arg)?;
            if !(c > 0.0) {
                return Err(SystemError::InvalidParameter("linear gain needs c > 0".into()));
            }
            ObservabilityGain::new(format!("linear:{c}"), 1.0, move |s| c * s)
        }
        "identity" => ObservabilityGain::new("identity", PI, |s| s),
        _ => Err(SystemError::UnknownName(name.to_string())),
    }
}
