use std::fs;

use nnc_core::action_sets::validate;
use nnc_core::controller::{
    check_proposition1, check_proposition2, check_proposition3, check_proposition4, DesignVerdict, SectorFeedback,
    SectorMap,
};
use nnc_core::systems::gain_by_name;
use nnc_core::{ActionSet, SamplingConfig, ValidationReport};
use serde::Serialize;

use crate::args::CheckArgs;
use crate::error::CliError;

#[derive(Debug, Serialize)]
struct CheckOutput {
    validation: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<DesignVerdict>,
    passed: bool,
}

fn sector(a: &CheckArgs, dim: usize) -> Result<Option<SectorFeedback>, CliError> {
    if let Some(k) = a.k1 {
        return Ok(Some(SectorFeedback::from_map(SectorMap::IdentityGain(k), dim)?));
    }
    let Some(text) = &a.sector else { return Ok(None) };
    let ks: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--sector `{text}`: {e}")))?;
    let [k1, k2, k3] = ks[..] else {
        return Err(CliError::Usage("--sector takes k1,k2,k3".into()));
    };
    match &a.sector_map {
        Some(name) => {
            let map: SectorMap = name.parse()?;
            SectorFeedback::new(map, k1, k2, k3, dim).map(Some).map_err(|e| CliError::CheckFailed(e.to_string()))
        }
        // Constants taken as declared.
        None => {
            if !(k1 > 0.0 && k1 <= k2 && k3 >= k1) {
                return Err(CliError::Usage(format!("need 0 < k1 ≤ k2 and k3 ≥ k1, got {text}")));
            }
            Ok(Some(SectorFeedback { map: SectorMap::IdentityGain(k1), k1, k2, k3 }))
        }
    }
}

pub fn run(a: CheckArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.set).map_err(CliError::io(&a.set))?;
    let set: ActionSet = serde_json::from_str(&text)?;
    let sampling = SamplingConfig::default();
    let sector = sector(&a, set.dim())?;
    let validation = validate(&set, a.mu || sector.is_some(), sampling);
    let mut passed = validation.assumption_ok;

    let verdict = if !validation.assumption_ok {
        None
    } else if let (Some(name), Some(eps)) = (&a.gamma, a.epsilon) {
        let gamma = gain_by_name(name)?;
        let v = match (&sector, a.incremental) {
            (None, false) => check_proposition1(&set, &gamma, eps)?,
            (None, true) => check_proposition3(&set, &gamma, eps)?,
            (Some(s), false) => check_proposition2(&set, s, &gamma, eps, sampling)?,
            (Some(s), true) => check_proposition4(&set, s, &gamma, eps, sampling)?,
        };
        passed &= v.passed;
        Some(v)
    } else {
        if let (Some(s), Some(mu)) = (&sector, validation.mu_min1) {
            passed &= (s.k1 / s.k3).powi(2) + mu * mu > 1.0;
        }
        None
    };

    println!("{}", serde_json::to_string_pretty(&CheckOutput { validation: validation.clone(), verdict, passed })?);
    if passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed(validation.witness.unwrap_or_else(|| "design condition not met".into())))
    }
}
