use std::fs;

use nnc_core::action_sets::{design_minimal_set, validate, SimplexVariant};
use nnc_core::controller::largest_delta;
use nnc_core::systems::gain_by_name;
use nnc_core::{ActionSet, Matrix, SamplingConfig, ValidationReport, Vector};
use serde::Serialize;

use crate::args::{parse_matrix_rows, parse_vector, DesignArgs};
use crate::error::CliError;

#[derive(Debug, Serialize)]
struct DesignOutput {
    delta_target: f64,
    variant: SimplexVariant,
    set: ActionSet,
    validation: ValidationReport,
    /// Computed covering radius agrees with the target.
    delta_matches: bool,
}

fn rotation(spec: &str, m: usize) -> Result<Matrix, CliError> {
    if spec == "identity" {
        return Ok(Matrix::identity(m, m));
    }
    let text = fs::read_to_string(spec).map_err(CliError::io(spec))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text)?;
    parse_matrix_rows("rotation", &rows)
}

pub fn run(a: DesignArgs) -> Result<(), CliError> {
    if a.m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let delta = match (a.delta, a.epsilon, &a.gamma) {
        (Some(d), _, _) => d,
        (None, Some(eps), Some(name)) => largest_delta(&gain_by_name(name)?, eps, a.k1)?,
        _ => return Err(CliError::Usage("give --delta or --epsilon with --gamma".into())),
    };
    let u_star = match &a.u_star {
        Some(s) => parse_vector("u-star", s)?,
        None => Vector::zeros(a.m),
    };
    let variant = SimplexVariant::from(a.variant);
    let set = design_minimal_set(a.m, delta, &rotation(&a.rotation, a.m)?, &u_star, variant)?;
    let validation = validate(&set, a.mu, SamplingConfig::default());
    let delta_matches = validation.delta.is_some_and(|d| (d - delta).abs() <= 1e-9 * delta.max(1.0));
    let passed = validation.assumption_ok && delta_matches;
    if let Some(path) = &a.out {
        fs::write(path, serde_json::to_string_pretty(&set)? + "\n").map_err(CliError::io(path))?;
    }
    let out = DesignOutput { delta_target: delta, variant, set, validation, delta_matches };
    println!("{}", serde_json::to_string_pretty(&out)?);
    if passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed("designed set failed validation".into()))
    }
}
