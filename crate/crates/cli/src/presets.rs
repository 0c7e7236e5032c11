use nnc_core::action_sets::planar_trine;
use nnc_core::{FeedbackLaw, SimConfig};
use serde::{Deserialize, Serialize};

use crate::args::Preset;
use crate::error::CliError;

/// Everything a simulate or sweep run needs; unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: String,
    pub law: FeedbackLaw,
    pub x0: Vec<f64>,
    #[serde(default)]
    pub sim: SimConfig,
    pub epsilon: f64,
    /// Ball center, default the origin. For incremental laws it is also the
    /// steady state the storage is taken about.
    #[serde(default)]
    pub center: Option<Vec<f64>>,
    #[serde(default)]
    pub tail_action: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: u64,
}

const REFERENCE_X0: [f64; 3] = [2.0, 2.0, 1.5];

fn reference_sim() -> SimConfig {
    SimConfig { dt: 1e-3, hold_steps: 1, t_final: 150.0, record_stride: 10 }
}

pub fn preset(p: Preset) -> Result<RunConfig, CliError> {
    let trine = planar_trine(0.0, 0.1)?;
    Ok(match p {
        Preset::ReproduceExample1 => RunConfig {
            system: "sigma_ex".into(),
            law: FeedbackLaw::unity(trine),
            x0: REFERENCE_X0.to_vec(),
            sim: reference_sim(),
            epsilon: 1.0,
            center: Some(vec![0.0; 3]),
            tail_action: Some(vec![0.0; 2]),
            seed: 0,
        },
        Preset::ReproduceExample2 => {
            let u_star = nnc_core::Vector::from_column_slice(&[1.0, 0.0]);
            // y* = h(x*) for x* = (0, 0, −1).
            let y_star = nnc_core::Vector::from_column_slice(&[0.0, -1.0]);
            RunConfig {
                system: "sigma_ex".into(),
                law: FeedbackLaw::incremental(trine.translated(&u_star), u_star, y_star, None)?,
                x0: REFERENCE_X0.to_vec(),
                sim: reference_sim(),
                epsilon: 0.5,
                center: Some(vec![0.0, 0.0, -1.0]),
                tail_action: Some(vec![1.0, 0.0]),
                seed: 0,
            }
        }
    })
}
