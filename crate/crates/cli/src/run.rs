use std::fs;
use std::io::BufWriter;
use std::sync::Arc;

use nnc_core::simulator::{
    self, batch_sweep, convergence_metrics, sample_initial_conditions, ConvergenceReport, SimError,
};
use nnc_core::systems::{Plant, SystemRegistry};
use nnc_core::{FeedbackLaw, StorageFunction, Vector};
use serde::Serialize;

use crate::args::{parse_vector, RunArgs, SimulateArgs, SweepArgs};
use crate::error::CliError;
use crate::presets::{preset, RunConfig};

fn load(a: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = if let Some(p) = a.preset {
        Some(preset(p)?)
    } else if let Some(path) = &a.config {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        Some(serde_json::from_str::<RunConfig>(&text)?)
    } else {
        None
    };
    if let Some(path) = &a.law {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        let law: FeedbackLaw = serde_json::from_str(&text)?;
        match cfg.as_mut() {
            Some(c) => c.law = law,
            None => {
                let need = |name: &str| CliError::Usage(format!("--{name} is required without --preset/--config"));
                cfg = Some(RunConfig {
                    system: a.system.clone().ok_or_else(|| need("system"))?,
                    law,
                    x0: parse_vector("x0", a.x0.as_deref().ok_or_else(|| need("x0"))?)?.as_slice().to_vec(),
                    sim: Default::default(),
                    epsilon: a.epsilon.ok_or_else(|| need("epsilon"))?,
                    center: None,
                    tail_action: None,
                    seed: 0,
                });
            }
        }
    }
    let mut cfg = cfg.ok_or_else(|| CliError::Usage("give --preset, --config, or --law with --system".into()))?;
    if let Some(s) = &a.system {
        cfg.system = s.clone();
    }
    if let Some(x) = &a.x0 {
        cfg.x0 = parse_vector("x0", x)?.as_slice().to_vec();
    }
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    if let Some(c) = &a.center {
        cfg.center = Some(parse_vector("center", c)?.as_slice().to_vec());
    }
    if let Some(u) = &a.tail_action {
        cfg.tail_action = Some(parse_vector("tail-action", u)?.as_slice().to_vec());
    }
    cfg.sim.dt = a.dt.unwrap_or(cfg.sim.dt);
    cfg.sim.t_final = a.t_final.unwrap_or(cfg.sim.t_final);
    cfg.sim.hold_steps = a.hold_steps.unwrap_or(cfg.sim.hold_steps);
    cfg.sim.record_stride = a.record_stride.unwrap_or(cfg.sim.record_stride);
    cfg.sim.validate()?;
    if !(cfg.epsilon > 0.0) {
        return Err(CliError::Usage(format!("epsilon must be positive, got {}", cfg.epsilon)));
    }
    Ok(cfg)
}

/// Resolved pieces of a run.
struct Prepared {
    plant: Plant,
    storage: Option<Arc<dyn StorageFunction>>,
    center: Vector,
    tail: Vector,
}

fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let plant = SystemRegistry::with_builtins().build(&cfg.system)?;
    let n = plant.system.state_dim();
    let dim_check = |name: &str, v: &[f64], want: usize| {
        if v.len() == want {
            Ok(())
        } else {
            Err(CliError::Usage(format!("{name} has {} entries, expected {want}", v.len())))
        }
    };
    dim_check("x0", &cfg.x0, n)?;
    let center = match &cfg.center {
        Some(c) => {
            dim_check("center", c, n)?;
            Vector::from_column_slice(c)
        }
        None => Vector::zeros(n),
    };
    let tail = match (&cfg.tail_action, cfg.law.u_star()) {
        (Some(u), _) => Vector::from_column_slice(u),
        (None, Some(us)) => us.clone(),
        (None, None) => cfg.law.set().base().clone(),
    };
    let storage = if cfg.law.variant().is_incremental() {
        plant.storage_about(&center).transpose()?
    } else {
        plant.storage.clone()
    };
    Ok(Prepared { plant, storage, center, tail })
}

pub fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let cfg = load(&a.run)?;
    let p = prepare(&cfg)?;
    let mut law = cfg.law.clone();
    let x0 = Vector::from_column_slice(&cfg.x0);
    let traj = simulator::simulate(p.plant.system.as_ref(), &mut law, &x0, &cfg.sim, p.storage.as_deref())?;
    let file = fs::File::create(&a.csv).map_err(CliError::io(&a.csv))?;
    traj.write_csv(BufWriter::new(file)).map_err(CliError::io(&a.csv))?;

    let report = convergence_metrics(&traj, cfg.epsilon, &p.center, Some(&p.tail));
    let text = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &a.report {
        fs::write(path, format!("{text}\n")).map_err(CliError::io(path))?;
    }
    println!("{text}");
    match report.entry_time {
        Some(_) => Ok(()),
        None => Err(CliError::CheckFailed(format!("trajectory did not settle in the {}-ball", cfg.epsilon))),
    }
}

#[derive(Serialize)]
struct SweepEntry {
    x0: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ConvergenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn sweep(a: SweepArgs) -> Result<(), CliError> {
    let cfg = load(&a.run)?;
    let p = prepare(&cfg)?;
    let seed = a.seed.unwrap_or(cfg.seed);
    let n = p.plant.system.state_dim();
    let ics: Vec<Vector> =
        sample_initial_conditions(a.count, n, a.half_width, seed).into_iter().map(|x| x + &p.center).collect();
    let results = batch_sweep(
        p.plant.system.as_ref(),
        &cfg.law,
        &ics,
        &cfg.sim,
        p.storage.as_deref(),
        cfg.epsilon,
        &p.center,
        Some(&p.tail),
    );
    let mut non_finite = None;
    let mut all_entered = true;
    let entries: Vec<SweepEntry> = ics
        .iter()
        .zip(results)
        .map(|(x0, r)| {
            let x0 = x0.as_slice().to_vec();
            match r {
                Ok(report) => {
                    all_entered &= report.entry_time.is_some();
                    SweepEntry { x0, report: Some(report), error: None }
                }
                Err(e) => {
                    if let SimError::NonFiniteState { time } = e {
                        non_finite.get_or_insert(time);
                    }
                    all_entered = false;
                    SweepEntry { x0, report: None, error: Some(e.to_string()) }
                }
            }
        })
        .collect();
    println!("{}", serde_json::to_string_pretty(&entries)?);
    match (non_finite, all_entered) {
        (Some(t), _) => Err(CliError::NonFinite(t)),
        (None, false) => Err(CliError::CheckFailed("some runs did not settle".into())),
        (None, true) => Ok(()),
    }
}
