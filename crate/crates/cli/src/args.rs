use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nnc_core::action_sets::SimplexVariant;
use nnc_core::{Matrix, Vector};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "nnc", version, about = "Nearest-neighbor quantized feedback for passive systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a minimal action set for a target covering radius
    Design(DesignArgs),
    /// Validate an action set and evaluate the design conditions
    Check(CheckArgs),
    /// Simulate one closed-loop run; CSV trajectory plus JSON report
    Simulate(SimulateArgs),
    /// Simulate from random initial conditions
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Centered,
    Noncentered,
}

impl From<VariantArg> for SimplexVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Centered => SimplexVariant::Centered,
            VariantArg::Noncentered => SimplexVariant::NonCentered,
        }
    }
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Input dimension
    #[arg(long)]
    pub m: usize,
    /// Target covering radius
    #[arg(long, conflicts_with_all = ["epsilon", "gamma"])]
    pub delta: Option<f64>,
    /// Target accuracy; δ is the largest value with γ(δ/k1) ≤ ε
    #[arg(long, requires = "gamma")]
    pub epsilon: Option<f64>,
    /// Built-in gain name (sigma_ex, sigma_ex_inc:<x3*>, linear:<c>, identity)
    #[arg(long, requires = "epsilon")]
    pub gamma: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub k1: f64,
    #[arg(long, value_enum, default_value = "centered")]
    pub variant: VariantArg,
    /// `identity` or a JSON file holding an m×m array of rows
    #[arg(long, default_value = "identity")]
    pub rotation: String,
    /// Comma-separated setpoint action, default the origin
    #[arg(long, allow_hyphen_values = true)]
    pub u_star: Option<String>,
    /// Also estimate μ_min,1
    #[arg(long)]
    pub mu: bool,
    /// Also write the bare ActionSet JSON here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// ActionSet JSON file
    #[arg(long)]
    pub set: PathBuf,
    /// Estimate μ_min,1
    #[arg(long)]
    pub mu: bool,
    /// Sector constants `k1,k2,k3`
    #[arg(long)]
    pub sector: Option<String>,
    /// Sector map the constants are checked against, e.g. identity_gain:2
    #[arg(long, requires = "sector")]
    pub sector_map: Option<String>,
    #[arg(long, requires = "epsilon")]
    pub gamma: Option<String>,
    #[arg(long, requires = "gamma")]
    pub epsilon: Option<f64>,
    /// Gain condition γ(δ/k1) ≤ ε with F = k1·identity
    #[arg(long, conflicts_with = "sector")]
    pub k1: Option<f64>,
    /// Report as the incremental (shifted) design
    #[arg(long)]
    pub incremental: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Preset {
    ReproduceExample1,
    ReproduceExample2,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, conflicts_with = "config")]
    pub preset: Option<Preset>,
    /// Run configuration JSON
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Plant name: sigma_ex or linear:<json|path>
    #[arg(long)]
    pub system: Option<String>,
    /// FeedbackLaw JSON file
    #[arg(long)]
    pub law: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub hold_steps: Option<usize>,
    #[arg(long)]
    pub record_stride: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Expected terminal action, default u* for incremental laws and the base action otherwise
    #[arg(long, allow_hyphen_values = true)]
    pub tail_action: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Trajectory CSV path
    #[arg(long, default_value = "trajectory.csv")]
    pub csv: PathBuf,
    /// Also write the report JSON here
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 16)]
    pub count: usize,
    /// Initial conditions are drawn from [−w, w]^n around the center
    #[arg(long, default_value_t = 3.0)]
    pub half_width: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn parse_vector(name: &str, text: &str) -> Result<Vector, CliError> {
    let values = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("--{name} `{text}`: {e}")))?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("--{name} must be finite")));
    }
    Ok(Vector::from_vec(values))
}

pub fn parse_matrix_rows(name: &str, rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(CliError::Usage(format!("{name} must be a non-empty rectangular array")));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("x0", "1, -2,3e-1").unwrap().as_slice(), &[1.0, -2.0, 0.3]);
        assert!(parse_vector("x0", "1,,2").is_err());
        assert!(parse_vector("x0", "nan").is_err());
    }

    #[test]
    fn matrices() {
        let m = parse_matrix_rows("r", &[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m[(1, 0)], 3.0);
        assert!(parse_matrix_rows("r", &[vec![1.0], vec![3.0, 4.0]]).is_err());
        assert!(parse_matrix_rows("r", &[]).is_err());
    }
}
