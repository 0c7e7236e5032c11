use std::path::PathBuf;

use nnc_core::action_sets::ActionSetError;
use nnc_core::controller::ControllerError;
use nnc_core::simulator::SimError;
use nnc_core::systems::SystemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("state left the finite range at t = {0}")]
    NonFinite(f64),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::CheckFailed(_) => 3,
            CliError::NonFinite(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(ActionSetError, ControllerError, SystemError, serde_json::Error);

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::NonFiniteState { time } => CliError::NonFinite(time),
            other => CliError::Usage(other.to_string()),
        }
    }
}
