//! `nnc`: design, check and simulate nearest-neighbor quantized feedback.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 failed check,
//! 4 non-finite state during simulation.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod check;
mod design;
mod error;
mod presets;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Design(a) => design::run(a),
        Command::Check(a) => check::run(a),
        Command::Simulate(a) => run::simulate(a),
        Command::Sweep(a) => run::sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nnc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use error::CliError;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::CheckFailed("x".into()).exit_code(), 3);
        assert_eq!(CliError::NonFinite(1.0).exit_code(), 4);
    }
}
