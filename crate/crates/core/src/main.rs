#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;

use clap::Parser;

mod cli;

use cli::{Cli, Outcome, UsageError};

/// Library errors caused by the values the user passed rather than by the computation.
fn is_input_error(e: &static_vacua::Error) -> bool {
    use static_vacua::Error::*;
    matches!(
        e,
        OutsideDomain { .. }
            | NonPositiveProfile { .. }
            | InvalidParameter(_)
            | UnsupportedKind { .. }
            | KappaOutOfRange { .. }
            | SubDeSitterSurfaceGravity(_)
            | LevelOutOfRange { .. }
            | EmptyBranch(_)
            | UnknownHorizon(_)
            | StepUnderflow(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli::run(&cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Breach) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            let input = err.chain().any(|c| {
                c.downcast_ref::<UsageError>().is_some()
                    || c.downcast_ref::<static_vacua::Error>().is_some_and(is_input_error)
            });
            ExitCode::from(if input { 2 } else { 1 })
        }
    }
}
