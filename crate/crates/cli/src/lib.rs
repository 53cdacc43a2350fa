//! Library half of the `beg` binary: argument types, subcommand drivers and
//! report serialization.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

use std::path::PathBuf;

use args::Cli;
use beg_core::Budget;
use commands::Context;
use error::CliError;
use report::{emit_report, Sink};

/// Parses nothing; runs an already parsed command line end to end.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let budget = match &cli.common.budget {
        Some(spec) => Budget::default().with_overrides(spec)?,
        None => Budget::default(),
    };
    let ctx = Context {
        budget,
        seed: cli.common.seed,
        quiet: cli.common.quiet,
    };
    let mut outcome = commands::run(&cli.command, &ctx)?;
    outcome
        .report
        .meta
        .parameters
        .insert("budget".into(), serde_json::Value::String(ctx.budget.to_string()));
    let sink = sink_for(cli);
    emit_report(&outcome.report, cli.common.format, &sink, cli.common.allow_empty)?;
    if outcome.violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violations(outcome.violations))
    }
}

fn sink_for(cli: &Cli) -> Sink {
    match (&cli.common.output, &cli.common.output_dir) {
        (Some(path), _) => Sink::File(path.clone()),
        (None, Some(dir)) => {
            let name = format!("{}.{}", cli.command.name(), cli.common.format.extension());
            Sink::File(PathBuf::from(dir).join(name))
        }
        (None, None) => Sink::Stdout,
    }
}
