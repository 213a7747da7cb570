//! Command-line front end of `rectdisc-core`.
//!
//! Every run produces one record: JSON with an envelope
//! (`artifact`, `version`, `schema`, `command`, `seed`, `config`, `result`),
//! or CSV whose rows start with `version, schema, seed, config`.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod registry;

use args::{Cli, Command, Format, GlobalArgs, Params, SpaceAction};
use error::{CliError, CliResult};
use output::{render, Output, RunConfig};

/// Merges flags over the config file and fills defaults.
pub fn resolve(cli: &Cli) -> CliResult<(RunConfig, GlobalArgs)> {
    let (file_global, file_params) = match &cli.global.config {
        Some(path) => args::load_config(path)?,
        None => (GlobalArgs::default(), Params::default()),
    };
    let global = cli.global.clone().merged(file_global);
    let command = cli.command.name();
    let mut params = cli.command.params().cloned().unwrap_or_default().merged(file_params);
    commands::apply_defaults(command, &mut params);
    if global.threads == Some(0) {
        return Err(CliError::config("--threads must be at least 1"));
    }
    let cfg = RunConfig { command, seed: global.seed.unwrap_or(0), format: global.format.unwrap_or(Format::Json), params };
    Ok((cfg, global))
}

pub fn execute(cli: &Cli, cfg: &RunConfig) -> CliResult<Output> {
    match &cli.command {
        Command::Space { action: SpaceAction::List } => commands::space::list(),
        Command::Partition(_) => commands::partition::run(cfg),
        Command::Points(_) => commands::points::run(cfg),
        Command::Discrepancy(_) => commands::discrepancy::run(cfg),
        Command::Invariance(_) => commands::invariance::run(cfg),
        Command::BoundsSweep(_) => commands::bounds_sweep::run(cfg),
    }
}

/// Runs a parsed command line and returns the rendered record.
pub fn run(cli: &Cli) -> CliResult<(String, GlobalArgs)> {
    let (cfg, global) = resolve(cli)?;
    let out = match global.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(|| execute(cli, &cfg))?,
        None => execute(cli, &cfg)?,
    };
    Ok((render(&cfg, &out)?, global))
}
