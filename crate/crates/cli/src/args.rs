//! Command-line flags and the TOML config file they override.

use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "rectdisc", version, about = "Equal-measure partitions, distance sums and L2 ball discrepancies")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalArgs {
    /// Root seed of every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for trials and sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file with the same keys as the long flags; flags win.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Registered spaces.
    Space {
        #[command(subcommand)]
        action: SpaceAction,
    },
    /// Equal-measure partition of a space into N cells.
    Partition(Params),
    /// A point set: one draw from the cell product sampler, iid, or cell centres.
    Points(Params),
    /// Distance sum, L2 discrepancy and the invariance terms of a point set.
    Discrepancy(Params),
    /// Exact or probabilistic invariance check.
    Invariance(Params),
    /// Bound reports over a list of N.
    BoundsSweep(Params),
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum SpaceAction {
    List,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Space { .. } => "space-list",
            Command::Partition(_) => "partition",
            Command::Points(_) => "points",
            Command::Discrepancy(_) => "discrepancy",
            Command::Invariance(_) => "invariance",
            Command::BoundsSweep(_) => "bounds-sweep",
        }
    }

    pub fn params(&self) -> Option<&Params> {
        match self {
            Command::Space { .. } => None,
            Command::Partition(p)
            | Command::Points(p)
            | Command::Discrepancy(p)
            | Command::Invariance(p)
            | Command::BoundsSweep(p) => Some(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Lexicographic,
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiameterArg {
    /// Closed-form image diameters when available, else the Lipschitz bound.
    Auto,
    Exact,
    Lipschitz,
    Measured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointMethod {
    /// One point per cell, drawn from the renormalized cell measure.
    Omega,
    Iid,
    Centres,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadArg {
    Auto,
    Exact,
    ClosedForm,
    MonteCarlo,
}

/// Parameters shared by the subcommands; each uses the subset it needs.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// circle, torus1..3, cube1..3, sphere or hamming<n>.
    #[arg(long)]
    pub space: Option<String>,
    /// Cube density: uniform, product-4z1z2 (cube2) or power:<p>.
    #[arg(long)]
    pub density: Option<String>,
    /// Number of points or cells.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated list of N for sweeps and batch runs.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// uniform, uniform:<a>:<b>, uniform-atomic or atom:<r>.
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long, value_enum)]
    pub strategy: Option<Strategy>,
    #[arg(long, value_enum)]
    pub diameter: Option<DiameterArg>,
    /// Samples per cell for measured diameters.
    #[arg(long)]
    pub diameter_samples: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Inner Monte Carlo samples per trial on spaces without closed forms.
    #[arg(long)]
    pub inner_samples: Option<usize>,
    /// Require the exact invariance identity (exit 3 if it does not apply).
    #[arg(long, action = ArgAction::SetTrue)]
    pub exact: bool,
    #[arg(long, value_enum)]
    pub method: Option<PointMethod>,
    /// Which draw of the cell sampler to emit.
    #[arg(long)]
    pub trial: Option<u64>,
    /// Point file (JSON from `points`, or CSV with x0, x1, … columns).
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub quadrature: Option<QuadArg>,
    /// Monte Carlo samples for auto and monte-carlo quadrature.
    #[arg(long)]
    pub samples: Option<usize>,
}

macro_rules! prefer_flags {
    ($flags:ident, $file:ident; $($field:ident),*) => {
        Params {
            $($field: $flags.$field.or($file.$field),)*
            exact: $flags.exact || $file.exact,
        }
    };
}

impl Params {
    pub fn merged(self, file: Params) -> Params {
        let flags = self;
        prefer_flags!(flags, file; space, density, n, n_list, xi, strategy, diameter, diameter_samples,
            trials, inner_samples, method, trial, points, quadrature, samples)
    }
}

impl GlobalArgs {
    pub fn merged(self, file: GlobalArgs) -> GlobalArgs {
        GlobalArgs {
            seed: self.seed.or(file.seed),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            threads: self.threads.or(file.threads),
            config: self.config,
        }
    }
}

const GLOBAL_KEYS: [&str; 4] = ["seed", "out", "format", "threads"];

/// Reads a config file into its global and per-command halves.
pub fn load_config(path: &Path) -> CliResult<(GlobalArgs, Params)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let table: toml::Table = text.parse().map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let (global, params): (toml::Table, toml::Table) =
        table.into_iter().partition(|(k, _)| GLOBAL_KEYS.contains(&k.as_str()));
    let bad = |e: toml::de::Error| CliError::config(format!("{}: {e}", path.display()));
    Ok((global.try_into().map_err(bad)?, params.try_into().map_err(bad)?))
}
