pub mod bounds_sweep;
pub mod discrepancy;
pub mod invariance;
pub mod partition;
pub mod points;
pub mod space;

use rectdisc_core::partition::{
    build_box_partition, pushforward_partition, DiameterMode, FinitePartition, OccupancyStrategy, SpacePartition,
};
use rectdisc_core::spaces::{FiniteSpace, Quadrature, Rectifiable};
use rectdisc_core::Error as CoreError;

use crate::args::{DiameterArg, Params, PointMethod, QuadArg, Strategy};
use crate::error::{CliError, CliResult};
use crate::output::RunConfig;
use crate::registry::{parse_space, AnySpace};

pub const DEFAULT_INNER_SAMPLES: usize = 64;

/// Fills the defaults a command relies on, so the config echo is complete.
pub fn apply_defaults(command: &str, p: &mut Params) {
    let uses_xi = matches!(command, "discrepancy" | "invariance" | "bounds-sweep");
    if command != "space-list" {
        p.strategy.get_or_insert(Strategy::Lexicographic);
        p.diameter.get_or_insert(DiameterArg::Auto);
    }
    if uses_xi {
        p.xi.get_or_insert_with(|| "uniform".into());
    }
    match command {
        "points" | "discrepancy" if p.points.is_none() => {
            p.method.get_or_insert(PointMethod::Omega);
            p.trial.get_or_insert(0);
        }
        _ => {}
    }
    if command == "discrepancy" {
        p.quadrature.get_or_insert(QuadArg::Auto);
        p.samples.get_or_insert(Quadrature::DEFAULT_SAMPLES);
    }
    if matches!(command, "invariance" | "bounds-sweep") {
        p.inner_samples.get_or_insert(DEFAULT_INNER_SAMPLES);
    }
    if command == "bounds-sweep" {
        p.trials.get_or_insert(200);
    }
}

pub fn space(cfg: &RunConfig) -> CliResult<AnySpace> {
    let name = cfg.params.space.as_deref().ok_or_else(|| CliError::config("--space is required"))?;
    parse_space(name, cfg.params.density.as_deref())
}

pub fn require_n(cfg: &RunConfig) -> CliResult<usize> {
    match cfg.params.n {
        Some(0) => Err(CliError::config("--n must be at least 1")),
        Some(n) => Ok(n),
        None => Err(CliError::config("--n is required")),
    }
}

pub fn xi_spec(cfg: &RunConfig) -> &str {
    cfg.params.xi.as_deref().unwrap_or("uniform")
}

fn strategy(cfg: &RunConfig) -> OccupancyStrategy {
    match cfg.params.strategy.unwrap_or(Strategy::Lexicographic) {
        Strategy::Lexicographic => OccupancyStrategy::Lexicographic,
        Strategy::Balanced => OccupancyStrategy::Balanced,
    }
}

/// The inductive box partition pushed through the chart of `space`.
pub fn rect_partition<S: Rectifiable + Clone>(cfg: &RunConfig, space: &S, n: usize) -> CliResult<SpacePartition<S>> {
    let boxes = build_box_partition(&space.chart().base_measure, n, strategy(cfg))?;
    let measured = DiameterMode::Measured {
        samples: cfg.params.diameter_samples.unwrap_or(DiameterMode::DEFAULT_SAMPLES),
        seed: cfg.seed,
    };
    let part = match cfg.params.diameter.unwrap_or(DiameterArg::Auto) {
        DiameterArg::Exact => pushforward_partition(space, boxes, DiameterMode::Exact),
        DiameterArg::Lipschitz => pushforward_partition(space, boxes, DiameterMode::LipschitzBound),
        DiameterArg::Measured => pushforward_partition(space, boxes, measured),
        DiameterArg::Auto => match pushforward_partition(space, boxes.clone(), DiameterMode::Exact) {
            Err(CoreError::Unsupported(_)) => match pushforward_partition(space, boxes.clone(), DiameterMode::LipschitzBound) {
                Err(CoreError::Unsupported(_)) => pushforward_partition(space, boxes, measured),
                other => other,
            },
            other => other,
        },
    };
    Ok(part?)
}

/// Consecutive blocks of `|X|/N` points; needs `N` to divide `|X|` on a
/// uniformly weighted space.
pub fn finite_partition(space: &FiniteSpace, n: usize) -> CliResult<FinitePartition> {
    let m = space.len();
    if !m.is_multiple_of(n) {
        return Err(CliError::config(format!(
            "{} points admit an equal-measure partition into N blocks only when N divides {m}; got N = {n}",
            m
        )));
    }
    let size = m / n;
    let cells = (0..n).map(|i| (i * size..(i + 1) * size).collect()).collect();
    Ok(FinitePartition::new(space, cells)?)
}
