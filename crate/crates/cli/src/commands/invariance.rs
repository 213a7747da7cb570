use rayon::prelude::*;
use rectdisc_core::invariance::{
    assemble_invariance_report, check_distance_invariance, default_radii_grid, exact_invariance_defect,
    exact_invariance_defect_rational, invariance_mode_and_rhs, invariance_trial, DistanceInvarianceCheck, ExactDefect,
    InvarianceReport, OmegaSampler,
};
use rectdisc_core::numeric::stream_rng;
use rectdisc_core::partition::EqualMeasurePartition;
use rectdisc_core::spaces::{FiniteSpace, MetricMeasureSpace, PointSet, RadialMeasure, Rectifiable};
use serde_json::json;

use super::{finite_partition, rect_partition, require_n, xi_spec, DEFAULT_INNER_SAMPLES};
use crate::error::{CliError, CliResult};
use crate::output::{num, Output, RunConfig, Table};
use crate::registry::parse_xi;
use crate::with_space;

/// Configurations evaluated in exact mode when `--trials` is absent.
pub const DEFAULT_EXACT_CONFIGURATIONS: usize = 20;
/// Trials of the probabilistic check when `--trials` is absent.
pub const DEFAULT_TRIALS: usize = 1000;

const HEADERS: [&str; 19] = [
    "space", "xi", "n", "mode", "trial", "trials", "lambda", "lambda_error", "rho_star", "rho_star_error", "lhs",
    "lhs_error", "rhs", "rhs_error", "defect", "combined_error", "within_ci", "max_configuration_defect",
    "defect_exact",
];

pub fn run(cfg: &RunConfig) -> CliResult<Output> {
    let space = super::space(cfg)?;
    let n = require_n(cfg)?;
    with_space!(&space, s => rect(cfg, s, n), f => finite(cfg, f, n))
}

fn invariance_check<S: MetricMeasureSpace>(cfg: &RunConfig, space: &S) -> DistanceInvarianceCheck {
    check_distance_invariance(space, &default_radii_grid(space, 16), 32, cfg.seed)
}

/// Exact mode when requested, or automatically when the space passes the
/// invariance check and has deterministic kernels.
fn use_exact<S: MetricMeasureSpace>(
    cfg: &RunConfig,
    space: &S,
    check: &DistanceInvarianceCheck,
    backend: bool,
) -> CliResult<bool> {
    if cfg.params.exact {
        if !check.invariant {
            return Err(CliError::Precondition(format!(
                "{} is not distance-invariant (ball volumes vary by {:.3e}); the exact identity does not apply",
                space.id(),
                check.max_deviation
            )));
        }
        if !backend {
            return Err(CliError::Precondition(format!(
                "{} has no deterministic kernels for an exact evaluation",
                space.id()
            )));
        }
    }
    Ok(cfg.params.exact || (check.invariant && backend))
}

fn rect<S>(cfg: &RunConfig, space: &S, n: usize) -> CliResult<Output>
where
    S: Rectifiable + Clone + Sync,
    S::Point: Send,
{
    let xi = parse_xi(xi_spec(cfg), space)?;
    let check = invariance_check(cfg, space);
    let part = rect_partition(cfg, space, n)?;
    if use_exact(cfg, space, &check, space.closed_form_kernels().is_some())? {
        let sampler = OmegaSampler::new(&part, cfg.seed);
        let configs = cfg.params.trials.unwrap_or(DEFAULT_EXACT_CONFIGURATIONS);
        let defects = (0..configs as u64)
            .into_par_iter()
            .map(|t| {
                let pts = sampler.draw(&mut sampler.trial_rng(t))?;
                Ok((exact_invariance_defect(space, &pts, &xi)?, None))
            })
            .collect::<CliResult<Vec<_>>>()?;
        exact_output(&xi, n, "cell-sampler", &check, defects)
    } else {
        probabilistic(cfg, &part, &xi, &check)
    }
}

fn finite(cfg: &RunConfig, space: &FiniteSpace, n: usize) -> CliResult<Output> {
    let xi = parse_xi(xi_spec(cfg), space)?;
    let check = invariance_check(cfg, space);
    let part = finite_partition(space, n);
    if use_exact(cfg, space, &check, true)? {
        let configs = cfg.params.trials.unwrap_or(DEFAULT_EXACT_CONFIGURATIONS);
        // Cell draws when N divides |X|, otherwise iid multisets.
        let source = if part.is_ok() { "cell-sampler" } else { "iid" };
        let sampler = part.as_ref().ok().map(|p| OmegaSampler::new(p, cfg.seed));
        let defects = (0..configs as u64)
            .into_par_iter()
            .map(|t| {
                let pts = match &sampler {
                    Some(s) => s.draw(&mut s.trial_rng(t))?,
                    None => PointSet::iid(space, n, &mut stream_rng(cfg.seed, t))?.into_points(),
                };
                let exact = exact_invariance_defect_rational(space, &pts, &xi)?;
                Ok((exact_invariance_defect(space, &pts, &xi)?, Some(exact.defect.to_string())))
            })
            .collect::<CliResult<Vec<_>>>()?;
        exact_output(&xi, n, source, &check, defects)
    } else {
        probabilistic(cfg, &part?, &xi, &check)
    }
}

fn exact_output(
    xi: &RadialMeasure,
    n: usize,
    source: &str,
    check: &DistanceInvarianceCheck,
    defects: Vec<(ExactDefect, Option<String>)>,
) -> CliResult<Output> {
    let mut table = Table::new(HEADERS);
    let mut configs = Vec::with_capacity(defects.len());
    let mut max_abs: f64 = 0.0;
    let mut all_zero = true;
    for (t, (d, exact)) in defects.iter().enumerate() {
        max_abs = max_abs.max(d.defect.abs());
        all_zero &= exact.as_deref().is_none_or(|s| s == "0");
        table.push(vec![
            d.space.clone(),
            d.xi.clone(),
            n.to_string(),
            "exact".into(),
            t.to_string(),
            defects.len().to_string(),
            num(d.lambda.value),
            num(d.lambda.error),
            num(d.rho_star_sum.value),
            num(d.rho_star_sum.error),
            num(d.lhs),
            String::new(),
            num(d.rhs),
            num(n as f64 * n as f64 * d.mean_rho_star.error),
            num(d.defect),
            String::new(),
            String::new(),
            String::new(),
            exact.clone().unwrap_or_default(),
        ]);
        let mut v = serde_json::to_value(d)?;
        v["trial"] = json!(t);
        v["defect_exact"] = json!(exact);
        configs.push(v);
    }
    let rational = defects.iter().any(|(_, e)| e.is_some());
    let result = json!({
        "check": "exact",
        "n": n,
        "xi": xi.label(),
        "configurations": defects.len(),
        "source": source,
        "distance_invariance": check,
        "max_abs_defect": max_abs,
        "all_defects_zero_exactly": rational.then_some(all_zero),
        "defects": configs,
    });
    Ok(Output { result, table })
}

fn probabilistic<P>(cfg: &RunConfig, part: &P, xi: &RadialMeasure, check: &DistanceInvarianceCheck) -> CliResult<Output>
where
    P: EqualMeasurePartition + Sync,
    <P::Space as MetricMeasureSpace>::Point: Send,
{
    let trials = cfg.params.trials.unwrap_or(DEFAULT_TRIALS);
    if trials < 2 {
        return Err(CliError::config(format!(
            "--trials must be at least 2 for a confidence interval, got {trials}"
        )));
    }
    let inner = cfg.params.inner_samples.unwrap_or(DEFAULT_INNER_SAMPLES);
    let space = part.space();
    let sampler = OmegaSampler::new(part, cfg.seed);
    let (mode, rhs) = invariance_mode_and_rhs(space, xi, inner, cfg.seed)?;
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|t| invariance_trial(&sampler, xi, t, inner))
        .collect::<Result<Vec<_>, _>>()?;
    let report: InvarianceReport = assemble_invariance_report(space, part.len(), xi, &values, cfg.seed, mode, rhs)?;
    let mut table = Table::new(HEADERS);
    table.push(vec![
        report.space.clone(),
        report.xi.clone(),
        report.n.to_string(),
        "probabilistic".into(),
        String::new(),
        report.trials.to_string(),
        num(report.mean_lambda.value),
        num(report.mean_lambda.error),
        num(report.mean_rho_star.value),
        num(report.mean_rho_star.error),
        num(report.lhs.value),
        num(report.lhs.error),
        num(report.rhs.value),
        num(report.rhs.error),
        num(report.defect),
        num(report.combined_error),
        report.within_ci.to_string(),
        report.max_configuration_defect.map(num).unwrap_or_default(),
        String::new(),
    ]);
    let mut result = serde_json::to_value(&report)?;
    result["check"] = json!("probabilistic");
    result["distance_invariance"] = json!(check);
    Ok(Output { result, table })
}
