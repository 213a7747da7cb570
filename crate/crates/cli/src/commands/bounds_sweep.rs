use rayon::prelude::*;
use rectdisc_core::invariance::{bound_report, probabilistic_invariance_check, BoundReport, InvarianceReport};
use rectdisc_core::partition::EqualMeasurePartition;
use rectdisc_core::spaces::{MetricMeasureSpace, RadialMeasure, Rectifiable};
use serde::Serialize;
use serde_json::json;

use super::{finite_partition, rect_partition, xi_spec, DEFAULT_INNER_SAMPLES};
use crate::error::{CliError, CliResult};
use crate::output::{num, opt_bool, opt_num, Output, RunConfig, Table};
use crate::registry::parse_xi;
use crate::with_space;

const HEADERS: [&str; 24] = [
    "space", "d", "n", "avg_diameter", "max_diameter", "diameter_kind", "rho_lower_bound", "expected_rho",
    "expected_rho_error", "rho_gap", "rho_gap_error", "best_observed_rho", "rho_bound_holds", "lambda_upper_bound",
    "expected_lambda", "expected_lambda_error", "lambda_bound_holds", "theorem11_rho_bound",
    "theorem11_lambda_bound", "defect", "ci", "within_ci", "trials", "seed",
];

#[derive(Debug, Serialize)]
struct Row {
    bounds: BoundReport,
    invariance: InvarianceReport,
    /// `N²⟨ρ⟩ − E_N ρ = N² Q_N(ρ)`.
    rho_gap: f64,
    rho_gap_error: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn row<P: EqualMeasurePartition>(
    part: &P,
    xi: &RadialMeasure,
    lipschitz: Option<f64>,
    trials: usize,
    seed: u64,
    inner: usize,
) -> CliResult<Row> {
    let bounds = bound_report(part, Some(xi), lipschitz, trials, seed, inner)?;
    let invariance = probabilistic_invariance_check(part, xi, trials, seed, inner)?;
    let n2 = (bounds.n * bounds.n) as f64;
    Ok(Row { rho_gap: n2 * bounds.q_n_rho.value, rho_gap_error: n2 * bounds.q_n_rho.error, bounds, invariance })
}

fn sweep<S, B, P>(cfg: &RunConfig, space: &S, ns: &[usize], lipschitz: Option<f64>, build: B) -> CliResult<Vec<Row>>
where
    S: MetricMeasureSpace + Sync,
    B: Fn(usize) -> CliResult<P> + Sync,
    P: EqualMeasurePartition,
{
    let xi = parse_xi(xi_spec(cfg), space)?;
    let trials = cfg.params.trials.unwrap_or(200);
    let inner = cfg.params.inner_samples.unwrap_or(DEFAULT_INNER_SAMPLES);
    ns.par_iter().map(|&n| row(&build(n)?, &xi, lipschitz, trials, cfg.seed, inner)).collect()
}

pub fn run(cfg: &RunConfig) -> CliResult<Output> {
    let ns = cfg.params.n_list.clone().unwrap_or_default();
    if ns.is_empty() {
        return Err(CliError::config("bounds-sweep needs a nonempty --n-list"));
    }
    if ns.contains(&0) {
        return Err(CliError::config("every N must be at least 1"));
    }
    let space = super::space(cfg)?;
    let rows = with_space!(&space,
        s => sweep(cfg, s, &ns, s.chart().lipschitz.declared(), |n| rect_partition(cfg, s, n))?,
        f => sweep(cfg, f, &ns, None, |n| finite_partition(f, n))?);

    let d = rows[0].bounds.d;
    let predicted = (d >= 1).then(|| 1.0 - 1.0 / d as f64);
    let gap: Vec<(f64, f64)> = rows.iter().map(|r| (r.bounds.n as f64, r.rho_gap)).collect();
    let lam: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.bounds.expected_lambda.map(|e| (r.bounds.n as f64, e.value)))
        .collect();
    let summary = json!({
        "predicted_exponent": predicted,
        "rho_gap_slope": loglog_slope(&gap),
        "lambda_slope": loglog_slope(&lam),
    });

    let mut table = Table::new(HEADERS);
    for r in &rows {
        let b = &r.bounds;
        let inv = &r.invariance;
        table.push(vec![
            b.space.clone(),
            b.d.to_string(),
            b.n.to_string(),
            num(b.avg_diameter),
            num(b.max_diameter),
            serde_json::to_value(b.diameter_kind)?.as_str().unwrap_or_default().to_string(),
            num(b.rho_lower_bound),
            num(b.expected_rho_lemma.value),
            num(b.expected_rho_lemma.error),
            num(r.rho_gap),
            num(r.rho_gap_error),
            num(b.best_observed_rho),
            b.rho_bound_holds.to_string(),
            opt_num(b.lambda_upper_bound),
            opt_num(b.expected_lambda.map(|e| e.value)),
            opt_num(b.expected_lambda.map(|e| e.error)),
            opt_bool(b.lambda_bound_holds),
            opt_num(b.theorem11_rho_bound),
            opt_num(b.theorem11_lambda_bound),
            num(inv.defect),
            num(3.0 * inv.combined_error),
            inv.within_ci.to_string(),
            b.trials.to_string(),
            b.seed.to_string(),
        ]);
    }
    Ok(Output { result: json!({ "rows": rows, "summary": summary }), table })
}

#[cfg(test)]
mod tests {
    use super::loglog_slope;

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [4.0, 16.0, 64.0].iter().map(|&n: &f64| (n, 3.0 * n.sqrt())).collect();
        assert!((loglog_slope(&pts).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(4.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(4.0, 1.0), (4.0, 2.0)]), None);
    }
}
