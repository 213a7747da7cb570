use std::path::Path;

use rayon::prelude::*;
use rectdisc_core::discrepancy::{discrepancy_report, DiscrepancyReport};
use rectdisc_core::spaces::{MetricMeasureSpace, Quadrature};
use rectdisc_core::Estimate;
use serde_json::{json, Value};

use super::points::generate;
use super::{finite_partition, rect_partition, xi_spec};
use crate::args::QuadArg;
use crate::error::{CliError, CliResult};
use crate::output::{method_tag, num, Output, RunConfig, Table};
use crate::registry::parse_xi;
use crate::with_space;

pub fn quadrature(cfg: &RunConfig) -> Quadrature {
    let samples = cfg.params.samples.unwrap_or(Quadrature::DEFAULT_SAMPLES);
    let seed = cfg.seed;
    match cfg.params.quadrature.unwrap_or(QuadArg::Auto) {
        QuadArg::Auto => Quadrature::Auto { samples, seed },
        QuadArg::Exact => Quadrature::Exact,
        QuadArg::ClosedForm => Quadrature::ClosedForm,
        QuadArg::MonteCarlo => Quadrature::MonteCarlo { samples, seed },
    }
}

/// Point coordinates from a `points` JSON record, a bare JSON array, or a
/// CSV file with `x0, x1, …` columns.
pub fn read_coords(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let bad = |e: String| CliError::config(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|e| e == "csv") {
        let mut r = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
        let mut cols: Vec<(usize, usize)> = r
            .headers()
            .map_err(|e| bad(e.to_string()))?
            .iter()
            .enumerate()
            .filter_map(|(i, h)| h.strip_prefix('x').and_then(|k| k.parse().ok()).map(|k: usize| (k, i)))
            .collect();
        if cols.is_empty() {
            return Err(bad("no x0, x1, … columns".into()));
        }
        cols.sort_unstable();
        let mut out = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let row = cols
                .iter()
                .map(|&(_, i)| rec[i].parse::<f64>().map_err(|e| bad(format!("{:?}: {e}", &rec[i]))))
                .collect::<CliResult<Vec<f64>>>()?;
            out.push(row);
        }
        Ok(out)
    } else {
        let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let arr = v.pointer("/result/points").or_else(|| v.get("points")).unwrap_or(&v);
        serde_json::from_value(arr.clone()).map_err(|e| bad(e.to_string()))
    }
}

fn from_coords<S: MetricMeasureSpace>(space: &S, coords: &[Vec<f64>]) -> CliResult<Vec<S::Point>> {
    if coords.is_empty() {
        return Err(CliError::config("the point file is empty"));
    }
    Ok(coords.iter().map(|c| space.point_from_coords(c)).collect::<Result<_, _>>()?)
}

fn ns(cfg: &RunConfig) -> CliResult<Vec<usize>> {
    let ns = match (&cfg.params.n_list, cfg.params.n) {
        (Some(list), _) => list.clone(),
        (None, Some(n)) => vec![n],
        (None, None) => return Err(CliError::config("--n, --n-list or --points is required")),
    };
    if ns.is_empty() || ns.contains(&0) {
        return Err(CliError::config("every N must be at least 1"));
    }
    Ok(ns)
}

pub fn run(cfg: &RunConfig) -> CliResult<Output> {
    let space = super::space(cfg)?;
    let coords = cfg.params.points.as_deref().map(read_coords).transpose()?;
    let quad = quadrature(cfg);
    let reports: Vec<DiscrepancyReport> = with_space!(&space,
        s => {
            let xi = parse_xi(xi_spec(cfg), s)?;
            match &coords {
                Some(c) => vec![discrepancy_report(s, &from_coords(s, c)?, &xi, quad)?],
                None => ns(cfg)?
                    .into_par_iter()
                    .map(|n| {
                        let pts = generate(cfg, s, n, || rect_partition(cfg, s, n))?;
                        Ok(discrepancy_report(s, &pts, &xi, quad)?)
                    })
                    .collect::<CliResult<_>>()?,
            }
        },
        f => {
            let xi = parse_xi(xi_spec(cfg), f)?;
            match &coords {
                Some(c) => vec![discrepancy_report(f, &from_coords(f, c)?, &xi, quad)?],
                None => ns(cfg)?
                    .into_par_iter()
                    .map(|n| {
                        let pts = generate(cfg, f, n, || finite_partition(f, n))?;
                        Ok(discrepancy_report(f, &pts, &xi, quad)?)
                    })
                    .collect::<CliResult<_>>()?,
            }
        });
    let mut headers = vec!["space".to_string(), "xi".into(), "n".into()];
    for q in ["rho_sum", "lambda_xi", "rho_star_xi_sum", "mean_rho", "mean_rho_star_xi"] {
        headers.extend([q.to_string(), format!("{q}_error"), format!("{q}_method")]);
    }
    headers.push("invariance_defect".into());
    let mut table = Table::new(headers);
    let mut records = Vec::new();
    for r in &reports {
        let mut row = vec![r.space.clone(), r.xi.clone(), r.n.to_string()];
        for e in [&r.rho_sum, &r.lambda_xi, &r.rho_star_xi_sum, &r.mean_rho, &r.mean_rho_star_xi] {
            row.extend(estimate_cells(e));
        }
        row.push(num(r.invariance_defect()));
        table.push(row);
        let mut v = serde_json::to_value(r)?;
        v["invariance_defect"] = json!(r.invariance_defect());
        records.push(v);
    }
    Ok(Output { result: json!({ "reports": records }), table })
}

pub fn estimate_cells(e: &Estimate) -> [String; 3] {
    [num(e.value), num(e.error), method_tag(&e.method)]
}
