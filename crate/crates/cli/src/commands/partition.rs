use rectdisc_core::partition::{DiameterKind, EqualMeasurePartition, FinitePartition, SpacePartition};
use rectdisc_core::spaces::{FiniteSpace, MetricMeasureSpace, Rectifiable};
use serde_json::json;

use super::{finite_partition, rect_partition, require_n};
use crate::error::CliResult;
use crate::output::{joined, num, opt_bool, opt_num, Output, RunConfig, Table};
use crate::with_space;

const HEADERS: [&str; 14] = [
    "space", "n", "cell", "index", "lo", "hi", "measure", "diameter", "centre", "avg_diameter", "max_diameter",
    "diameter_kind", "bound", "bound_holds",
];

pub fn run(cfg: &RunConfig) -> CliResult<Output> {
    let space = super::space(cfg)?;
    let n = require_n(cfg)?;
    with_space!(&space, s => rect(cfg, s, n), f => finite(f, n))
}

fn rect<S: Rectifiable + Clone>(cfg: &RunConfig, space: &S, n: usize) -> CliResult<Output> {
    let part: SpacePartition<S> = rect_partition(cfg, space, n)?;
    let boxes = part.boxes();
    let checks = boxes.checks();
    let avg = part.avg_diameter();
    let lip_bound = part.lipschitz_diameter_bound();
    let theorem_bound = part.theorem_diameter_bound();
    // ‖R_N‖₁ ≤ Lip·‖P_N‖₁ ≤ d 2^{d−1} Lip N^{−1/d}.
    let space_bound_holds = theorem_bound.map(|b| avg <= b * (1.0 + 1e-12));
    let kind = serde_json::to_value(part.diameter_kind())?;
    let mut warnings = Vec::new();
    if part.diameter_kind() == DiameterKind::LowerEstimate {
        warnings.push("cell diameters are sampled lower estimates; no rigorous bound applies");
    }
    let levels: Vec<Vec<&[f64]>> =
        (0..boxes.dim()).map(|q| boxes.splits(q).iter().map(|s| s.breakpoints()).collect()).collect();
    let mut cells = Vec::with_capacity(n);
    let mut table = Table::new(HEADERS);
    for (i, (b, diam)) in boxes.boxes().iter().zip(part.cell_diameters()).enumerate() {
        let centre = space.coords(&part.cell_center(i));
        table.push(vec![
            space.id(),
            n.to_string(),
            i.to_string(),
            b.index.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"),
            joined(&b.lo),
            joined(&b.hi),
            num(b.measure),
            num(*diam),
            joined(&centre),
            num(avg),
            num(part.max_diameter()),
            kind.as_str().unwrap_or_default().to_string(),
            opt_num(theorem_bound),
            opt_bool(space_bound_holds),
        ]);
        cells.push(json!({
            "index": b.index, "lo": b.lo, "hi": b.hi, "measure": b.measure,
            "box_diameter": b.diameter, "diameter": diam, "centre": centre,
        }));
    }
    let result = json!({
        "space": space.id(),
        "d": boxes.dim(),
        "n": n,
        "k": boxes.k(),
        "measure": boxes.measure().label(),
        "strategy": boxes.strategy(),
        "diameter_mode": part.mode(),
        "diameter_kind": kind,
        "avg_diameter": avg,
        "max_diameter": part.max_diameter(),
        "box_checks": checks,
        "lipschitz": space.chart().lipschitz.declared(),
        "lipschitz_diameter_bound": lip_bound,
        "theorem_diameter_bound": theorem_bound,
        "space_bound_holds": space_bound_holds,
        "warnings": warnings,
        "levels": levels,
        "cells": cells,
    });
    Ok(Output { result, table })
}

fn finite(space: &FiniteSpace, n: usize) -> CliResult<Output> {
    let part: FinitePartition = finite_partition(space, n)?;
    let mut cells = Vec::with_capacity(n);
    let mut table = Table::new(HEADERS);
    for (i, (members, diam)) in part.cells().iter().zip(part.cell_diameters()).enumerate() {
        let measure: f64 = members.iter().map(|&x| space.weight_f64(x)).sum();
        let centre = part.cell_center(i);
        table.push(vec![
            space.id(),
            n.to_string(),
            i.to_string(),
            members.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"),
            String::new(),
            String::new(),
            num(measure),
            num(*diam),
            joined(&space.coords(&centre)),
            num(part.avg_diameter()),
            num(part.max_diameter()),
            "exact".into(),
            String::new(),
            String::new(),
        ]);
        cells.push(json!({ "points": members, "measure": measure, "diameter": diam, "centre": centre }));
    }
    let result = json!({
        "space": space.id(),
        "n": n,
        "diameter_kind": part.diameter_kind(),
        "avg_diameter": part.avg_diameter(),
        "max_diameter": part.max_diameter(),
        "cells": cells,
    });
    Ok(Output { result, table })
}
