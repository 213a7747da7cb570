use rectdisc_core::spaces::{MeasureKind, MetricMeasureSpace, Rectifiable};
use serde::Serialize;

use crate::error::CliResult;
use crate::output::{num, opt_num, Output, Table};
use crate::registry::{parse_space, CONTINUOUS_NAMES, MAX_HAMMING_BITS};
use crate::with_space;

#[derive(Debug, Serialize)]
struct SpaceInfo {
    name: String,
    dim: usize,
    diameter: f64,
    measure_kind: MeasureKind,
    distance_invariant: bool,
    closed_form_kernels: bool,
    chart_lipschitz: Option<f64>,
    points: Option<usize>,
}

fn info<S: MetricMeasureSpace>(s: &S, lipschitz: Option<f64>, points: Option<usize>) -> SpaceInfo {
    SpaceInfo {
        name: s.id(),
        dim: s.dim(),
        diameter: s.diameter(),
        measure_kind: s.measure_kind(),
        distance_invariant: s.is_distance_invariant(),
        closed_form_kernels: s.closed_form_kernels().is_some(),
        chart_lipschitz: lipschitz,
        points,
    }
}

pub fn list() -> CliResult<Output> {
    let names = CONTINUOUS_NAMES
        .iter()
        .map(|s| s.to_string())
        .chain((1..=MAX_HAMMING_BITS).map(|b| format!("hamming{b}")));
    let mut spaces = Vec::new();
    for name in names {
        let space = parse_space(&name, None)?;
        spaces.push(with_space!(&space,
            s => info(s, s.chart().lipschitz.declared(), None),
            f => info(f, None, Some(f.len()))));
    }
    let mut table = Table::new([
        "name", "dim", "diameter", "measure_kind", "distance_invariant", "closed_form_kernels", "chart_lipschitz", "points",
    ]);
    for s in &spaces {
        table.push(vec![
            s.name.clone(),
            s.dim.to_string(),
            num(s.diameter),
            serde_json::to_value(s.measure_kind)?.as_str().unwrap_or_default().to_string(),
            s.distance_invariant.to_string(),
            s.closed_form_kernels.to_string(),
            opt_num(s.chart_lipschitz),
            s.points.map(|p| p.to_string()).unwrap_or_default(),
        ]);
    }
    Ok(Output { result: serde_json::json!({ "spaces": spaces }), table })
}
