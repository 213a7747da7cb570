use rectdisc_core::invariance::OmegaSampler;
use rectdisc_core::numeric::stream_rng;
use rectdisc_core::partition::EqualMeasurePartition;
use rectdisc_core::spaces::{MetricMeasureSpace, PointSet};
use serde_json::json;

use super::{finite_partition, rect_partition, require_n};
use crate::args::PointMethod;
use crate::error::CliResult;
use crate::output::{num, Output, RunConfig, Table};
use crate::with_space;

type PointOf<P> = <<P as EqualMeasurePartition>::Space as MetricMeasureSpace>::Point;

/// `n` points of `space` by the configured method. `build` is only called
/// when the method needs the partition.
pub fn generate<P, F>(cfg: &RunConfig, space: &P::Space, n: usize, build: F) -> CliResult<Vec<PointOf<P>>>
where
    P: EqualMeasurePartition,
    F: FnOnce() -> CliResult<P>,
{
    match cfg.params.method.unwrap_or(PointMethod::Omega) {
        PointMethod::Iid => Ok(PointSet::iid(space, n, &mut stream_rng(cfg.seed, 0))?.into_points()),
        PointMethod::Omega => {
            let part = build()?;
            let sampler = OmegaSampler::new(&part, cfg.seed);
            Ok(sampler.draw(&mut sampler.trial_rng(cfg.params.trial.unwrap_or(0)))?)
        }
        PointMethod::Centres => {
            let part = build()?;
            Ok((0..n).map(|i| part.cell_center(i)).collect())
        }
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Output> {
    let space = super::space(cfg)?;
    let n = require_n(cfg)?;
    with_space!(&space,
        s => {
            let pts = generate(cfg, s, n, || rect_partition(cfg, s, n))?;
            emit(cfg, s, &pts, None)
        },
        f => {
            let pts = generate(cfg, f, n, || finite_partition(f, n))?;
            emit(cfg, f, &pts, Some(&pts))
        })
}

fn emit<S: MetricMeasureSpace>(cfg: &RunConfig, space: &S, pts: &[S::Point], ids: Option<&[usize]>) -> CliResult<Output> {
    let coords: Vec<Vec<f64>> = pts.iter().map(|p| space.coords(p)).collect();
    let width = coords.first().map_or(0, Vec::len);
    let mut table = Table::new(["space", "index"].into_iter().map(String::from).chain((0..width).map(|k| format!("x{k}"))));
    for (i, c) in coords.iter().enumerate() {
        table.push([space.id(), i.to_string()].into_iter().chain(c.iter().map(|x| num(*x))).collect());
    }
    let result = json!({
        "space": space.id(),
        "n": pts.len(),
        "method": cfg.params.method,
        "trial": cfg.params.trial,
        "points": coords,
        "point_ids": ids,
    });
    Ok(Output { result, table })
}
