use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::discrepancy::{l2_discrepancy_xi, rho_star_xi_sum, sum_distances, volume};
use crate::numeric::{pairwise_abs_diff_sum, stream_rng, MeanAccumulator, StreamRng};
use crate::partition::EqualMeasurePartition;
use crate::spaces::{MetricMeasureSpace, PointSet, Provenance, Quadrature, RadialMeasure};
use crate::{Error, Result};

type PointOf<P> = <<P as EqualMeasurePartition>::Space as MetricMeasureSpace>::Point;

/// The product space `Ω_N = ∏ V_i` with `ω_N = ∏ N μ|V_i`.
///
/// Trial `t` uses stream `t` of the root seed, so draws are reproducible
/// and independent of evaluation order.
pub struct OmegaSampler<'a, P> {
    partition: &'a P,
    seed: u64,
}

impl<P> fmt::Debug for OmegaSampler<'_, P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OmegaSampler").field("seed", &self.seed).finish_non_exhaustive()
    }
}

impl<'a, P: EqualMeasurePartition> OmegaSampler<'a, P> {
    pub fn new(partition: &'a P, seed: u64) -> Self {
        OmegaSampler { partition, seed }
    }

    pub fn partition(&self) -> &'a P {
        self.partition
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The generator of trial `t`; the configuration is drawn first.
    pub fn trial_rng(&self, trial: u64) -> StreamRng {
        stream_rng(self.seed, trial)
    }

    /// `x_i ~ μ̃_i` for every cell, in cell order.
    pub fn draw(&self, rng: &mut StreamRng) -> Result<Vec<PointOf<P>>> {
        (0..self.partition.len()).map(|i| self.partition.sample_cell(i, rng)).collect()
    }
}

/// One configuration `X_N` of trial `trial`.
pub fn sample_omega<P: EqualMeasurePartition>(
    sampler: &OmegaSampler<'_, P>,
    trial: u64,
) -> Result<PointSet<PointOf<P>>> {
    let pts = sampler.draw(&mut sampler.trial_rng(trial))?;
    Ok(PointSet::from_parts_unchecked(pts, Provenance::PartitionCellRandom))
}

/// Random variables on `Ω_N`.
pub enum Statistic<'a, Pt> {
    /// `ρ[X_N]`.
    Rho,
    /// `ρ*[ξ, X_N]`, off-diagonal.
    RhoStarXi(&'a RadialMeasure),
    /// `λ[ξ, X_N]`, diagonal included.
    LambdaXi(&'a RadialMeasure),
    /// `F¹[X_N] = Σ_i f(x_i)`.
    F1(&'a dyn Fn(&Pt) -> f64),
    /// `F²[X_N] = Σ_{i≠j} f(x_i, x_j)`.
    F2(&'a dyn Fn(&Pt, &Pt) -> f64),
}

impl<Pt> fmt::Debug for Statistic<'_, Pt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Statistic::Rho => "Rho",
            Statistic::RhoStarXi(_) => "RhoStarXi",
            Statistic::LambdaXi(_) => "LambdaXi",
            Statistic::F1(_) => "F1",
            Statistic::F2(_) => "F2",
        };
        f.write_str(name)
    }
}

/// Sample mean and standard error over independent draws from `Ω_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
    pub seed: u64,
}

pub(crate) fn has_deterministic_kernels<S: MetricMeasureSpace>(space: &S) -> bool {
    space.enumerate().is_some() || space.closed_form_kernels().is_some()
}

/// Unbiased inner Monte Carlo estimates of `(λ[ξ,X], ρ*[ξ,X])` from the
/// same `M` joint draws `y ~ μ`, `r ~ ξ/ξ(T)`:
/// `ξ(T)(c − Nv)²` and `ξ(T)·2c(N − c)` with `c = #{i : ρ(x_i, y) ≤ r}`.
pub(crate) fn nested_lambda_rho_star<S: MetricMeasureSpace>(
    space: &S,
    points: &[S::Point],
    xi: &RadialMeasure,
    inner: usize,
    rng: &mut StreamRng,
) -> (f64, f64) {
    let n = points.len() as f64;
    let mass = xi.total_mass();
    let mut lam = MeanAccumulator::new();
    let mut star = MeanAccumulator::new();
    for _ in 0..inner.max(1) {
        let y = space.sample(rng);
        let r = xi.sample_radius(rng);
        let c = points.iter().filter(|x| space.distance(x, &y) <= r).count() as f64;
        let v = volume(space, &y, r);
        lam.push(mass * (c - n * v) * (c - n * v));
        star.push(mass * 2.0 * c * (n - c));
    }
    (lam.mean(), star.mean())
}

fn evaluate<S: MetricMeasureSpace>(
    space: &S,
    stat: &Statistic<'_, S::Point>,
    points: &[S::Point],
    inner: usize,
    rng: &mut StreamRng,
) -> Result<f64> {
    let det = has_deterministic_kernels(space);
    Ok(match stat {
        Statistic::Rho => sum_distances(space, points),
        Statistic::F1(f) => points.iter().map(f).sum(),
        Statistic::F2(f) => {
            let mut acc = 0.0;
            for (i, a) in points.iter().enumerate() {
                for (j, b) in points.iter().enumerate() {
                    if i != j {
                        acc += f(a, b);
                    }
                }
            }
            acc
        }
        Statistic::RhoStarXi(xi) if det => rho_star_xi_sum(space, xi, points, Quadrature::ClosedForm)?.value,
        Statistic::LambdaXi(xi) if det => l2_discrepancy_xi(space, points, xi, Quadrature::ClosedForm)?.value,
        Statistic::RhoStarXi(xi) => {
            let mut acc = MeanAccumulator::new();
            for _ in 0..inner.max(1) {
                let y = space.sample(rng);
                let mut s: Vec<f64> = points.iter().map(|x| xi.sigma_unchecked(space.distance(x, &y))).collect();
                acc.push(pairwise_abs_diff_sum(&mut s));
            }
            acc.mean()
        }
        Statistic::LambdaXi(xi) => nested_lambda_rho_star(space, points, xi, inner, rng).0,
    })
}

/// `E_N F` by `trials` independent draws.
///
/// Statistics without a deterministic evaluator on the space are estimated
/// inside each trial from `inner` draws on the trial's own stream, so the
/// reported standard error includes that noise.
pub fn expectation_mc<P: EqualMeasurePartition>(
    sampler: &OmegaSampler<'_, P>,
    stat: &Statistic<'_, PointOf<P>>,
    trials: usize,
    inner: usize,
) -> Result<ExpectationEstimate> {
    if trials < 2 {
        return Err(Error::argument("at least two trials are needed for a standard error"));
    }
    let space = sampler.partition().space();
    let mut acc = MeanAccumulator::new();
    for t in 0..trials {
        let mut rng = sampler.trial_rng(t as u64);
        let pts = sampler.draw(&mut rng)?;
        acc.push(evaluate(space, stat, &pts, inner, &mut rng)?);
    }
    Ok(ExpectationEstimate { mean: acc.mean(), std_error: acc.std_error(), trials, seed: sampler.seed() })
}
