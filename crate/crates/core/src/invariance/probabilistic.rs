use alloc::string::String;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::omega::{has_deterministic_kernels, nested_lambda_rho_star, OmegaSampler};
use crate::discrepancy::{l2_discrepancy_xi, mean_symdiff_xi, rho_star_xi_sum};
use crate::numeric::MeanAccumulator;
use crate::partition::EqualMeasurePartition;
use crate::spaces::{MetricMeasureSpace, Quadrature, RadialMeasure};
use crate::{Error, Estimate, Result};

/// How each configuration is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InvarianceMode {
    /// Finite enumeration or closed forms per configuration.
    Deterministic,
    /// Unbiased inner Monte Carlo per configuration.
    NestedMonteCarlo { inner_samples: usize },
}

/// `λ[ξ, X_N]` and `ρ*[ξ, X_N]` of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialValues {
    pub lambda: f64,
    pub rho_star: f64,
}

/// Both sides of `2E_N λ[ξ,·] + E_N ρ*[ξ,·] = N²⟨ρ*(ξ)⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub n: usize,
    pub space: String,
    pub xi: String,
    pub mode: InvarianceMode,
    pub trials: usize,
    pub seed: u64,
    /// `E_N λ[ξ, ·]` (diagonal included).
    pub mean_lambda: Estimate,
    /// `E_N ρ*[ξ, ·]` (off-diagonal).
    pub mean_rho_star: Estimate,
    /// `2E_N λ + E_N ρ*`, with the standard error of the per-trial sum.
    pub lhs: Estimate,
    /// `N²⟨ρ*(ξ)⟩`.
    pub rhs: Estimate,
    pub defect: f64,
    /// `√(se(lhs)² + err(rhs)²)`.
    pub combined_error: f64,
    /// `|defect| ≤ 3·combined_error` (plus rounding slack).
    pub within_ci: bool,
    /// `max_t |2λ[ξ,X_t] + ρ*[ξ,X_t] − N²⟨ρ*(ξ)⟩|`, reported for
    /// deterministic evaluation; zero on distance-invariant spaces.
    pub max_configuration_defect: Option<f64>,
}

/// Evaluates trial `trial` of `sampler`.
pub fn invariance_trial<P: EqualMeasurePartition>(
    sampler: &OmegaSampler<'_, P>,
    xi: &RadialMeasure,
    trial: u64,
    inner_samples: usize,
) -> Result<TrialValues> {
    let space = sampler.partition().space();
    let mut rng = sampler.trial_rng(trial);
    let pts = sampler.draw(&mut rng)?;
    if has_deterministic_kernels(space) {
        Ok(TrialValues {
            lambda: l2_discrepancy_xi(space, &pts, xi, Quadrature::ClosedForm)?.value,
            rho_star: rho_star_xi_sum(space, xi, &pts, Quadrature::ClosedForm)?.value,
        })
    } else {
        let (lambda, rho_star) = nested_lambda_rho_star(space, &pts, xi, inner_samples, &mut rng);
        Ok(TrialValues { lambda, rho_star })
    }
}

/// Builds the report from per-trial values in trial order.
pub fn assemble_invariance_report<S: MetricMeasureSpace>(
    space: &S,
    n: usize,
    xi: &RadialMeasure,
    values: &[TrialValues],
    seed: u64,
    mode: InvarianceMode,
    mean_rho_star_xi: Estimate,
) -> Result<InvarianceReport> {
    if values.len() < 2 {
        return Err(Error::argument("at least two trials are needed for a standard error"));
    }
    let nf = n as f64;
    let rhs = Estimate { value: nf * nf * mean_rho_star_xi.value, error: nf * nf * mean_rho_star_xi.error, ..mean_rho_star_xi };
    let (mut lam, mut star, mut sum) = (MeanAccumulator::new(), MeanAccumulator::new(), MeanAccumulator::new());
    let mut worst: f64 = 0.0;
    for v in values {
        lam.push(v.lambda);
        star.push(v.rho_star);
        let t = 2.0 * v.lambda + v.rho_star;
        sum.push(t);
        worst = worst.max((t - rhs.value).abs());
    }
    let trials = values.len() as u64;
    let est = |a: &MeanAccumulator| Estimate::monte_carlo(a.mean(), a.std_error(), trials, seed);
    let lhs = est(&sum);
    let defect = lhs.value - rhs.value;
    let combined_error = lhs.error.hypot(rhs.error);
    let slack = 1e-9 * rhs.value.abs().max(1.0);
    Ok(InvarianceReport {
        n,
        space: space.id(),
        xi: String::from(xi.label()),
        mode,
        trials: values.len(),
        seed,
        mean_lambda: est(&lam),
        mean_rho_star: est(&star),
        lhs,
        rhs,
        defect,
        combined_error,
        within_ci: defect.abs() <= 3.0 * combined_error + slack,
        max_configuration_defect: matches!(mode, InvarianceMode::Deterministic).then_some(worst),
    })
}

/// The mode used for `space` and the right-hand side `⟨ρ*(ξ)⟩`.
pub fn invariance_mode_and_rhs<S: MetricMeasureSpace>(
    space: &S,
    xi: &RadialMeasure,
    inner_samples: usize,
    seed: u64,
) -> Result<(InvarianceMode, Estimate)> {
    let mode = if has_deterministic_kernels(space) {
        InvarianceMode::Deterministic
    } else {
        InvarianceMode::NestedMonteCarlo { inner_samples }
    };
    let rhs = mean_symdiff_xi(space, xi, Quadrature::Auto { samples: Quadrature::DEFAULT_SAMPLES, seed: seed ^ RHS_SALT })?;
    Ok((mode, rhs))
}

// Keeps the right-hand side's sample stream apart from the trial streams.
const RHS_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Theorem 3.1 check over `trials` draws from `Ω_N`.
pub fn probabilistic_invariance_check<P: EqualMeasurePartition>(
    partition: &P,
    xi: &RadialMeasure,
    trials: usize,
    seed: u64,
    inner_samples: usize,
) -> Result<InvarianceReport> {
    if trials < 2 {
        return Err(Error::argument("at least two trials are needed for a standard error"));
    }
    let space = partition.space();
    let sampler = OmegaSampler::new(partition, seed);
    let (mode, rhs) = invariance_mode_and_rhs(space, xi, inner_samples, seed)?;
    let values = (0..trials as u64)
        .map(|t| invariance_trial(&sampler, xi, t, inner_samples))
        .collect::<Result<alloc::vec::Vec<_>>>()?;
    assemble_invariance_report(space, partition.len(), xi, &values, seed, mode, rhs)
}
