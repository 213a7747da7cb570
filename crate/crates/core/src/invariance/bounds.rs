use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::omega::{expectation_mc, OmegaSampler, Statistic};
use super::probabilistic::invariance_trial;
use crate::discrepancy::sum_distances;
use crate::numeric::{stream_rng, MeanAccumulator, NeumaierSum};
use crate::partition::{DiameterKind, EqualMeasurePartition};
use crate::spaces::{mean_distance, MetricMeasureSpace, Quadrature, RadialMeasure};
use crate::{Error, Estimate, Result};

/// Lower bound on distance sums and upper bound on the L2 discrepancy,
/// with witnessed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub d: usize,
    pub space: String,
    pub trials: usize,
    pub seed: u64,
    /// `⟨ρ⟩`.
    pub mean_rho: Estimate,
    /// `‖R_N‖₁`.
    pub avg_diameter: f64,
    /// `‖R_N‖∞`.
    pub max_diameter: f64,
    pub diameter_kind: DiameterKind,
    /// `N²⟨ρ⟩ − N‖R_N‖₁` (3.19).
    pub rho_lower_bound: f64,
    /// `Q_N(ρ) = Σ_i ∬_{V_i×V_i} ρ dμ dμ`.
    pub q_n_rho: Estimate,
    /// `N⁻¹‖R_N‖₁`, the bound on `Q_N(ρ)` used in the proof.
    pub q_n_bound: f64,
    pub q_n_chain_holds: bool,
    /// `E_N ρ[·] = N²⟨ρ⟩ − N² Q_N(ρ)` by (3.8).
    pub expected_rho_lemma: Estimate,
    /// `E_N ρ[·]` by direct sampling of `Ω_N`.
    pub expected_rho_mc: Estimate,
    /// `ρ[·]` at the cell centres.
    pub centre_witness_rho: f64,
    /// Largest `ρ[X_N]` seen among the trials and the centre witness.
    pub best_observed_rho: f64,
    pub rho_bound_holds: bool,
    pub c0: Option<f64>,
    /// `½ c₀ N ‖R_N‖₁` (3.20).
    pub lambda_upper_bound: Option<f64>,
    /// `E_N λ[ξ, ·]`.
    pub expected_lambda: Option<Estimate>,
    pub lambda_bound_holds: Option<bool>,
    pub lipschitz: Option<f64>,
    /// `N²⟨ρ⟩ − d 2^{d−1} Lip N^{1−1/d}` (1.14).
    pub theorem11_rho_bound: Option<f64>,
    /// `d 2^{d−2} Lip c₀ N^{1−1/d}` (1.15).
    pub theorem11_lambda_bound: Option<f64>,
    /// Whether the closed-form bounds are no tighter than the
    /// partition-based ones.
    pub theorem11_consistent: Option<bool>,
    pub warnings: Vec<String>,
}

/// `Q_N(ρ)` exactly from cell atoms, else by `samples` pairs per cell.
fn q_n_rho<P: EqualMeasurePartition>(partition: &P, samples: usize, seed: u64) -> Result<Estimate> {
    let space = partition.space();
    let n = partition.len() as f64;
    let cells: Option<Vec<_>> = (0..partition.len()).map(|i| partition.cell_atoms(i)).collect();
    if let Some(cells) = cells {
        let mut acc = NeumaierSum::new();
        for cell in &cells {
            for (a, wa) in cell {
                for (b, wb) in cell {
                    acc.add(wa * wb * space.distance(a, b));
                }
            }
        }
        return Ok(Estimate::exact(acc.value() / (n * n)));
    }
    let mut total = 0.0;
    let mut var = 0.0;
    for i in 0..partition.len() {
        let mut rng = stream_rng(seed, 1 + i as u64);
        let mut acc = MeanAccumulator::new();
        for _ in 0..samples.max(2) {
            let u = partition.sample_cell(i, &mut rng)?;
            let v = partition.sample_cell(i, &mut rng)?;
            acc.push(space.distance(&u, &v));
        }
        total += acc.mean();
        var += acc.std_error() * acc.std_error();
    }
    Ok(Estimate::monte_carlo(total / (n * n), var.sqrt() / (n * n), samples as u64, seed))
}

/// Assembles the bounds of Theorem 3.2 (and of Theorem 1.1 when `lipschitz`
/// is given) together with witnessed values over `trials` draws of `Ω_N`.
///
/// The `λ` bound is omitted, with a warning, when `ξ` is absent or has no
/// `c₀`.
pub fn bound_report<P: EqualMeasurePartition>(
    partition: &P,
    xi: Option<&RadialMeasure>,
    lipschitz: Option<f64>,
    trials: usize,
    seed: u64,
    inner_samples: usize,
) -> Result<BoundReport> {
    if trials < 2 {
        return Err(Error::argument("at least two trials are needed for a standard error"));
    }
    let space = partition.space();
    let n = partition.len();
    let nf = n as f64;
    let d = space.dim();
    let mut warnings = Vec::new();

    let mean_rho = mean_distance(space, Quadrature::Auto { samples: Quadrature::DEFAULT_SAMPLES, seed })?;
    let avg = partition.avg_diameter();
    let kind = partition.diameter_kind();
    if kind == DiameterKind::LowerEstimate {
        warnings.push(String::from("cell diameters are sampled lower estimates; bounds built from them are not rigorous"));
    }
    let rho_lower_bound = nf * nf * mean_rho.value - nf * avg;
    let q = q_n_rho(partition, inner_samples.max(256), seed)?;
    let q_n_bound = avg / nf;
    let expected_rho_lemma = Estimate {
        value: nf * nf * (mean_rho.value - q.value),
        error: nf * nf * mean_rho.error.hypot(q.error),
        ..q
    };

    let sampler = OmegaSampler::new(partition, seed);
    let rho_mc = expectation_mc(&sampler, &Statistic::Rho, trials, inner_samples)?;
    let expected_rho_mc = Estimate::monte_carlo(rho_mc.mean, rho_mc.std_error, trials as u64, seed);
    let centres: Vec<_> = (0..n).map(|i| partition.cell_center(i)).collect();
    let centre_witness_rho = sum_distances(space, &centres);
    let mut best = centre_witness_rho;
    for t in 0..trials as u64 {
        let pts = sampler.draw(&mut sampler.trial_rng(t))?;
        best = best.max(sum_distances(space, &pts));
    }
    let rho_bound_holds = expected_rho_mc.value + 3.0 * expected_rho_mc.error + 1e-9 * rho_lower_bound.abs().max(1.0)
        >= rho_lower_bound;

    let c0 = xi.and_then(RadialMeasure::c0);
    let (lambda_upper_bound, expected_lambda, lambda_bound_holds) = match (xi, c0) {
        (Some(xi), Some(c0)) => {
            let bound = 0.5 * c0 * nf * avg;
            let mut acc = MeanAccumulator::new();
            for t in 0..trials as u64 {
                acc.push(invariance_trial(&sampler, xi, t, inner_samples)?.lambda);
            }
            let e = Estimate::monte_carlo(acc.mean(), acc.std_error(), trials as u64, seed);
            (Some(bound), Some(e), Some(e.value <= bound + 3.0 * e.error + 1e-9 * bound.max(1.0)))
        }
        (Some(xi), None) => {
            warnings.push(format!("radial measure {} carries no c0; the discrepancy bound is omitted", xi.label()));
            (None, None, None)
        }
        (None, _) => (None, None, None),
    };

    let growth = |lip: f64, k: i32| d as f64 * 2f64.powi(d as i32 - k) * lip * nf.powf(1.0 - 1.0 / d as f64);
    let (t11_rho, t11_lambda) = match lipschitz {
        Some(lip) if d >= 1 => (
            Some(nf * nf * mean_rho.value - growth(lip, 1)),
            c0.map(|c| c * growth(lip, 2)),
        ),
        _ => (None, None),
    };
    let theorem11_consistent = t11_rho.map(|b| {
        let slack = 1e-9 * b.abs().max(1.0);
        let rho_ok = b <= rho_lower_bound + slack;
        let lam_ok = match (t11_lambda, lambda_upper_bound) {
            (Some(a), Some(b)) => a + slack >= b,
            _ => true,
        };
        rho_ok && lam_ok
    });

    Ok(BoundReport {
        n,
        d,
        space: space.id(),
        trials,
        seed,
        mean_rho,
        avg_diameter: avg,
        max_diameter: partition.max_diameter(),
        diameter_kind: kind,
        rho_lower_bound,
        q_n_rho: q,
        q_n_bound,
        q_n_chain_holds: q.value <= q_n_bound + 3.0 * q.error + 1e-12,
        expected_rho_lemma,
        expected_rho_mc,
        centre_witness_rho,
        best_observed_rho: best,
        rho_bound_holds,
        c0,
        lambda_upper_bound,
        expected_lambda,
        lambda_bound_holds,
        lipschitz,
        theorem11_rho_bound: t11_rho,
        theorem11_lambda_bound: t11_lambda,
        theorem11_consistent,
        warnings,
    })
}
