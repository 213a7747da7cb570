use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::{l2_discrepancy_xi, mean_symdiff_xi, rho_star_xi_sum, sum_distances};
use crate::spaces::{mean_distance, MetricMeasureSpace, Quadrature, RadialMeasure};
use crate::{Estimate, Result};

/// All distance-sum and discrepancy quantities of one point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub space: String,
    pub xi: String,
    /// `ρ[D_N]`.
    pub rho_sum: Estimate,
    /// `λ[ξ, D_N]`.
    pub lambda_xi: Estimate,
    /// `ρ*[ξ, D_N]`, off-diagonal.
    pub rho_star_xi_sum: Estimate,
    /// `⟨ρ⟩`.
    pub mean_rho: Estimate,
    /// `⟨ρ*(ξ)⟩`.
    pub mean_rho_star_xi: Estimate,
}

impl DiscrepancyReport {
    /// `2λ[ξ, D_N] + ρ*[ξ, D_N] − N²⟨ρ*(ξ)⟩`, zero on distance-invariant spaces.
    pub fn invariance_defect(&self) -> f64 {
        let n = self.n as f64;
        2.0 * self.lambda_xi.value + self.rho_star_xi_sum.value - n * n * self.mean_rho_star_xi.value
    }
}

pub fn discrepancy_report<S: MetricMeasureSpace>(
    space: &S,
    points: &[S::Point],
    xi: &RadialMeasure,
    quad: Quadrature,
) -> Result<DiscrepancyReport> {
    Ok(DiscrepancyReport {
        n: points.len(),
        space: space.id(),
        xi: String::from(xi.label()),
        rho_sum: Estimate::exact(sum_distances(space, points)),
        lambda_xi: l2_discrepancy_xi(space, points, xi, quad)?,
        rho_star_xi_sum: rho_star_xi_sum(space, xi, points, quad)?,
        mean_rho: mean_distance(space, quad)?,
        mean_rho_star_xi: mean_symdiff_xi(space, xi, quad)?,
    })
}
