use alloc::format;
use alloc::string::String;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::distance_invariance::{check_distance_invariance, default_radii_grid};
use crate::discrepancy::exact::{
    l2_discrepancy_xi_exact, lambda_pair_exact, lambda_xi_pair_exact, mean_symdiff_r_exact, mean_symdiff_xi_exact,
    rho_star_xi_sum_exact, symdiff_r_exact, symdiff_xi_exact, MeanSymdiffForm,
};
use crate::discrepancy::{l2_discrepancy_xi, mean_symdiff_xi, rho_star_xi_sum, SymdiffMode};
use crate::spaces::{FiniteSpace, MetricMeasureSpace, Quadrature, RadialMeasure};
use crate::{Error, Estimate, Rational, Result};

/// Terms of `2λ[ξ,D_N] + ρ*[ξ,D_N] − N²⟨ρ*(ξ)⟩` in floating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactDefect {
    pub n: usize,
    pub space: String,
    pub xi: String,
    /// `λ[ξ, D_N]`, diagonal included.
    pub lambda: Estimate,
    /// `ρ*[ξ, D_N]` over ordered pairs `i ≠ j`.
    pub rho_star_sum: Estimate,
    pub mean_rho_star: Estimate,
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

/// The same terms in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalDefect {
    pub lambda: Rational,
    pub rho_star_sum: Rational,
    pub mean_rho_star: Rational,
    pub defect: Rational,
}

/// Result of the per-pair identity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairIdentities {
    pub checked: usize,
    pub violations: usize,
}

fn require_invariant<S: MetricMeasureSpace>(space: &S) -> Result<()> {
    let chk = check_distance_invariance(space, &default_radii_grid(space, 16), 64, 0);
    if chk.invariant {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{} is not distance-invariant (ball volumes differ by {:.3e})",
            space.id(),
            chk.max_deviation
        )))
    }
}

/// `2λ[ξ,D_N] + ρ*[ξ,D_N] − N²⟨ρ*(ξ)⟩` with deterministic evaluators only
/// (finite enumeration or registered closed forms).
pub fn exact_invariance_defect<S: MetricMeasureSpace>(
    space: &S,
    points: &[S::Point],
    xi: &RadialMeasure,
) -> Result<ExactDefect> {
    require_invariant(space)?;
    let quad = Quadrature::ClosedForm;
    let lambda = l2_discrepancy_xi(space, points, xi, quad)?;
    let rho_star_sum = rho_star_xi_sum(space, xi, points, quad)?;
    let mean_rho_star = mean_symdiff_xi(space, xi, quad)?;
    let n = points.len() as f64;
    let lhs = 2.0 * lambda.value + rho_star_sum.value;
    let rhs = n * n * mean_rho_star.value;
    Ok(ExactDefect {
        n: points.len(),
        space: space.id(),
        xi: String::from(xi.label()),
        lambda,
        rho_star_sum,
        mean_rho_star,
        lhs,
        rhs,
        defect: lhs - rhs,
    })
}

fn require_invariant_exact(space: &FiniteSpace) -> Result<()> {
    let d = space.distance_invariance_defect();
    if d.is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{} is not distance-invariant (ball volumes differ by {d})", space.id())))
    }
}

/// The defect in rational arithmetic.
pub fn exact_invariance_defect_rational(
    space: &FiniteSpace,
    points: &[usize],
    xi: &RadialMeasure,
) -> Result<RationalDefect> {
    require_invariant_exact(space)?;
    let lambda = l2_discrepancy_xi_exact(space, points, xi)?;
    let rho_star_sum = rho_star_xi_sum_exact(space, xi, points)?;
    let mean_rho_star = mean_symdiff_xi_exact(space, xi)?;
    let n = Rational::from_integer(points.len().into());
    let defect = &lambda * Rational::from_integer(2.into()) + &rho_star_sum - &n * &n * &mean_rho_star;
    Ok(RationalDefect { lambda, rho_star_sum, mean_rho_star, defect })
}

/// Checks `2λ_r(y₁,y₂) + ρ*_r(y₁,y₂) = ⟨ρ*_r⟩` for every pair and every
/// `r ∈ T`, and `2λ(ξ,y₁,y₂) + ρ*(ξ,y₁,y₂) = ⟨ρ*(ξ)⟩` for every pair.
pub fn pair_identities_exact(space: &FiniteSpace, xi: &RadialMeasure) -> Result<PairIdentities> {
    require_invariant_exact(space)?;
    let two = Rational::from_integer(2.into());
    let mut out = PairIdentities { checked: 0, violations: 0 };
    let mean_xi = mean_symdiff_xi_exact(space, xi)?;
    for &t in space.radii_u32() {
        let r = Rational::from_integer(t.into());
        let mean_r = mean_symdiff_r_exact(space, &r, MeanSymdiffForm::Volumes)?;
        for y1 in 0..space.len() {
            for y2 in 0..space.len() {
                let lhs = lambda_pair_exact(space, y1, y2, &r)? * &two + symdiff_r_exact(space, y1, y2, &r)?;
                out.checked += 1;
                if lhs != mean_r {
                    out.violations += 1;
                }
            }
        }
    }
    for y1 in 0..space.len() {
        for y2 in 0..space.len() {
            let lhs = lambda_xi_pair_exact(space, xi, y1, y2)? * &two
                + symdiff_xi_exact(space, xi, y1, y2, SymdiffMode::Direct)?;
            out.checked += 1;
            if lhs != mean_xi {
                out.violations += 1;
            }
        }
    }
    Ok(out)
}
