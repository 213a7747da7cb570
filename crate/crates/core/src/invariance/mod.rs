//! Exact and probabilistic invariance principles, Lemma 3.1 oracles and
//! the extremal bound reports.
//!
//! - [`check_distance_invariance`] and [`exact_invariance_defect`] cover the
//!   deterministic identity `2λ[ξ,D_N] + ρ*[ξ,D_N] = N²⟨ρ*(ξ)⟩`.
//! - [`OmegaSampler`] draws `X_N = (x_1, …, x_N)` with `x_i ~ N μ|V_i`.
//! - [`probabilistic_invariance_check`] estimates both expectations of the
//!   probabilistic identity on arbitrary (non-invariant) spaces.
//! - [`bound_report`] assembles the lower bound on distance sums and the
//!   upper bound on the L2 discrepancy.

mod bounds;
mod distance_invariance;
mod exact_defect;
mod lemma31;
mod omega;
mod probabilistic;

pub use bounds::{bound_report, BoundReport};
pub use distance_invariance::{check_distance_invariance, default_radii_grid, DistanceInvarianceCheck};
pub use exact_defect::{
    exact_invariance_defect, exact_invariance_defect_rational, pair_identities_exact, ExactDefect, PairIdentities,
    RationalDefect,
};
pub use lemma31::{
    lemma31_closed_forms, lemma31_exact, omega_expectation_exhaustive, omega_expectation_exhaustive_exact,
    Lemma31Values,
};
pub use omega::{expectation_mc, sample_omega, ExpectationEstimate, OmegaSampler, Statistic};
pub use probabilistic::{
    assemble_invariance_report, invariance_mode_and_rhs, invariance_trial, probabilistic_invariance_check, InvarianceMode,
    InvarianceReport, TrialValues,
};

#[cfg(test)]
mod tests;
