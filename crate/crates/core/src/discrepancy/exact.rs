//! Rational-arithmetic versions of the discrepancy quantities on
//! [`FiniteSpace`], for atomic radial measures with rational atoms.
//!
//! These are the oracles behind the exact invariance checks: every value
//! is an exact rational, so identities test as identities.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{L2Mode, SymdiffMode};
use crate::error::check_range;
use crate::spaces::{FiniteSpace, MetricMeasureSpace, RadialMeasure};
use crate::{Error, Rational, Result};

/// Which side of (2.6) computes `⟨ρ*_r⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanSymdiffForm {
    /// `2∫ (v − v²) dμ`.
    Volumes,
    /// `∬ ρ*_r dμ dμ`.
    Direct,
}

fn int(n: usize) -> Rational {
    Rational::from_integer(n.into())
}

fn check_points(space: &FiniteSpace, points: &[usize]) -> Result<()> {
    points.iter().try_for_each(|p| space.check_point(p))
}

/// Index `k` into `T` with `B_r = B_{T[k]}`.
fn radius_slot(space: &FiniteSpace, r: &Rational) -> Result<usize> {
    check_range("radius", r.to_f64().unwrap_or(f64::NAN), 0.0, space.diameter())?;
    if r.is_negative() {
        return Err(Error::range("radius", r.to_f64().unwrap_or(f64::NAN), 0.0, space.diameter()));
    }
    Ok(space.radius_index_exact(r).unwrap_or(0))
}

fn atomic_slots(space: &FiniteSpace, xi: &RadialMeasure) -> Result<Vec<(usize, Rational)>> {
    if !xi.is_atomic() {
        return Err(Error::unsupported("exact arithmetic needs an atomic radial measure"));
    }
    xi.atoms()
        .iter()
        .map(|a| Ok((radius_slot(space, &a.exact_radius)?, a.exact_weight.clone())))
        .collect()
}

/// `σ(t)` for every integer distance `t ≤ L`.
fn sigma_table(space: &FiniteSpace, xi: &RadialMeasure) -> Result<Vec<Rational>> {
    let max = space.radii_u32().last().copied().unwrap_or(0);
    (0..=max)
        .map(|t| {
            xi.sigma_exact(&Rational::from_integer(t.into()))
                .ok_or_else(|| Error::unsupported("exact arithmetic needs an atomic radial measure"))
        })
        .collect()
}

fn count(space: &FiniteSpace, points: &[usize], y: usize, k: usize) -> usize {
    let t = space.radii_u32()[k];
    points.iter().filter(|&&x| space.dist(x, y) <= t).count()
}

fn inside(space: &FiniteSpace, x: usize, y: usize, k: usize) -> bool {
    space.dist(x, y) <= space.radii_u32()[k]
}

fn lambda_r_slot(space: &FiniteSpace, points: &[usize], k: usize) -> Rational {
    let n = int(points.len());
    let mut acc = Rational::zero();
    for y in 0..space.len() {
        let lam = int(count(space, points, y, k)) - &n * space.ball_volume_at(y, k);
        acc += space.weight(y) * &lam * &lam;
    }
    acc
}

fn symdiff_slot(space: &FiniteSpace, y1: usize, y2: usize, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for y in 0..space.len() {
        if inside(space, y1, y, k) != inside(space, y2, y, k) {
            acc += space.weight(y);
        }
    }
    acc
}

fn a0_slot(space: &FiniteSpace, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for y in 0..space.len() {
        let v = space.ball_volume_at(y, k);
        acc += space.weight(y) * v * v;
    }
    acc * int(2)
}

fn a1_slot(space: &FiniteSpace, x: usize, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for y in 0..space.len() {
        if inside(space, x, y, k) {
            acc += space.weight(y) * space.ball_volume_at(y, k);
        }
    }
    space.ball_volume_at(x, k) - acc * int(2)
}

/// `ρ[D_N]`.
pub fn sum_distances_exact(space: &FiniteSpace, points: &[usize]) -> Result<Rational> {
    check_points(space, points)?;
    let s: u64 = points.iter().flat_map(|&x| points.iter().map(move |&y| space.dist(x, y) as u64)).sum();
    Ok(Rational::from_integer(s.into()))
}

/// `Λ[B_r(y), D_N]`.
pub fn local_discrepancy_exact(space: &FiniteSpace, points: &[usize], y: usize, r: &Rational) -> Result<Rational> {
    check_points(space, points)?;
    space.check_point(&y)?;
    let k = radius_slot(space, r)?;
    Ok(int(count(space, points, y, k)) - int(points.len()) * space.ball_volume_at(y, k))
}

/// `λ_r[D_N]` in either mode.
pub fn l2_discrepancy_r_exact(space: &FiniteSpace, points: &[usize], r: &Rational, mode: L2Mode) -> Result<Rational> {
    check_points(space, points)?;
    let k = radius_slot(space, r)?;
    Ok(match mode {
        L2Mode::Integral => lambda_r_slot(space, points, k),
        L2Mode::Kernel => {
            let n = int(points.len());
            let a1: Rational = points.iter().map(|&x| a1_slot(space, x, k)).sum();
            let mut pairs = Rational::zero();
            for (i, &x) in points.iter().enumerate() {
                for &y in &points[i + 1..] {
                    pairs += symdiff_slot(space, x, y, k);
                }
            }
            (&n * &n * a0_slot(space, k) + int(2) * &n * a1 - int(2) * pairs) / int(2)
        }
    })
}

/// `λ[ξ, D_N]`.
pub fn l2_discrepancy_xi_exact(space: &FiniteSpace, points: &[usize], xi: &RadialMeasure) -> Result<Rational> {
    check_points(space, points)?;
    Ok(atomic_slots(space, xi)?
        .into_iter()
        .map(|(k, w)| w * lambda_r_slot(space, points, k))
        .sum())
}

/// `ρ*_r(y₁, y₂)`.
pub fn symdiff_r_exact(space: &FiniteSpace, y1: usize, y2: usize, r: &Rational) -> Result<Rational> {
    check_points(space, &[y1, y2])?;
    Ok(symdiff_slot(space, y1, y2, radius_slot(space, r)?))
}

/// `ρ*(ξ, y₁, y₂)` in either mode.
pub fn symdiff_xi_exact(
    space: &FiniteSpace,
    xi: &RadialMeasure,
    y1: usize,
    y2: usize,
    mode: SymdiffMode,
) -> Result<Rational> {
    check_points(space, &[y1, y2])?;
    match mode {
        SymdiffMode::Direct => Ok(atomic_slots(space, xi)?
            .into_iter()
            .map(|(k, w)| w * symdiff_slot(space, y1, y2, k))
            .sum()),
        SymdiffMode::Sigma => {
            let sigma = sigma_table(space, xi)?;
            let mut acc = Rational::zero();
            for y in 0..space.len() {
                let gap = &sigma[space.dist(y1, y) as usize] - &sigma[space.dist(y2, y) as usize];
                acc += space.weight(y) * gap.abs();
            }
            Ok(acc)
        }
    }
}

/// `A⁰_r`.
pub fn kernel_a0_exact(space: &FiniteSpace, r: &Rational) -> Result<Rational> {
    Ok(a0_slot(space, radius_slot(space, r)?))
}

/// `A¹_r(x)`.
pub fn kernel_a1_exact(space: &FiniteSpace, x: usize, r: &Rational) -> Result<Rational> {
    space.check_point(&x)?;
    Ok(a1_slot(space, x, radius_slot(space, r)?))
}

/// The kernel `λ_r(y₁, y₂) = ∫ (χ(B_r(y), y₁) − v(y))(χ(B_r(y), y₂) − v(y)) dμ(y)`.
pub fn lambda_pair_exact(space: &FiniteSpace, y1: usize, y2: usize, r: &Rational) -> Result<Rational> {
    check_points(space, &[y1, y2])?;
    Ok(lambda_pair_slot(space, y1, y2, radius_slot(space, r)?))
}

fn lambda_pair_slot(space: &FiniteSpace, y1: usize, y2: usize, k: usize) -> Rational {
    let chi = |x: usize, y: usize| if inside(space, x, y, k) { int(1) } else { Rational::zero() };
    let mut acc = Rational::zero();
    for y in 0..space.len() {
        let v = space.ball_volume_at(y, k);
        acc += space.weight(y) * (chi(y1, y) - v) * (chi(y2, y) - v);
    }
    acc
}

/// `λ(ξ, y₁, y₂) = ∫ λ_r(y₁, y₂) dξ(r)`.
pub fn lambda_xi_pair_exact(space: &FiniteSpace, xi: &RadialMeasure, y1: usize, y2: usize) -> Result<Rational> {
    check_points(space, &[y1, y2])?;
    Ok(atomic_slots(space, xi)?
        .into_iter()
        .map(|(k, w)| w * lambda_pair_slot(space, y1, y2, k))
        .sum())
}

/// `⟨ρ*_r⟩` by either side of (2.6).
pub fn mean_symdiff_r_exact(space: &FiniteSpace, r: &Rational, form: MeanSymdiffForm) -> Result<Rational> {
    let k = radius_slot(space, r)?;
    Ok(mean_symdiff_slot(space, k, form))
}

fn mean_symdiff_slot(space: &FiniteSpace, k: usize, form: MeanSymdiffForm) -> Rational {
    let mut acc = Rational::zero();
    match form {
        MeanSymdiffForm::Volumes => {
            for y in 0..space.len() {
                let v = space.ball_volume_at(y, k);
                acc += space.weight(y) * (v - v * v);
            }
            acc * int(2)
        }
        MeanSymdiffForm::Direct => {
            for y1 in 0..space.len() {
                for y2 in 0..space.len() {
                    acc += space.weight(y1) * space.weight(y2) * symdiff_slot(space, y1, y2, k);
                }
            }
            acc
        }
    }
}

/// `⟨ρ*(ξ)⟩`.
pub fn mean_symdiff_xi_exact(space: &FiniteSpace, xi: &RadialMeasure) -> Result<Rational> {
    Ok(atomic_slots(space, xi)?
        .into_iter()
        .map(|(k, w)| w * mean_symdiff_slot(space, k, MeanSymdiffForm::Volumes))
        .sum())
}

/// `ρ*[ξ, D_N] = Σ_{i≠j} ρ*(ξ, x_i, x_j)`, via the sigma form with the
/// sigma values sorted once per centre.
pub fn rho_star_xi_sum_exact(space: &FiniteSpace, xi: &RadialMeasure, points: &[usize]) -> Result<Rational> {
    check_points(space, points)?;
    let sigma = sigma_table(space, xi)?;
    let n = points.len();
    let mut acc = Rational::zero();
    let mut vals: Vec<&Rational> = vec![];
    for y in 0..space.len() {
        vals.clear();
        vals.extend(points.iter().map(|&x| &sigma[space.dist(x, y) as usize]));
        vals.sort();
        // Σ_{i≠j} |a_i − a_j| = 2 Σ_k (2k − n + 1) a_(k) for sorted a.
        let mut row = Rational::zero();
        for (k, v) in vals.iter().enumerate() {
            let coeff = 2 * k as i64 - n as i64 + 1;
            if coeff != 0 {
                row += Rational::from_integer(coeff.into()) * *v;
            }
        }
        acc += space.weight(y) * row * int(2);
    }
    Ok(acc)
}
