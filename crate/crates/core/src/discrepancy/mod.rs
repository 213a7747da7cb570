//! Distance sums, local and L2 ball discrepancies, symmetric-difference
//! metrics and the kernel components `A⁰_r`, `A¹_r`.
//!
//! Every integral over the space goes through a [`Quadrature`] selector:
//! finite spaces are enumerated, spaces with registered closed forms use
//! them, everything else falls back to seeded Monte Carlo. Monte Carlo
//! estimates that share a seed draw the same centres `y`, so differences
//! between two modes are paired.
//!
//! Point sets are multisets: duplicates count with multiplicity.

mod backend;
pub mod exact;
mod report;

use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::check_range;
use crate::numeric::{pairwise_abs_diff_sum, MeanAccumulator, NeumaierSum};
use crate::spaces::{MetricMeasureSpace, Quadrature, RadialMeasure};
use crate::{Error, Estimate, Result};

use backend::{backend, finite_radial_sum, invariant_volume, mc_over_space, Backend};
pub(crate) use backend::volume;
pub use report::{discrepancy_report, DiscrepancyReport};

/// How `λ_r[D_N]` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum L2Mode {
    /// `∫ Λ[B_r(y), D_N]² dμ(y)`.
    #[default]
    Integral,
    /// `Σ_{i,j} λ_r(x_i, x_j)` with the kernel written through (2.16).
    Kernel,
}

/// How `ρ*(ξ, y₁, y₂)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymdiffMode {
    /// `∫ ρ*_r(y₁, y₂) dξ(r)`.
    #[default]
    Direct,
    /// `∫ |σ(ρ(y₁, y)) − σ(ρ(y₂, y))| dμ(y)`.
    Sigma,
}

fn tag<P>(b: &Backend<'_, P>, value: f64) -> Estimate {
    match b {
        Backend::Finite(_) => Estimate::exact(value),
        _ => Estimate::closed_form(value),
    }
}

fn mc(acc: &MeanAccumulator, seed: u64) -> Estimate {
    acc.estimate(seed)
}

/// `#{i : ρ(x_i, y) ≤ r}`.
pub fn count_in_ball<S: MetricMeasureSpace>(space: &S, points: &[S::Point], y: &S::Point, r: f64) -> usize {
    points.iter().filter(|x| space.distance(x, y) <= r).count()
}

/// `ρ[D_N] = Σ_i Σ_j ρ(x_i, x_j)` over all ordered pairs.
pub fn sum_distances<S: MetricMeasureSpace>(space: &S, points: &[S::Point]) -> f64 {
    let mut acc = NeumaierSum::new();
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            acc.add(space.distance(x, y));
        }
    }
    2.0 * acc.value()
}

/// `Λ[B_r(y), D_N] = #(B_r(y) ∩ D_N) − N μ(B_r(y))`.
pub fn local_discrepancy<S: MetricMeasureSpace>(space: &S, points: &[S::Point], y: &S::Point, r: f64) -> Result<f64> {
    space.check_point(y)?;
    check_range("radius", r, 0.0, space.diameter())?;
    let r = r.clamp(0.0, space.diameter());
    let c = count_in_ball(space, points, y, r) as f64;
    Ok(c - points.len() as f64 * volume(space, y, r))
}

/// Per-centre integrand of the kernel form of `λ_r`:
/// `N²v² + N Σ v(x_i) − 2N v c − c(N − c)` with `c`, `v` taken at `y`.
fn kernel_integrand(n: f64, sum_v: f64, v: f64, c: f64) -> f64 {
    n * n * v * v + n * sum_v - 2.0 * n * v * c - c * (n - c)
}

/// `λ_r[D_N] = ∫ Λ[B_r(y), D_N]² dμ(y)`.
pub fn l2_discrepancy_r<S: MetricMeasureSpace>(
    space: &S,
    points: &[S::Point],
    r: f64,
    mode: L2Mode,
    quad: Quadrature,
) -> Result<Estimate> {
    check_range("radius", r, 0.0, space.diameter())?;
    let r = r.clamp(0.0, space.diameter());
    let n = points.len() as f64;
    let b = backend(space, quad)?;
    match (mode, &b) {
        (L2Mode::Integral, Backend::Finite(atoms)) => {
            let s: NeumaierSum = atoms
                .iter()
                .map(|(y, w)| {
                    let lam = count_in_ball(space, points, y, r) as f64 - n * volume(space, y, r);
                    w * lam * lam
                })
                .collect();
            Ok(tag(&b, s.value()))
        }
        (L2Mode::Integral, Backend::ClosedForm(ck)) => Ok(tag(&b, ck.lambda_r(points, r))),
        (L2Mode::Kernel, Backend::Finite(_) | Backend::ClosedForm(_)) => {
            let comps = kernel_components(space, r, quad)?;
            let mut a1 = NeumaierSum::new();
            for x in points {
                a1.add(comps.a1(x)?.value);
            }
            let mut pairs = NeumaierSum::new();
            for (i, x) in points.iter().enumerate() {
                for y in &points[i + 1..] {
                    pairs.add(symdiff_metric_r(space, x, y, r, quad)?.value);
                }
            }
            let value = 0.5 * (n * n * comps.a0.value + 2.0 * n * a1.value() - 2.0 * pairs.value());
            Ok(tag(&b, value))
        }
        (_, Backend::MonteCarlo { samples, seed }) => {
            let sum_v: f64 = points.iter().map(|x| volume(space, x, r)).sum();
            let (acc, _) = mc_over_space(space, *samples, *seed, |y, _| {
                let c = count_in_ball(space, points, y, r) as f64;
                let v = volume(space, y, r);
                match mode {
                    L2Mode::Integral => (c - n * v) * (c - n * v),
                    L2Mode::Kernel => kernel_integrand(n, sum_v, v, c),
                }
            });
            Ok(mc(&acc, *seed))
        }
    }
}

/// `λ[ξ, D_N] = ∫ λ_r[D_N] dξ(r)`, including the diagonal terms.
///
/// On Monte Carlo spaces the centre and the radius are sampled jointly,
/// `y ~ μ`, `r ~ ξ/ξ(T)`.
pub fn l2_discrepancy_xi<S: MetricMeasureSpace>(
    space: &S,
    points: &[S::Point],
    xi: &RadialMeasure,
    quad: Quadrature,
) -> Result<Estimate> {
    let n = points.len() as f64;
    let b = backend(space, quad)?;
    match &b {
        Backend::Finite(atoms) => {
            let v = finite_radial_sum(&space.radii(), xi, |r| {
                atoms
                    .iter()
                    .map(|(y, w)| {
                        let lam = count_in_ball(space, points, y, r) as f64 - n * volume(space, y, r);
                        w * lam * lam
                    })
                    .collect::<NeumaierSum>()
                    .value()
            });
            Ok(tag(&b, v))
        }
        Backend::ClosedForm(ck) => Ok(tag(&b, ck.lambda_xi(points, xi))),
        Backend::MonteCarlo { samples, seed } => {
            let mass = xi.total_mass();
            let (acc, _) = mc_over_space(space, *samples, *seed, |y, aux| {
                let r = xi.sample_radius(aux);
                let lam = count_in_ball(space, points, y, r) as f64 - n * volume(space, y, r);
                mass * lam * lam
            });
            Ok(mc(&acc, *seed))
        }
    }
}

fn indicator_gap<S: MetricMeasureSpace>(space: &S, y1: &S::Point, y2: &S::Point, y: &S::Point, r: f64) -> f64 {
    let a = space.distance(y1, y) <= r;
    let b = space.distance(y2, y) <= r;
    if a != b {
        1.0
    } else {
        0.0
    }
}

/// `ρ*_r(y₁, y₂) = μ(B_r(y₁) Δ B_r(y₂))`.
pub fn symdiff_metric_r<S: MetricMeasureSpace>(
    space: &S,
    y1: &S::Point,
    y2: &S::Point,
    r: f64,
    quad: Quadrature,
) -> Result<Estimate> {
    check_range("radius", r, 0.0, space.diameter())?;
    let r = r.clamp(0.0, space.diameter());
    let b = backend(space, quad)?;
    match &b {
        Backend::Finite(atoms) => {
            let s: NeumaierSum = atoms.iter().map(|(y, w)| w * indicator_gap(space, y1, y2, y, r)).collect();
            Ok(tag(&b, s.value()))
        }
        Backend::ClosedForm(ck) => Ok(tag(&b, ck.symdiff_r(y1, y2, r))),
        Backend::MonteCarlo { samples, seed } => {
            if y1 == y2 {
                return Ok(Estimate::monte_carlo(0.0, 0.0, *samples as u64, *seed));
            }
            let (acc, _) = mc_over_space(space, *samples, *seed, |y, _| indicator_gap(space, y1, y2, y, r));
            Ok(mc(&acc, *seed))
        }
    }
}

/// `ρ*(ξ, y₁, y₂)` in the requested mode.
pub fn symdiff_metric_xi<S: MetricMeasureSpace>(
    space: &S,
    xi: &RadialMeasure,
    y1: &S::Point,
    y2: &S::Point,
    mode: SymdiffMode,
    quad: Quadrature,
) -> Result<Estimate> {
    let b = backend(space, quad)?;
    match (&b, mode) {
        (Backend::Finite(atoms), SymdiffMode::Direct) => {
            let v = finite_radial_sum(&space.radii(), xi, |r| {
                atoms.iter().map(|(y, w)| w * indicator_gap(space, y1, y2, y, r)).collect::<NeumaierSum>().value()
            });
            Ok(tag(&b, v))
        }
        (Backend::Finite(atoms), SymdiffMode::Sigma) => {
            let s: NeumaierSum = atoms
                .iter()
                .map(|(y, w)| {
                    w * (xi.sigma_unchecked(space.distance(y1, y)) - xi.sigma_unchecked(space.distance(y2, y))).abs()
                })
                .collect();
            Ok(tag(&b, s.value()))
        }
        (Backend::ClosedForm(ck), SymdiffMode::Direct) => Ok(tag(&b, ck.symdiff_xi_direct(xi, y1, y2))),
        (Backend::ClosedForm(ck), SymdiffMode::Sigma) => Ok(tag(&b, ck.symdiff_xi_sigma(xi, y1, y2))),
        (Backend::MonteCarlo { samples, seed }, _) => {
            if y1 == y2 {
                return Ok(Estimate::monte_carlo(0.0, 0.0, *samples as u64, *seed));
            }
            let mass = xi.total_mass();
            let (acc, _) = mc_over_space(space, *samples, *seed, |y, aux| match mode {
                SymdiffMode::Direct => mass * indicator_gap(space, y1, y2, y, xi.sample_radius(aux)),
                SymdiffMode::Sigma => {
                    (xi.sigma_unchecked(space.distance(y1, y)) - xi.sigma_unchecked(space.distance(y2, y))).abs()
                }
            });
            Ok(mc(&acc, *seed))
        }
    }
}

/// `A⁰_r = 2∫ μ(B_r(y))² dμ(y)` together with an evaluator for
/// `A¹_r(x) = μ(B_r(x)) − 2∫ μ(B_r(y)) χ(ρ(x, y) ≤ r) dμ(y)`.
#[derive(Debug, Clone)]
pub struct KernelComponents<'a, S: MetricMeasureSpace> {
    space: &'a S,
    r: f64,
    quad: Quadrature,
    invariant_v: Option<f64>,
    pub a0: Estimate,
}

impl<S: MetricMeasureSpace> KernelComponents<'_, S> {
    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn a1(&self, x: &S::Point) -> Result<Estimate> {
        let (space, r) = (self.space, self.r);
        if let Some(v) = self.invariant_v {
            let value = v - 2.0 * v * v;
            return Ok(if space.enumerate().is_some() { Estimate::exact(value) } else { Estimate::closed_form(value) });
        }
        match backend(space, self.quad)? {
            Backend::Finite(atoms) => {
                let s: NeumaierSum = atoms
                    .iter()
                    .filter(|(y, _)| space.distance(x, y) <= r)
                    .map(|(y, w)| w * volume(space, y, r))
                    .collect();
                Ok(Estimate::exact(volume(space, x, r) - 2.0 * s.value()))
            }
            Backend::ClosedForm(_) => Err(Error::unsupported("A1 needs a volume profile on closed-form spaces")),
            Backend::MonteCarlo { samples, seed } => {
                let vx = volume(space, x, r);
                let (acc, _) = mc_over_space(space, samples, seed, |y, _| {
                    if space.distance(x, y) <= r {
                        vx - 2.0 * volume(space, y, r)
                    } else {
                        vx
                    }
                });
                Ok(acc.estimate(seed))
            }
        }
    }
}

/// The kernel components at radius `r`.
///
/// Distance-invariant spaces use `A⁰_r = 2v_r²` and `A¹_r ≡ v_r − 2v_r²`.
pub fn kernel_components<S: MetricMeasureSpace>(space: &S, r: f64, quad: Quadrature) -> Result<KernelComponents<'_, S>> {
    check_range("radius", r, 0.0, space.diameter())?;
    let r = r.clamp(0.0, space.diameter());
    let invariant_v = invariant_volume(space, r);
    let a0 = match (invariant_v, backend(space, quad)?) {
        (Some(v), b) => tag(&b, 2.0 * v * v),
        (None, Backend::Finite(atoms)) => {
            let s: NeumaierSum = atoms
                .iter()
                .map(|(y, w)| {
                    let v = volume(space, y, r);
                    w * v * v
                })
                .collect();
            Estimate::exact(2.0 * s.value())
        }
        (None, Backend::ClosedForm(_)) => {
            return Err(Error::unsupported("A0 needs a volume profile on closed-form spaces"));
        }
        (None, Backend::MonteCarlo { samples, seed }) => {
            let (acc, _) = mc_over_space(space, samples, seed, |y, _| {
                let v = volume(space, y, r);
                2.0 * v * v
            });
            acc.estimate(seed)
        }
    };
    Ok(KernelComponents { space, r, quad, invariant_v, a0 })
}

/// `A⁰_r`.
pub fn kernel_a0<S: MetricMeasureSpace>(space: &S, r: f64, quad: Quadrature) -> Result<Estimate> {
    Ok(kernel_components(space, r, quad)?.a0)
}

/// `A¹_r(x)`.
pub fn kernel_a1<S: MetricMeasureSpace>(space: &S, x: &S::Point, r: f64, quad: Quadrature) -> Result<Estimate> {
    space.check_point(x)?;
    kernel_components(space, r, quad)?.a1(x)
}

/// `⟨ρ*_r⟩ = 2∫ [μ(B_r(y)) − μ(B_r(y))²] dμ(y)`.
pub fn mean_symdiff_r<S: MetricMeasureSpace>(space: &S, r: f64, quad: Quadrature) -> Result<Estimate> {
    check_range("radius", r, 0.0, space.diameter())?;
    let r = r.clamp(0.0, space.diameter());
    let f = |v: f64| 2.0 * (v - v * v);
    if let Some(v) = invariant_volume(space, r) {
        let b = backend(space, quad)?;
        if !matches!(b, Backend::MonteCarlo { .. }) {
            return Ok(tag(&b, f(v)));
        }
    }
    match backend(space, quad)? {
        Backend::Finite(atoms) => {
            Ok(Estimate::exact(atoms.iter().map(|(y, w)| w * f(volume(space, y, r))).collect::<NeumaierSum>().value()))
        }
        Backend::ClosedForm(_) => Err(Error::unsupported("no closed form for the mean of ρ*_r")),
        Backend::MonteCarlo { samples, seed } => {
            let (acc, _) = mc_over_space(space, samples, seed, |y, _| f(volume(space, y, r)));
            Ok(acc.estimate(seed))
        }
    }
}

/// `⟨ρ*_r⟩ = ∬ ρ*_r(y₁, y₂) dμ dμ` by direct double integration.
pub fn mean_symdiff_r_direct<S: MetricMeasureSpace>(space: &S, r: f64, quad: Quadrature) -> Result<Estimate> {
    check_range("radius", r, 0.0, space.diameter())?;
    let r = r.clamp(0.0, space.diameter());
    match backend(space, quad)? {
        Backend::Finite(atoms) => {
            let mut acc = NeumaierSum::new();
            for (y1, w1) in &atoms {
                for (y2, w2) in &atoms {
                    let s: NeumaierSum =
                        atoms.iter().map(|(y, w)| w * indicator_gap(space, y1, y2, y, r)).collect();
                    acc.add(w1 * w2 * s.value());
                }
            }
            Ok(Estimate::exact(acc.value()))
        }
        Backend::ClosedForm(_) => Err(Error::unsupported("direct double integral needs a finite space or Monte Carlo")),
        Backend::MonteCarlo { samples, seed } => {
            let (acc, _) = mc_over_space(space, samples, seed, |y, aux| {
                let y1 = space.sample(aux);
                let y2 = space.sample(aux);
                indicator_gap(space, &y1, &y2, y, r)
            });
            Ok(acc.estimate(seed))
        }
    }
}

/// `⟨ρ*(ξ)⟩ = ∫ ⟨ρ*_r⟩ dξ(r)`.
///
/// Deterministic routes are tried first: enumeration, a registered closed
/// form, the volume profile of a distance-invariant space under adaptive
/// quadrature, and a space-specific quadrature. Monte Carlo samples
/// `(y, r)` jointly.
pub fn mean_symdiff_xi<S: MetricMeasureSpace>(space: &S, xi: &RadialMeasure, quad: Quadrature) -> Result<Estimate> {
    let f = |v: f64| 2.0 * (v - v * v);
    let deterministic = || -> Option<Estimate> {
        if let Some(atoms) = space.enumerate() {
            let v = finite_radial_sum(&space.radii(), xi, |r| {
                atoms.iter().map(|(y, w)| w * f(volume(space, y, r))).collect::<NeumaierSum>().value()
            });
            return Some(Estimate::exact(v));
        }
        if let Some(ck) = space.closed_form_kernels() {
            return Some(Estimate::closed_form(ck.mean_symdiff_xi(xi)));
        }
        if space.is_distance_invariant() && space.volume_profile(0.0).is_some() {
            let l = space.diameter();
            let extra = [0.5, core::f64::consts::FRAC_1_SQRT_2, l];
            let (v, e) = xi.integrate_adaptive(|r| f(invariant_volume(space, r).unwrap_or(0.0)), &extra, 1e-12);
            return Some(Estimate::quadrature(v, e));
        }
        space.mean_symdiff_xi_quadrature(xi)
    };
    match quad {
        Quadrature::Exact => space
            .enumerate()
            .and(deterministic())
            .ok_or_else(|| Error::unsupported("exact integration needs a finite space")),
        Quadrature::ClosedForm => {
            deterministic().ok_or_else(|| Error::unsupported("no deterministic rule for the mean of ρ*(ξ)"))
        }
        Quadrature::Auto { samples, seed } => match deterministic() {
            Some(e) => Ok(e),
            None => mean_symdiff_xi(space, xi, Quadrature::MonteCarlo { samples, seed }),
        },
        Quadrature::MonteCarlo { samples, seed } => {
            let mass = xi.total_mass();
            let (acc, _) = mc_over_space(space, samples.max(2), seed, |y, aux| {
                let r = xi.sample_radius(aux);
                mass * f(volume(space, y, r))
            });
            Ok(acc.estimate(seed))
        }
    }
}

/// `ρ*[ξ, D_N] = Σ_{i≠j} ρ*(ξ, x_i, x_j)` through the sigma form, which
/// reduces to `∫ Σ_{i≠j} |σ(ρ(x_i, y)) − σ(ρ(x_j, y))| dμ(y)`.
///
/// Closed-form spaces sum the pairwise closed forms instead.
pub fn rho_star_xi_sum<S: MetricMeasureSpace>(
    space: &S,
    xi: &RadialMeasure,
    points: &[S::Point],
    quad: Quadrature,
) -> Result<Estimate> {
    let sigma_gaps = |y: &S::Point| {
        let mut s: Vec<f64> = points.iter().map(|x| xi.sigma_unchecked(space.distance(x, y))).collect();
        pairwise_abs_diff_sum(&mut s)
    };
    let b = backend(space, quad)?;
    match &b {
        Backend::Finite(atoms) => {
            Ok(tag(&b, atoms.iter().map(|(y, w)| w * sigma_gaps(y)).collect::<NeumaierSum>().value()))
        }
        Backend::ClosedForm(ck) => {
            let mut acc = NeumaierSum::new();
            for (i, x) in points.iter().enumerate() {
                for y in &points[i + 1..] {
                    acc.add(ck.symdiff_xi_direct(xi, x, y));
                }
            }
            Ok(tag(&b, 2.0 * acc.value()))
        }
        Backend::MonteCarlo { samples, seed } => {
            let (acc, _) = mc_over_space(space, *samples, *seed, |y, _| sigma_gaps(y));
            Ok(mc(&acc, *seed))
        }
    }
}

/// Outcome of [`lipschitz_check_rho_star`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCheck {
    pub pairs: usize,
    pub c0: f64,
    /// `max ρ*(ξ, y₁, y₂) / ρ(y₁, y₂)` over the sampled pairs.
    pub max_ratio: f64,
    /// Error estimate of `ρ*(ξ)` at the maximizing pair.
    pub max_ratio_error: f64,
}

impl LipschitzCheck {
    /// `max_ratio ≤ c₀(1 + rel) + k·error`.
    pub fn holds(&self, rel: f64, k: f64) -> bool {
        self.max_ratio <= self.c0 * (1.0 + rel) + k * self.max_ratio_error
    }
}

/// Samples `pairs` pairs (stream 2 of `seed`; every second pair at short
/// range on continuous spaces) and records the largest ratio
/// `ρ*(ξ, y₁, y₂) / ρ(y₁, y₂)`, taken as zero for coincident points.
pub fn lipschitz_check_rho_star<S: MetricMeasureSpace>(
    space: &S,
    xi: &RadialMeasure,
    pairs: usize,
    seed: u64,
    quad: Quadrature,
) -> Result<LipschitzCheck> {
    let c0 = xi.c0().ok_or_else(|| Error::unsupported("the radial measure carries no c0 bound"))?;
    let mut rng = crate::numeric::stream_rng(seed, 2);
    let mut best = LipschitzCheck { pairs, c0, max_ratio: 0.0, max_ratio_error: 0.0 };
    for i in 0..pairs {
        let y1 = space.sample(&mut rng);
        let y2 = if i % 2 == 1 && space.enumerate().is_none() {
            nearby(space, &y1, &mut rng)
        } else {
            space.sample(&mut rng)
        };
        let d = space.distance(&y1, &y2);
        if d <= 0.0 {
            continue;
        }
        let e = symdiff_metric_xi(space, xi, &y1, &y2, SymdiffMode::Sigma, quad)?;
        let ratio = e.value / d;
        if ratio > best.max_ratio {
            best.max_ratio = ratio;
            best.max_ratio_error = e.error / d;
        }
    }
    Ok(best)
}

/// A point close to `y`: the nearest of a few fresh draws in coordinates
/// perturbed around `y`, falling back to a fresh sample.
fn nearby<S: MetricMeasureSpace, R: rand::Rng + ?Sized>(space: &S, y: &S::Point, rng: &mut R) -> S::Point {
    let base = space.coords(y);
    let scale = 10f64.powf(-1.0 - 2.0 * rng.random::<f64>());
    let moved: Vec<f64> = base.iter().map(|c| c + scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
    match space.point_from_coords(&moved) {
        Ok(p) => p,
        Err(_) => space.sample(rng),
    }
}
