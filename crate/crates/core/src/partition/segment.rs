//! Splitting the unit segment into pieces of prescribed measure by
//! inverting a distribution function.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::check_range;
use crate::spaces::AxisDensity;
use crate::{Error, Result};

/// Absolute tolerance of the generic bisection inverse.
pub const INVERSE_TOL: f64 = 1e-12;

/// A continuous non-decreasing function `φ` on `[0, 1]` with `φ(0) = 0`,
/// the distribution function of a finite measure `ν₀` on the segment.
pub trait Cdf1d {
    fn cdf(&self, z: f64) -> f64;

    /// `ν₀(I) = φ(1)`.
    fn total(&self) -> f64 {
        self.cdf(1.0)
    }

    /// `φ⁻¹(t) = sup{z : φ(z) = t}`.
    fn inverse(&self, t: f64) -> f64 {
        bisect_sup(|z| self.cdf(z), t)
    }

    /// `φ⁻¹(u · φ(1))`; overridden where a direct formula avoids rounding.
    fn inverse_fraction(&self, u: f64) -> f64 {
        self.inverse(u * self.total())
    }

    fn has_atoms(&self) -> bool {
        false
    }
}

/// Rightmost `z ∈ [0, 1]` with `φ(z) ≤ t`, to within [`INVERSE_TOL`].
///
/// For continuous `φ` and `t ∈ [0, φ(1)]` this is `sup{z : φ(z) = t}`.
pub fn bisect_sup<F: Fn(f64) -> f64>(phi: F, t: f64) -> f64 {
    if phi(1.0) <= t {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > INVERSE_TOL {
        let mid = 0.5 * (lo + hi);
        if phi(mid) <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A distribution function given as a closure.
#[derive(Debug, Clone, Copy)]
pub struct FnCdf<F>(pub F);

impl<F: Fn(f64) -> f64> Cdf1d for FnCdf<F> {
    fn cdf(&self, z: f64) -> f64 {
        (self.0)(z.clamp(0.0, 1.0))
    }
}

/// Linear interpolation of sorted knots `(z, φ(z))` from `(0, 0)` to `(1, φ(1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearCdf {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinearCdf {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        let ok = knots.len() >= 2
            && knots[0] == (0.0, 0.0)
            && knots[knots.len() - 1].0 == 1.0
            && knots.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 >= w[0].1);
        if !ok {
            return Err(Error::argument(
                "knots must start at (0,0), end at z=1 and be increasing in z, non-decreasing in φ",
            ));
        }
        Ok(PiecewiseLinearCdf { knots })
    }
}

impl Cdf1d for PiecewiseLinearCdf {
    fn cdf(&self, z: f64) -> f64 {
        let z = z.clamp(0.0, 1.0);
        for w in self.knots.windows(2) {
            let ((z0, f0), (z1, f1)) = (w[0], w[1]);
            if z <= z1 {
                return f0 + (f1 - f0) * (z - z0) / (z1 - z0);
            }
        }
        self.knots[self.knots.len() - 1].1
    }

    fn inverse(&self, t: f64) -> f64 {
        // sup{z : φ(z) ≤ t}: the last knot at or below t, then interpolate.
        let i = self.knots.partition_point(|&(_, f)| f <= t);
        if i == 0 {
            return 0.0;
        }
        if i == self.knots.len() {
            return 1.0;
        }
        let ((z0, f0), (z1, f1)) = (self.knots[i - 1], self.knots[i]);
        z0 + (z1 - z0) * (t - f0) / (f1 - f0)
    }
}

/// Distribution function of a purely atomic measure with atoms `(z, mass)`.
///
/// Only present so that callers get a clear refusal: segment splitting needs
/// a continuous `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicCdf {
    pub atoms: Vec<(f64, f64)>,
}

impl Cdf1d for AtomicCdf {
    fn cdf(&self, z: f64) -> f64 {
        self.atoms.iter().filter(|a| a.0 <= z).map(|a| a.1).sum()
    }

    fn has_atoms(&self) -> bool {
        self.atoms.iter().any(|a| a.1 > 0.0)
    }
}

/// The axis distribution scaled by the mass of the prefix box it sits on.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledAxis<'a> {
    pub axis: &'a AxisDensity,
    pub scale: f64,
}

impl Cdf1d for ScaledAxis<'_> {
    fn cdf(&self, z: f64) -> f64 {
        self.scale * self.axis.cdf(z)
    }

    fn total(&self) -> f64 {
        self.scale
    }

    fn inverse(&self, t: f64) -> f64 {
        self.inverse_fraction(t / self.scale)
    }

    fn inverse_fraction(&self, u: f64) -> f64 {
        if self.axis.has_exact_inverse() {
            self.axis.inverse(u)
        } else {
            bisect_sup(|z| self.axis.cdf(z), u)
        }
    }
}

/// `φ⁻¹(t)` with a range check on `t ∈ [0, φ(1)]`.
pub fn inverse_cdf<C: Cdf1d + ?Sized>(phi: &C, t: f64) -> Result<f64> {
    check_range("cdf level", t, 0.0, phi.total())?;
    Ok(phi.inverse(t.clamp(0.0, phi.total())))
}

/// A partition of `[0, 1]` into consecutive segments `Δ(j) = [λ(j−1), λ(j)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentPartition {
    breakpoints: Vec<f64>,
    weights: Vec<usize>,
    n: usize,
}

impl SegmentPartition {
    /// `λ(0) = 0 ≤ λ(1) ≤ … ≤ λ(k) = 1`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Δ(j)` for `j` in `0..k` (zero-based).
    pub fn segment(&self, j: usize) -> (f64, f64) {
        (self.breakpoints[j], self.breakpoints[j + 1])
    }

    /// `l(j) = λ(j) − λ(j−1)`.
    pub fn lengths(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// The degenerate partition `Δ(1) = [0,1]`, `Δ(j) = {1}` for `j ≥ 2`.
    pub fn is_degenerate(&self) -> bool {
        self.breakpoints[1..].iter().all(|&b| b == 1.0)
    }

    /// Index of the segment containing `z`, preferring the right segment
    /// at shared endpoints and skipping empty segments.
    pub fn locate(&self, z: f64) -> usize {
        let k = self.weights.len();
        let j = self.breakpoints[1..k].partition_point(|&b| b <= z);
        // Points at 1 belong to the last segment of positive length.
        let mut j = j.min(k - 1);
        while j > 0 && self.breakpoints[j] == self.breakpoints[j + 1] {
            j -= 1;
        }
        j
    }
}

/// Splits `[0, 1]` into `k = weights.len()` segments with
/// `ν₀(Δ(j)) = (n(j)/n)·ν₀(I)`.
///
/// Breakpoints are `λ(j) = φ⁻¹((Σ_{i≤j} n(i)/n)·ν₀(I))`. When `n = 0` or
/// `ν₀ ≡ 0` the degenerate partition is returned.
pub fn split_segment<C: Cdf1d + ?Sized>(nu0: &C, weights: &[usize], n: usize) -> Result<SegmentPartition> {
    if weights.is_empty() {
        return Err(Error::argument("at least one segment weight is required"));
    }
    let sum: usize = weights.iter().sum();
    if sum != n {
        return Err(Error::argument(format!("segment weights sum to {sum}, expected {n}")));
    }
    if nu0.has_atoms() {
        return Err(Error::unsupported("segment splitting needs an atomless measure"));
    }
    let k = weights.len();
    let total = nu0.total();
    if n == 0 || !(total > 0.0) {
        let mut breakpoints = vec![1.0; k + 1];
        breakpoints[0] = 0.0;
        return Ok(SegmentPartition { breakpoints, weights: weights.to_vec(), n });
    }
    let mut breakpoints = Vec::with_capacity(k + 1);
    breakpoints.push(0.0);
    let mut partial = 0usize;
    for (j, &w) in weights.iter().enumerate() {
        partial += w;
        let b = if j + 1 == k { 1.0 } else { nu0.inverse_fraction(partial as f64 / n as f64) };
        let prev = breakpoints[j];
        breakpoints.push(b.clamp(prev, 1.0));
    }
    Ok(SegmentPartition { breakpoints, weights: weights.to_vec(), n })
}
