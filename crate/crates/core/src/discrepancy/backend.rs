//! Choice of integration backend and small shared helpers.

use alloc::vec::Vec;

use crate::numeric::{stream_rng, MeanAccumulator, StreamRng};
use crate::spaces::{ClosedFormKernels, MetricMeasureSpace, Quadrature, RadialMeasure, RadiiSet};
use crate::{Error, Result};

pub(crate) enum Backend<'a, P> {
    /// Exact enumeration of a finite space.
    Finite(Vec<(P, f64)>),
    ClosedForm(&'a dyn ClosedFormKernels<P>),
    MonteCarlo { samples: usize, seed: u64 },
}

pub(crate) fn backend<S: MetricMeasureSpace>(space: &S, quad: Quadrature) -> Result<Backend<'_, S::Point>> {
    match quad {
        Quadrature::Exact => space
            .enumerate()
            .map(Backend::Finite)
            .ok_or_else(|| Error::unsupported("exact integration needs a finite space")),
        Quadrature::ClosedForm => {
            if let Some(atoms) = space.enumerate() {
                return Ok(Backend::Finite(atoms));
            }
            space
                .closed_form_kernels()
                .map(Backend::ClosedForm)
                .ok_or_else(|| Error::unsupported(alloc::format!("no closed-form kernels for {}", space.id())))
        }
        Quadrature::MonteCarlo { samples, seed } => Ok(Backend::MonteCarlo { samples: samples.max(2), seed }),
        Quadrature::Auto { samples, seed } => {
            if let Some(atoms) = space.enumerate() {
                Ok(Backend::Finite(atoms))
            } else if let Some(ck) = space.closed_form_kernels() {
                Ok(Backend::ClosedForm(ck))
            } else {
                Ok(Backend::MonteCarlo { samples: samples.max(2), seed })
            }
        }
    }
}

/// Monte Carlo mean of `g(y)` over `y ~ μ` on stream 0 of `seed`.
///
/// Every caller draws `y` first from the same stream, so estimates that
/// share a seed are paired sample by sample.
pub(crate) fn mc_over_space<S, F>(space: &S, samples: usize, seed: u64, mut g: F) -> (MeanAccumulator, StreamRng)
where
    S: MetricMeasureSpace,
    F: FnMut(&S::Point, &mut StreamRng) -> f64,
{
    let mut rng = stream_rng(seed, 0);
    let mut aux = stream_rng(seed, 1);
    let mut acc = MeanAccumulator::new();
    for _ in 0..samples {
        let y = space.sample(&mut rng);
        acc.push(g(&y, &mut aux));
    }
    (acc, rng)
}

/// `μ(B_r(y))`, using the volume profile on distance-invariant spaces.
pub(crate) fn volume<S: MetricMeasureSpace>(space: &S, y: &S::Point, r: f64) -> f64 {
    let r = r.clamp(0.0, space.diameter());
    if space.is_distance_invariant() {
        if let Some(v) = space.volume_profile(r) {
            return v;
        }
    }
    space.ball_volume_unchecked(y, r).value
}

/// The constant `v_r` of a distance-invariant space with a known profile.
pub(crate) fn invariant_volume<S: MetricMeasureSpace>(space: &S, r: f64) -> Option<f64> {
    if space.is_distance_invariant() {
        space.volume_profile(r.clamp(0.0, space.diameter()))
    } else {
        None
    }
}

/// `∫ g dξ` for `g` right-continuous and constant between consecutive
/// realized distances `t_k` of a finite space:
/// `Σ_k g(t_k) ξ([t_k, t_{k+1}))`.
pub(crate) fn finite_radial_sum<F: FnMut(f64) -> f64>(radii: &RadiiSet, xi: &RadialMeasure, mut g: F) -> f64 {
    let RadiiSet::Finite(t) = radii else {
        unreachable!("finite spaces have finite radii sets")
    };
    let mut acc = crate::numeric::NeumaierSum::new();
    for (k, &r) in t.iter().enumerate() {
        let mass = match t.get(k + 1) {
            Some(&next) => xi.mass_between(r, next),
            None => xi.sigma_unchecked(r),
        };
        if mass != 0.0 {
            acc.add(mass * g(r));
        }
    }
    acc.value()
}
