use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::numeric::stream_rng;
use crate::spaces::{MeasureKind, MetricMeasureSpace, RadiiSet};

/// Outcome of [`check_distance_invariance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceInvarianceCheck {
    pub invariant: bool,
    /// `max |μ(B_r(y)) − μ(B_r(y₀))|` over the grid and the centres.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub centres: usize,
    pub radii: usize,
}

/// `T` for finite spaces, otherwise `count` evenly spaced radii in `(0, L)`.
pub fn default_radii_grid<S: MetricMeasureSpace>(space: &S, count: usize) -> Vec<f64> {
    match space.radii() {
        RadiiSet::Finite(t) => t,
        RadiiSet::Interval { max } => (1..=count).map(|k| max * k as f64 / (count + 1) as f64).collect(),
    }
}

/// Compares ball volumes across centres on a grid of radii.
///
/// Finite spaces use every point as a centre and require exact equality.
/// Other spaces use `centres` sampled points (stream 0 of `seed`) and a
/// tolerance built from the reported volume errors.
pub fn check_distance_invariance<S: MetricMeasureSpace>(
    space: &S,
    radii: &[f64],
    centres: usize,
    seed: u64,
) -> DistanceInvarianceCheck {
    let points: Vec<S::Point> = match space.enumerate() {
        Some(atoms) => atoms.into_iter().map(|(p, _)| p).collect(),
        None => {
            let mut rng = stream_rng(seed, 0);
            (0..centres.max(2)).map(|_| space.sample(&mut rng)).collect()
        }
    };
    let exact = space.measure_kind() == MeasureKind::ExactFinite;
    let mut worst: f64 = 0.0;
    let mut tolerance: f64 = if exact { 0.0 } else { 1e-9 };
    for &r in radii {
        let r = r.clamp(0.0, space.diameter());
        let base = space.ball_volume_unchecked(&points[0], r);
        for p in &points[1..] {
            let v = space.ball_volume_unchecked(p, r);
            worst = worst.max((v.value - base.value).abs());
            if !exact {
                tolerance = tolerance.max(1e-9 + 3.0 * (v.error + base.error));
            }
        }
    }
    DistanceInvarianceCheck {
        invariant: worst <= tolerance,
        max_deviation: worst,
        tolerance,
        centres: points.len(),
        radii: radii.len(),
    }
}
