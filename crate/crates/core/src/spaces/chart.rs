//! Rectifiable charts `f : Ω ⊆ I^d → M`.

use num_traits::Float;
use alloc::vec::Vec;

use rand::Rng;

use super::{CubeMeasure, MetricMeasureSpace};
use crate::numeric::stream_rng;

/// Lipschitz constant of a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lipschitz {
    Declared(f64),
    /// No global constant; only measured cell diameters are meaningful.
    Empirical,
}

impl Lipschitz {
    pub fn declared(&self) -> Option<f64> {
        match self {
            Lipschitz::Declared(c) => Some(*c),
            Lipschitz::Empirical => None,
        }
    }
}

/// Support `Ω` of the chart inside `I^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[non_exhaustive]
pub enum Support {
    UnitCube,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectifiableChart {
    pub domain_dim: usize,
    pub support: Support,
    pub lipschitz: Lipschitz,
    /// `ν`, with `ν(Ω) = 1` and `μ(f(K ∩ Ω)) = ν(K ∩ Ω)`.
    pub base_measure: CubeMeasure,
}

/// A space that is the injective Lipschitz image of (a subset of) `I^d`.
pub trait Rectifiable: MetricMeasureSpace {
    fn chart(&self) -> RectifiableChart;

    fn chart_map(&self, z: &[f64]) -> Self::Point;

    /// A preimage of `p` under the chart.
    fn chart_inverse(&self, p: &Self::Point) -> Vec<f64>;

    /// `diam(ρ, f(box))` when it has a closed form.
    fn box_image_diameter(&self, _lo: &[f64], _hi: &[f64]) -> Option<f64> {
        None
    }
}

fn sample_pair<R: Rng + ?Sized>(d: usize, rng: &mut R, local: bool) -> (Vec<f64>, Vec<f64>) {
    let z1: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    let z2: Vec<f64> = if local {
        let scale = 10f64.powf(-1.0 - 4.0 * rng.random::<f64>());
        z1.iter()
            .map(|&x| (x + scale * (2.0 * rng.random::<f64>() - 1.0)).clamp(0.0, 1.0))
            .collect()
    } else {
        (0..d).map(|_| rng.random::<f64>()).collect()
    };
    (z1, z2)
}

/// Largest observed `ρ(f(Z₁), f(Z₂)) / ‖Z₁ − Z₂‖` over `pairs` sampled pairs,
/// half of them at short range.
pub fn check_chart_lipschitz<S: Rectifiable>(space: &S, pairs: usize, seed: u64) -> f64 {
    let d = space.chart().domain_dim;
    let mut rng = stream_rng(seed, 0);
    let mut worst: f64 = 0.0;
    for i in 0..pairs {
        let (z1, z2) = sample_pair(d, &mut rng, i % 2 == 1);
        let euclid = z1.iter().zip(&z2).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if euclid <= 0.0 {
            continue;
        }
        let rho = space.distance(&space.chart_map(&z1), &space.chart_map(&z2));
        worst = worst.max(rho / euclid);
    }
    worst
}

/// Statistical injectivity check: distinct sampled preimages in the open
/// cube give distinct images, and the chart inverse recovers the preimage.
pub fn check_chart_injective<S: Rectifiable>(space: &S, samples: usize, seed: u64) -> bool {
    let d = space.chart().domain_dim;
    let mut rng = stream_rng(seed, 0);
    for i in 0..samples {
        let (z1, z2) = sample_pair(d, &mut rng, i % 2 == 1);
        let open = |z: &[f64]| z.iter().all(|&x| x > 1e-9 && x < 1.0 - 1e-9);
        if !open(&z1) || !open(&z2) || z1 == z2 {
            continue;
        }
        let (p1, p2) = (space.chart_map(&z1), space.chart_map(&z2));
        if space.distance(&p1, &p2) <= 0.0 {
            return false;
        }
        let back = space.chart_inverse(&p1);
        if back.iter().zip(&z1).any(|(a, b)| (a - b).abs() > 1e-9) {
            return false;
        }
    }
    true
}
