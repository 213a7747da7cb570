//! Compact metric-measure spaces with normalized measure `μ(M) = 1`.
//!
//! Every space implements [`MetricMeasureSpace`]. Balls are closed,
//! `B_r(y) = {x : ρ(x, y) ≤ r}`. Spaces that are the Lipschitz image of the
//! unit cube additionally implement [`Rectifiable`].

mod chart;
mod circle;
mod cube;
mod cube_measure;
mod finite;
pub mod geometry;
mod radial;
mod sphere;
mod torus;

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use chart::{check_chart_injective, check_chart_lipschitz, Lipschitz, Rectifiable, RectifiableChart, Support};
pub use circle::Circle;
pub use cube::EuclideanCube;
pub use cube_measure::{AxisDensity, CubeMeasure, CustomDensity};
pub use finite::FiniteSpace;
pub use radial::{Atom, RadialKind, RadialMeasure};
pub use sphere::Sphere;
pub use torus::Torus;

use crate::error::check_range;
use crate::numeric::{stream_rng, Estimate, MeanAccumulator, NeumaierSum};
use crate::{Error, Result};

/// The set `T` of radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiiSet {
    /// The whole interval `[0, max]`.
    Interval { max: f64 },
    /// An explicit sorted list of realized distances.
    Finite(Vec<f64>),
}

impl RadiiSet {
    pub fn diameter(&self) -> f64 {
        match self {
            RadiiSet::Interval { max } => *max,
            RadiiSet::Finite(t) => t.last().copied().unwrap_or(0.0),
        }
    }
}

/// How ball volumes of a space are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    ExactFinite,
    ClosedForm,
    /// Deterministic numerical quadrature.
    Quadrature,
    Sampled,
}

/// Where the points of a [`PointSet`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    IidRandom,
    PartitionCellRandom,
    PartitionCellCenter,
    Lattice,
    User,
}

/// A compact metric space with a Borel probability measure.
pub trait MetricMeasureSpace {
    type Point: Clone + core::fmt::Debug + PartialEq;

    /// Registry identifier, e.g. `torus2`.
    fn id(&self) -> String;

    /// Rectifiability dimension; zero for finite spaces.
    fn dim(&self) -> usize;

    /// `L = sup ρ`.
    fn diameter(&self) -> f64;

    fn radii(&self) -> RadiiSet;

    fn measure_kind(&self) -> MeasureKind;

    fn check_point(&self, p: &Self::Point) -> Result<()>;

    /// `ρ(x, y)` without domain checks.
    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// `μ(B_r(y))` without range checks.
    fn ball_volume_unchecked(&self, y: &Self::Point, r: f64) -> Estimate;

    /// Draws a point from `μ`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;

    /// Declared structural property: `μ(B_r(y))` does not depend on `y`.
    fn is_distance_invariant(&self) -> bool {
        false
    }

    /// `v_r` for distance-invariant spaces with a closed form.
    fn volume_profile(&self, _r: f64) -> Option<f64> {
        None
    }

    fn mean_distance_closed_form(&self) -> Option<f64> {
        None
    }

    /// All atoms of `μ` with their weights, for finite spaces.
    fn enumerate(&self) -> Option<Vec<(Self::Point, f64)>> {
        None
    }

    /// `⟨ρ*(ξ)⟩ = 2∬ [μ(B_r(y)) − μ(B_r(y))²] dμ(y) dξ(r)` by deterministic
    /// quadrature, for spaces that are not distance-invariant but admit it.
    fn mean_symdiff_xi_quadrature(&self, _xi: &RadialMeasure) -> Option<Estimate> {
        None
    }

    /// Piecewise closed forms for the discrepancy kernels, where available.
    fn closed_form_kernels(&self) -> Option<&dyn ClosedFormKernels<Self::Point>> {
        None
    }

    /// Flat coordinate representation used by serializers.
    fn coords(&self, p: &Self::Point) -> Vec<f64>;

    fn point_from_coords(&self, coords: &[f64]) -> Result<Self::Point>;
}

/// Closed-form evaluators of the kernels of a specific space.
///
/// Implementors must return values exact up to floating-point rounding.
pub trait ClosedFormKernels<P> {
    /// `ρ*_r(y₁, y₂) = μ(B_r(y₁) Δ B_r(y₂))`.
    fn symdiff_r(&self, y1: &P, y2: &P, r: f64) -> f64;
    /// `∫ ρ*_r(y₁, y₂) dξ(r)`.
    fn symdiff_xi_direct(&self, xi: &RadialMeasure, y1: &P, y2: &P) -> f64;
    /// `∫ |σ(ρ(y₁, y)) − σ(ρ(y₂, y))| dμ(y)`.
    fn symdiff_xi_sigma(&self, xi: &RadialMeasure, y1: &P, y2: &P) -> f64;
    /// `∫ Λ[B_r(y), D]² dμ(y)`.
    fn lambda_r(&self, points: &[P], r: f64) -> f64;
    /// `∫ λ_r[D] dξ(r)`.
    fn lambda_xi(&self, points: &[P], xi: &RadialMeasure) -> f64;
    /// `⟨ρ*(ξ)⟩`.
    fn mean_symdiff_xi(&self, xi: &RadialMeasure) -> f64;
}

/// How integrals over the space are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Quadrature {
    /// Finite enumeration; unsupported on continuous spaces.
    Exact,
    /// A registered closed form; unsupported when none exists.
    ClosedForm,
    MonteCarlo { samples: usize, seed: u64 },
    /// Exact if finite, closed form if registered, Monte Carlo otherwise.
    Auto { samples: usize, seed: u64 },
}

impl Quadrature {
    pub const DEFAULT_SAMPLES: usize = 100_000;

    pub fn auto(seed: u64) -> Self {
        Quadrature::Auto { samples: Self::DEFAULT_SAMPLES, seed }
    }
}

/// A finite ordered list of points (a distribution `D_N`, `N ≥ 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<P> {
    points: Vec<P>,
    provenance: Provenance,
}

impl<P: Clone> PointSet<P> {
    pub fn new<S>(space: &S, points: Vec<P>, provenance: Provenance) -> Result<Self>
    where
        S: MetricMeasureSpace<Point = P>,
    {
        if points.is_empty() {
            return Err(Error::argument("a point set needs N >= 1 points"));
        }
        for p in &points {
            space.check_point(p)?;
        }
        Ok(PointSet { points, provenance })
    }

    /// `N` i.i.d. draws from `μ`.
    pub fn iid<S, R>(space: &S, n: usize, rng: &mut R) -> Result<Self>
    where
        S: MetricMeasureSpace<Point = P>,
        R: Rng + ?Sized,
    {
        let points = (0..n).map(|_| space.sample(rng)).collect();
        Self::new(space, points, Provenance::IidRandom)
    }

    pub(crate) fn from_parts_unchecked(points: Vec<P>, provenance: Provenance) -> Self {
        PointSet { points, provenance }
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn into_points(self) -> Vec<P> {
        self.points
    }
}

/// `ρ(x, y)` with domain checks.
pub fn metric_eval<S: MetricMeasureSpace>(space: &S, x: &S::Point, y: &S::Point) -> Result<f64> {
    space.check_point(x)?;
    space.check_point(y)?;
    Ok(space.distance(x, y))
}

/// `μ(B_r(y))` of the closed ball, `r ∈ [0, L]`.
pub fn ball_volume<S: MetricMeasureSpace>(space: &S, y: &S::Point, r: f64) -> Result<Estimate> {
    space.check_point(y)?;
    check_range("radius", r, 0.0, space.diameter())?;
    Ok(space.ball_volume_unchecked(y, r.clamp(0.0, space.diameter())))
}

/// One draw from `μ` using stream `stream` of `seed`.
pub fn sample_point<S: MetricMeasureSpace>(space: &S, seed: u64, stream: u64) -> S::Point {
    space.sample(&mut stream_rng(seed, stream))
}

/// `∫ g dμ` according to `quad`.
pub fn space_average<S, F>(space: &S, quad: Quadrature, mut g: F) -> Result<Estimate>
where
    S: MetricMeasureSpace,
    F: FnMut(&S::Point) -> f64,
{
    if !matches!(quad, Quadrature::MonteCarlo { .. }) {
        if let Some(atoms) = space.enumerate() {
            let s: NeumaierSum = atoms.iter().map(|(p, w)| w * g(p)).collect();
            return Ok(Estimate::exact(s.value()));
        }
    }
    match quad {
        Quadrature::Exact => Err(Error::unsupported("exact integration needs a finite space")),
        Quadrature::ClosedForm => Err(Error::unsupported("no closed form registered for this integral")),
        Quadrature::MonteCarlo { samples, seed } | Quadrature::Auto { samples, seed } => {
            let mut rng = stream_rng(seed, 0);
            let mut acc = MeanAccumulator::new();
            for _ in 0..samples.max(2) {
                acc.push(g(&space.sample(&mut rng)));
            }
            Ok(acc.estimate(seed))
        }
    }
}

/// `⟨ρ⟩ = ∬ ρ dμ dμ`.
pub fn mean_distance<S: MetricMeasureSpace>(space: &S, quad: Quadrature) -> Result<Estimate> {
    let finite = space.enumerate();
    match (quad, finite) {
        (Quadrature::Exact, None) => Err(Error::unsupported("exact mean distance needs a finite space")),
        (Quadrature::Exact | Quadrature::Auto { .. }, Some(atoms)) => {
            let mut acc = NeumaierSum::new();
            for (x, wx) in &atoms {
                for (y, wy) in &atoms {
                    acc.add(wx * wy * space.distance(x, y));
                }
            }
            Ok(Estimate::exact(acc.value()))
        }
        (Quadrature::ClosedForm, _) => space
            .mean_distance_closed_form()
            .map(Estimate::closed_form)
            .ok_or_else(|| Error::unsupported("no closed-form mean distance registered")),
        (Quadrature::Auto { samples, seed }, None) => match space.mean_distance_closed_form() {
            Some(v) => Ok(Estimate::closed_form(v)),
            None => mean_distance(space, Quadrature::MonteCarlo { samples, seed }),
        },
        (Quadrature::MonteCarlo { samples, seed }, _) => {
            let mut rng = stream_rng(seed, 0);
            let mut acc = MeanAccumulator::new();
            for _ in 0..samples.max(2) {
                let x = space.sample(&mut rng);
                let y = space.sample(&mut rng);
                acc.push(space.distance(&x, &y));
            }
            Ok(acc.estimate(seed))
        }
    }
}

/// Largest violation of symmetry, identity and the triangle inequality
/// over `triples` random triples (zero when the axioms hold).
pub fn metric_axiom_violation<S: MetricMeasureSpace>(space: &S, triples: usize, seed: u64) -> f64 {
    let mut rng = stream_rng(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..triples {
        let x = space.sample(&mut rng);
        let y = space.sample(&mut rng);
        let z = space.sample(&mut rng);
        let (xy, yx) = (space.distance(&x, &y), space.distance(&y, &x));
        worst = worst.max((xy - yx).abs());
        worst = worst.max(space.distance(&x, &x).abs());
        worst = worst.max(xy - space.diameter());
        worst = worst.max(xy - (space.distance(&x, &z) + space.distance(&z, &y)));
    }
    worst
}
