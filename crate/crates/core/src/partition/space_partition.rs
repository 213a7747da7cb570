//! Equal-measure partitions of spaces: pushforwards of cube partitions
//! through a chart, and explicit partitions of finite spaces.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::boxes::BoxPartition;
use crate::numeric::{stream_rng, NeumaierSum};
use crate::spaces::{FiniteSpace, MetricMeasureSpace, Rectifiable};
use crate::{Error, Rational, Result};

/// How cell diameters are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum DiameterMode {
    /// `Lip(f) · diam(box)`, an upper bound.
    LipschitzBound,
    /// Max pairwise distance of `samples` chart images plus the box corners,
    /// a lower estimate.
    Measured { samples: usize, seed: u64 },
    /// Closed-form image diameters where the space provides them.
    Exact,
}

impl DiameterMode {
    pub const DEFAULT_SAMPLES: usize = 64;
}

/// What a reported diameter means relative to the true one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiameterKind {
    UpperBound,
    LowerEstimate,
    Exact,
}

/// A partition `R_N = {V_i}` of a space into `N` cells of measure `1/N`,
/// with a sampler for the renormalized restrictions `μ̃_i = N μ|V_i`.
pub trait EqualMeasurePartition {
    type Space: MetricMeasureSpace;

    fn space(&self) -> &Self::Space;

    /// `N`.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Draws `x ~ μ̃_i`.
    fn sample_cell<R: Rng + ?Sized>(
        &self,
        cell: usize,
        rng: &mut R,
    ) -> Result<<Self::Space as MetricMeasureSpace>::Point>;

    fn cell_contains(&self, cell: usize, p: &<Self::Space as MetricMeasureSpace>::Point) -> bool;

    /// A representative point of each cell.
    fn cell_center(&self, cell: usize) -> <Self::Space as MetricMeasureSpace>::Point;

    fn cell_diameters(&self) -> &[f64];

    fn diameter_kind(&self) -> DiameterKind;

    /// Atoms of `μ̃_i` with weights summing to one, for finite spaces.
    fn cell_atoms(&self, _cell: usize) -> Option<Vec<(<Self::Space as MetricMeasureSpace>::Point, f64)>> {
        None
    }

    /// `‖R_N‖₁`.
    fn avg_diameter(&self) -> f64 {
        diameters(self.cell_diameters()).0
    }

    /// `‖R_N‖∞`.
    fn max_diameter(&self) -> f64 {
        diameters(self.cell_diameters()).1
    }
}

/// `(mean, max)` of the cell diameters.
pub fn diameters(cells: &[f64]) -> (f64, f64) {
    if cells.is_empty() {
        return (0.0, 0.0);
    }
    let s: NeumaierSum = cells.iter().copied().collect();
    (s.value() / cells.len() as f64, cells.iter().copied().fold(0.0, f64::max))
}

/// Cells `V(α) = f(Π(α) ∩ Ω)` of a rectifiable space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacePartition<S> {
    space: S,
    boxes: BoxPartition,
    diameters: Vec<f64>,
    mode: DiameterMode,
}

/// Pushes a cube partition forward through the chart of `space`.
pub fn pushforward_partition<S>(space: &S, boxes: BoxPartition, mode: DiameterMode) -> Result<SpacePartition<S>>
where
    S: Rectifiable + Clone,
{
    let chart = space.chart();
    if chart.domain_dim != boxes.dim() || chart.base_measure != *boxes.measure() {
        return Err(Error::argument(format!(
            "chart base measure {} (d = {}) does not match the partitioned measure {} (d = {})",
            chart.base_measure.label(),
            chart.domain_dim,
            boxes.measure().label(),
            boxes.dim()
        )));
    }
    let diameters = match mode {
        DiameterMode::LipschitzBound => {
            let lip = chart.lipschitz.declared().ok_or_else(|| {
                Error::unsupported(format!("{} has no declared Lipschitz constant", space.id()))
            })?;
            boxes.boxes().iter().map(|b| lip * b.diameter).collect()
        }
        DiameterMode::Exact => boxes
            .boxes()
            .iter()
            .map(|b| space.box_image_diameter(&b.lo, &b.hi))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::unsupported(format!("{} has no closed-form cell diameters", space.id())))?,
        DiameterMode::Measured { samples, seed } => boxes
            .boxes()
            .iter()
            .enumerate()
            .map(|(i, b)| measured_diameter(space, &b.lo, &b.hi, samples, seed, i as u64))
            .collect(),
    };
    Ok(SpacePartition { space: space.clone(), boxes, diameters, mode })
}

fn measured_diameter<S: Rectifiable>(space: &S, lo: &[f64], hi: &[f64], m: usize, seed: u64, cell: u64) -> f64 {
    let d = lo.len();
    let mut rng = stream_rng(seed, cell);
    let mut pts = Vec::with_capacity(m + (1 << d));
    for corner in 0..(1usize << d) {
        let z: Vec<f64> = (0..d).map(|j| if corner >> j & 1 == 1 { hi[j] } else { lo[j] }).collect();
        pts.push(space.chart_map(&z));
    }
    for _ in 0..m {
        let z: Vec<f64> = (0..d).map(|j| lo[j] + (hi[j] - lo[j]) * rng.random::<f64>()).collect();
        pts.push(space.chart_map(&z));
    }
    let mut best: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max(space.distance(p, q));
        }
    }
    best
}

impl<S: Rectifiable> SpacePartition<S> {
    pub fn boxes(&self) -> &BoxPartition {
        &self.boxes
    }

    pub fn mode(&self) -> DiameterMode {
        self.mode
    }

    /// `μ(V_i) = ν(Π(α_i))`, carried over by the chart.
    pub fn cell_measures(&self) -> Vec<f64> {
        self.boxes.boxes().iter().map(|b| b.measure).collect()
    }

    /// Index of the cell containing `p`, located through the chart inverse.
    pub fn locate(&self, p: &S::Point) -> Option<usize> {
        self.boxes.locate(&self.space.chart_inverse(p))
    }

    /// Monte Carlo frequencies of the cells under `μ`, with the binomial
    /// standard error of each frequency.
    pub fn cell_measures_mc(&self, samples: usize, seed: u64) -> (Vec<f64>, f64) {
        let n = self.boxes.n();
        let mut counts = vec![0usize; n];
        let mut rng = stream_rng(seed, 0);
        for _ in 0..samples {
            if let Some(i) = self.locate(&self.space.sample(&mut rng)) {
                counts[i] += 1;
            }
        }
        let p = 1.0 / n as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        (counts.into_iter().map(|c| c as f64 / samples as f64).collect(), se)
    }

    /// The partition bound `Lip(f) · ‖P_N‖₁` when `Lip(f)` is declared.
    pub fn lipschitz_diameter_bound(&self) -> Option<f64> {
        self.space.chart().lipschitz.declared().map(|l| l * self.boxes.avg_diameter())
    }

    /// `d 2^{d−1} Lip(f) N^{−1/d}` when `Lip(f)` is declared.
    pub fn theorem_diameter_bound(&self) -> Option<f64> {
        self.space.chart().lipschitz.declared().map(|l| l * self.boxes.diameter_bound())
    }
}

impl<S: Rectifiable> EqualMeasurePartition for SpacePartition<S> {
    type Space = S;

    fn space(&self) -> &S {
        &self.space
    }

    fn len(&self) -> usize {
        self.boxes.n()
    }

    fn sample_cell<R: Rng + ?Sized>(&self, cell: usize, rng: &mut R) -> Result<S::Point> {
        let b = &self.boxes.boxes()[cell];
        let z = self.boxes.measure().sample_in_box(&b.lo, &b.hi, rng)?;
        Ok(self.space.chart_map(&z))
    }

    fn cell_contains(&self, cell: usize, p: &S::Point) -> bool {
        let b = &self.boxes.boxes()[cell];
        let z = self.space.chart_inverse(p);
        let tol = 1e-12;
        z.iter().zip(b.lo.iter().zip(&b.hi)).all(|(&x, (&a, &e))| a - tol <= x && x <= e + tol)
    }

    fn cell_center(&self, cell: usize) -> S::Point {
        self.space.chart_map(&self.boxes.boxes()[cell].center())
    }

    fn cell_diameters(&self) -> &[f64] {
        &self.diameters
    }

    fn diameter_kind(&self) -> DiameterKind {
        match self.mode {
            DiameterMode::LipschitzBound => DiameterKind::UpperBound,
            DiameterMode::Measured { .. } => DiameterKind::LowerEstimate,
            DiameterMode::Exact => DiameterKind::Exact,
        }
    }
}

/// An explicit equal-measure partition of a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePartition {
    space: FiniteSpace,
    cells: Vec<Vec<usize>>,
    diameters: Vec<f64>,
}

impl FinitePartition {
    /// Validates that the cells are disjoint, cover the space and each carry
    /// measure exactly `1/N`.
    pub fn new(space: &FiniteSpace, cells: Vec<Vec<usize>>) -> Result<Self> {
        let n = cells.len();
        if n == 0 {
            return Err(Error::argument("a partition needs N >= 1 cells"));
        }
        let mut seen = vec![false; space.len()];
        let target = Rational::new(1.into(), n.into());
        for (i, cell) in cells.iter().enumerate() {
            let mut mass = Rational::zero();
            for &x in cell {
                space.check_point(&x)?;
                if core::mem::replace(&mut seen[x], true) {
                    return Err(Error::argument(format!("point {x} lies in two cells")));
                }
                mass += space.weight(x);
            }
            if mass != target {
                return Err(Error::argument(format!("cell {i} has measure {mass}, expected {target}")));
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::argument(format!("point {x} is not covered")));
        }
        let diameters = cells
            .iter()
            .map(|c| {
                c.iter()
                    .flat_map(|&x| c.iter().map(move |&y| (x, y)))
                    .map(|(x, y)| space.dist(x, y) as f64)
                    .fold(0.0, f64::max)
            })
            .collect();
        Ok(FinitePartition { space: space.clone(), cells, diameters })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Atoms of `μ̃_i = N μ|V_i` in exact arithmetic.
    pub fn cell_atoms_exact(&self, cell: usize) -> Vec<(usize, Rational)> {
        let n = Rational::from_integer(self.cells.len().into());
        self.cells[cell].iter().map(|&x| (x, space_weight(&self.space, x) * &n)).collect()
    }
}

fn space_weight(space: &FiniteSpace, x: usize) -> Rational {
    space.weight(x).clone()
}

impl EqualMeasurePartition for FinitePartition {
    type Space = FiniteSpace;

    fn space(&self) -> &FiniteSpace {
        &self.space
    }

    fn len(&self) -> usize {
        self.cells.len()
    }

    fn sample_cell<R: Rng + ?Sized>(&self, cell: usize, rng: &mut R) -> Result<usize> {
        let atoms = self.cell_atoms_exact(cell);
        let u = rng.random::<f64>();
        let mut acc = 0.0;
        for (x, w) in &atoms {
            acc += w.to_f64().unwrap_or(0.0);
            if u < acc {
                return Ok(*x);
            }
        }
        atoms
            .iter()
            .rev()
            .find(|(_, w)| !w.is_zero())
            .map(|(x, _)| *x)
            .ok_or(Error::SamplerDegenerate { rate: 0.0, min: 0.0 })
    }

    fn cell_contains(&self, cell: usize, p: &usize) -> bool {
        self.cells[cell].contains(p)
    }

    fn cell_center(&self, cell: usize) -> usize {
        // The point of smallest eccentricity within the cell.
        let c = &self.cells[cell];
        *c.iter()
            .min_by_key(|&&x| c.iter().map(|&y| self.space.dist(x, y)).max().unwrap_or(0))
            .expect("cells are non-empty")
    }

    fn cell_diameters(&self) -> &[f64] {
        &self.diameters
    }

    fn diameter_kind(&self) -> DiameterKind {
        DiameterKind::Exact
    }

    fn cell_atoms(&self, cell: usize) -> Option<Vec<(usize, f64)>> {
        Some(self.cell_atoms_exact(cell).into_iter().map(|(x, w)| (x, w.to_f64().unwrap_or(0.0))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{build_box_partition, OccupancyStrategy};
    use crate::spaces::{Circle, CubeMeasure, Sphere, Torus};

    #[test]
    fn circle_quarters() {
        let boxes = build_box_partition(&CubeMeasure::uniform(1), 4, OccupancyStrategy::Lexicographic).unwrap();
        for mode in [DiameterMode::Exact, DiameterMode::LipschitzBound] {
            let p = pushforward_partition(&Circle, boxes.clone(), mode).unwrap();
            assert_eq!((p.avg_diameter(), p.max_diameter()), (0.25, 0.25));
        }
        let p = pushforward_partition(&Circle, boxes, DiameterMode::Measured { samples: 64, seed: 3 }).unwrap();
        assert!((p.avg_diameter() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn torus_lipschitz_bound() {
        let boxes = build_box_partition(&CubeMeasure::uniform(2), 4, OccupancyStrategy::Lexicographic).unwrap();
        let p = pushforward_partition(&Torus::<2>, boxes, DiameterMode::LipschitzBound).unwrap();
        assert!(p.avg_diameter() <= core::f64::consts::FRAC_1_SQRT_2 + 1e-15);
    }

    #[test]
    fn mismatched_measure_is_rejected() {
        let boxes = build_box_partition(&CubeMeasure::power_product(2, 1.0), 4, OccupancyStrategy::Lexicographic).unwrap();
        assert!(matches!(
            pushforward_partition(&Torus::<2>, boxes, DiameterMode::LipschitzBound),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn sphere_needs_measured_diameters() {
        let boxes = build_box_partition(&CubeMeasure::uniform(2), 100, OccupancyStrategy::Lexicographic).unwrap();
        assert!(pushforward_partition(&Sphere, boxes.clone(), DiameterMode::LipschitzBound).is_err());
        let p = pushforward_partition(&Sphere, boxes, DiameterMode::Measured { samples: 16, seed: 1 }).unwrap();
        let (freq, se) = p.cell_measures_mc(200_000, 9);
        let worst = freq.iter().map(|f| (f - 0.01).abs()).fold(0.0, f64::max);
        assert!(worst < 5.0 * se, "worst deviation {worst}, se {se}");
        assert!(p.avg_diameter() <= p.max_diameter());
    }

    #[test]
    fn samples_land_in_their_cells() {
        let boxes = build_box_partition(&CubeMeasure::uniform(2), 9, OccupancyStrategy::Lexicographic).unwrap();
        let p = pushforward_partition(&Torus::<2>, boxes, DiameterMode::Exact).unwrap();
        let mut rng = stream_rng(5, 0);
        for i in 0..9 {
            for _ in 0..20 {
                let x = p.sample_cell(i, &mut rng).unwrap();
                assert!(p.cell_contains(i, &x));
                assert_eq!(p.locate(&x), Some(i));
            }
        }
    }

    #[test]
    fn finite_partition_validation() {
        let h = FiniteSpace::hamming(2).unwrap();
        let p = FinitePartition::new(&h, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(p.cell_diameters(), &[1.0, 1.0]);
        assert!(FinitePartition::new(&h, vec![vec![0], vec![1, 2, 3]]).is_err());
        assert!(FinitePartition::new(&h, vec![vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn diameters_of_mixed_cells() {
        assert_eq!(diameters(&[0.1, 0.3]), (0.2, 0.3));
    }
}
