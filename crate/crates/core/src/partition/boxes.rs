//! The inductive equal-measure partition of the unit cube into
//! axis-aligned boxes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::occupancy::{assign_occupancy, digits, Occupancy, OccupancyStrategy};
use super::segment::{split_segment, FnCdf, ScaledAxis, SegmentPartition};
use crate::numeric::NeumaierSum;
use crate::spaces::CubeMeasure;
use crate::{Error, Result};

/// One retained box `Π(α)`, `α = (i₁,…,i_d)` zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeBox {
    pub index: Vec<usize>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// `ν(Π(α))` evaluated from the measure, not assumed.
    pub measure: f64,
    /// Euclidean diameter `√Σ l_j²`.
    pub diameter: f64,
}

impl CubeBox {
    pub fn contains(&self, z: &[f64]) -> bool {
        z.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&x, (&a, &b))| a <= x && x <= b)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }
}

/// The partition `P_N = {Π(α) : α ∈ A}` together with every intermediate level.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxPartition {
    measure: CubeMeasure,
    occupancy: Occupancy,
    // splits[q][p]: split of prefix box p (q fixed axes) along axis q.
    splits: Vec<Vec<SegmentPartition>>,
    boxes: Vec<CubeBox>,
}

/// Deviations from the identities the construction must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionChecks {
    /// `max |ν(Π(i₁,…,i_q)) − N(i₁,…,i_q)/N|` over all levels and prefixes.
    pub level_measure_defect: f64,
    /// `max |Σ_j l(…, j) − 1|` over all splits.
    pub length_sum_defect: f64,
    /// `max_α |ν(Π(α)) − 1/N|`.
    pub equal_measure_defect: f64,
    /// `‖P_N‖₁`.
    pub avg_diameter: f64,
    /// `d k^{d−1} / N`, the intermediate bound of the diameter chain.
    pub chain_bound: f64,
    /// `d 2^{d−1} N^{−1/d}`.
    pub bound: f64,
    pub bound_holds: bool,
}

/// `d 2^{d−1} N^{−1/d}`.
pub fn box_diameter_bound(d: usize, n: usize) -> f64 {
    d as f64 * 2f64.powi(d as i32 - 1) * (n as f64).powf(-1.0 / d as f64)
}

fn split_prefix(
    measure: &CubeMeasure,
    bounds: &[(f64, f64)],
    weights: &[usize],
    n: usize,
) -> Result<SegmentPartition> {
    let q = bounds.len();
    let d = measure.dim();
    if let Some(axes) = measure.axes() {
        let scale: f64 = axes.iter().zip(bounds).map(|(a, &(lo, hi))| (a.cdf(hi) - a.cdf(lo)).max(0.0)).product();
        return split_segment(&ScaledAxis { axis: &axes[q], scale }, weights, n);
    }
    // Conditional distribution function (4.17) by nested quadrature.
    let mut lo = vec![0.0; d];
    let mut hi = vec![1.0; d];
    for (j, &(a, b)) in bounds.iter().enumerate() {
        lo[j] = a;
        hi[j] = b;
    }
    let phi = FnCdf(|z: f64| {
        let mut h = hi.clone();
        h[q] = z;
        measure.box_measure(&lo, &h)
    });
    split_segment(&phi, weights, n)
}

/// Builds `P(1), …, P(d)` by induction and keeps the `N` occupied boxes.
pub fn build_box_partition(measure: &CubeMeasure, n: usize, strategy: OccupancyStrategy) -> Result<BoxPartition> {
    let d = measure.dim();
    if d == 0 {
        return Err(Error::argument("cube dimension must be positive"));
    }
    if n == 0 {
        return Err(Error::argument("a partition needs N >= 1 cells"));
    }
    let occupancy = assign_occupancy(n, d, strategy);
    let k = occupancy.k();
    let mut splits: Vec<Vec<SegmentPartition>> = Vec::with_capacity(d);
    // Bounds of the level-q prefix boxes along their q fixed axes.
    let mut prefix_bounds: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for q in 0..d {
        let mut level = Vec::with_capacity(prefix_bounds.len());
        let mut next_bounds = Vec::with_capacity(prefix_bounds.len() * k);
        for (p, bounds) in prefix_bounds.iter().enumerate() {
            let weights: Vec<usize> = (0..k).map(|j| occupancy.prefix_count(q + 1, p * k + j)).collect();
            let seg = split_prefix(measure, bounds, &weights, occupancy.prefix_count(q, p))?;
            for j in 0..k {
                let mut b = bounds.clone();
                b.push(seg.segment(j));
                next_bounds.push(b);
            }
            level.push(seg);
        }
        splits.push(level);
        prefix_bounds = next_bounds;
    }
    let mut boxes = Vec::with_capacity(n);
    for (a, bounds) in prefix_bounds.iter().enumerate() {
        if occupancy.labels()[a] == 0 {
            continue;
        }
        let lo: Vec<f64> = bounds.iter().map(|b| b.0).collect();
        let hi: Vec<f64> = bounds.iter().map(|b| b.1).collect();
        let diameter = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
        boxes.push(CubeBox { index: digits(a, d, k), measure: measure.box_measure(&lo, &hi), lo, hi, diameter });
    }
    Ok(BoxPartition { measure: measure.clone(), occupancy, splits, boxes })
}

impl BoxPartition {
    pub fn measure(&self) -> &CubeMeasure {
        &self.measure
    }

    pub fn dim(&self) -> usize {
        self.occupancy.dim()
    }

    pub fn n(&self) -> usize {
        self.occupancy.n()
    }

    /// Grid order `k = ⌈N^{1/d}⌉`.
    pub fn k(&self) -> usize {
        self.occupancy.k()
    }

    pub fn strategy(&self) -> OccupancyStrategy {
        self.occupancy.strategy()
    }

    pub fn occupancy(&self) -> &Occupancy {
        &self.occupancy
    }

    /// The segment partitions of level `q` (splitting axis `q`), one per prefix.
    pub fn splits(&self, q: usize) -> &[SegmentPartition] {
        &self.splits[q]
    }

    pub fn boxes(&self) -> &[CubeBox] {
        &self.boxes
    }

    /// `‖P_N‖₁`.
    pub fn avg_diameter(&self) -> f64 {
        let s: NeumaierSum = self.boxes.iter().map(|b| b.diameter).collect();
        s.value() / self.n() as f64
    }

    /// `‖P_N‖∞`.
    pub fn max_diameter(&self) -> f64 {
        self.boxes.iter().map(|b| b.diameter).fold(0.0, f64::max)
    }

    /// `d 2^{d−1} N^{−1/d}`.
    pub fn diameter_bound(&self) -> f64 {
        box_diameter_bound(self.dim(), self.n())
    }

    /// Index of the retained box containing `z`, following the splits level by
    /// level; `None` when `z` falls in an unoccupied grid cell.
    pub fn locate(&self, z: &[f64]) -> Option<usize> {
        let k = self.k();
        let mut p = 0usize;
        for (q, level) in self.splits.iter().enumerate() {
            let j = level[p].locate(z[q]);
            p = p * k + j;
        }
        if self.occupancy.labels()[p] == 0 {
            return None;
        }
        Some(self.occupancy.labels()[..p].iter().sum())
    }

    /// Evaluates the level-measure identities, unit lengths, equal measure and
    /// the diameter bound.
    pub fn checks(&self) -> PartitionChecks {
        let d = self.dim();
        let k = self.k();
        let n = self.n() as f64;
        let mut level_defect: f64 = 0.0;
        let mut length_defect: f64 = 0.0;
        let mut bounds: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for q in 0..d {
            let mut next = Vec::with_capacity(bounds.len() * k);
            for (p, b) in bounds.iter().enumerate() {
                let seg = &self.splits[q][p];
                let total: NeumaierSum = seg.lengths().into_iter().collect();
                length_defect = length_defect.max((total.value() - 1.0).abs());
                for j in 0..k {
                    let mut c = b.clone();
                    c.push(seg.segment(j));
                    let mut lo = vec![0.0; d];
                    let mut hi = vec![1.0; d];
                    for (axis, &(a, e)) in c.iter().enumerate() {
                        lo[axis] = a;
                        hi[axis] = e;
                    }
                    let expected = self.occupancy.prefix_count(q + 1, p * k + j) as f64 / n;
                    level_defect = level_defect.max((self.measure.box_measure(&lo, &hi) - expected).abs());
                    next.push(c);
                }
            }
            bounds = next;
        }
        let equal = self.boxes.iter().map(|b| (b.measure - 1.0 / n).abs()).fold(0.0, f64::max);
        let avg = self.avg_diameter();
        let bound = self.diameter_bound();
        PartitionChecks {
            level_measure_defect: level_defect,
            length_sum_defect: length_defect,
            equal_measure_defect: equal,
            avg_diameter: avg,
            chain_bound: d as f64 * (k as f64).powi(d as i32 - 1) / n,
            bound,
            bound_holds: avg <= bound * (1.0 + 1e-12),
        }
    }

    /// Human-readable summary of a failed check, if any.
    pub fn verify(&self, tol: f64) -> Result<PartitionChecks> {
        let c = self.checks();
        if c.level_measure_defect > tol || c.equal_measure_defect > tol || !c.bound_holds {
            return Err(Error::Precondition(format!("partition checks failed: {c:?}")));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::AxisDensity;

    #[test]
    fn uniform_square_four_cells() {
        let p = build_box_partition(&CubeMeasure::uniform(2), 4, OccupancyStrategy::Lexicographic).unwrap();
        assert_eq!(p.boxes().len(), 4);
        for b in p.boxes() {
            assert!((b.measure - 0.25).abs() < 1e-15);
        }
        assert!((p.avg_diameter() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(p.avg_diameter() < p.diameter_bound());
        assert_eq!(p.diameter_bound(), 2.0);
    }

    #[test]
    fn thirds_meet_the_bound_with_equality() {
        let p = build_box_partition(&CubeMeasure::uniform(1), 3, OccupancyStrategy::Lexicographic).unwrap();
        let c = p.checks();
        assert!((c.avg_diameter - 1.0 / 3.0).abs() < 1e-15);
        assert!(c.bound_holds);
    }

    #[test]
    fn product_density_splits_at_root_half() {
        let m = CubeMeasure::power_product(2, 1.0);
        let p = build_box_partition(&m, 4, OccupancyStrategy::Lexicographic).unwrap();
        assert!((p.splits(0)[0].breakpoints()[1] - 0.5f64.sqrt()).abs() < 1e-15);
        for s in p.splits(1) {
            assert!((s.breakpoints()[1] - 0.5f64.sqrt()).abs() < 1e-15);
        }
        let c = p.verify(1e-12).unwrap();
        assert!(c.equal_measure_defect < 1e-15);
    }

    #[test]
    fn unoccupied_cells_get_degenerate_splits() {
        let p = build_box_partition(&CubeMeasure::uniform(2), 3, OccupancyStrategy::Lexicographic).unwrap();
        // Row 1 holds one box, so its second column is the degenerate remainder.
        let row1 = &p.splits(1)[1];
        assert_eq!(row1.breakpoints(), &[0.0, 1.0, 1.0]);
        let c = p.checks();
        assert!(c.level_measure_defect < 1e-15 && c.equal_measure_defect < 1e-15);
    }

    #[test]
    fn locate_finds_the_box() {
        let p = build_box_partition(&CubeMeasure::uniform(3), 20, OccupancyStrategy::Balanced).unwrap();
        for (i, b) in p.boxes().iter().enumerate() {
            assert_eq!(p.locate(&b.center()), Some(i));
        }
    }

    #[test]
    fn custom_density_uses_quadrature() {
        fn tent(z: &[f64]) -> f64 {
            1.0 + z[0] - z[1]
        }
        let c = crate::spaces::CustomDensity::new("tent", 2, tent, 2.0).unwrap();
        let p = build_box_partition(&CubeMeasure::Custom(c), 6, OccupancyStrategy::Lexicographic).unwrap();
        assert!(p.checks().equal_measure_defect < 1e-9);
    }

    #[test]
    fn piecewise_linear_axis_with_plateau() {
        let axis = AxisDensity::piecewise_linear(vec![(0.0, 0.0), (0.4, 0.5), (0.6, 0.5), (1.0, 1.0)]).unwrap();
        let p = build_box_partition(&CubeMeasure::product(vec![axis]), 2, OccupancyStrategy::Lexicographic).unwrap();
        assert_eq!(p.splits(0)[0].breakpoints(), &[0.0, 0.6, 1.0]);
        assert!(p.checks().equal_measure_defect < 1e-15);
    }
}
