//! The circle of circumference one with the geodesic metric.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, One, Signed};
use rand::Rng;

use super::{
    ClosedFormKernels, CubeMeasure, Lipschitz, MeasureKind, MetricMeasureSpace, RadialMeasure, RadiiSet,
    Rectifiable, RectifiableChart, Support,
};
use crate::numeric::{Estimate, NeumaierSum};
use crate::{Error, Rational, Result};

/// `ℝ/ℤ` with `ρ(x, y) = min(|x − y|, 1 − |x − y|)`; points in `[0, 1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Circle;

fn wrap(x: f64) -> f64 {
    let w = x - Float::floor(x);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

impl Circle {
    pub fn new() -> Self {
        Circle
    }

    /// Geodesic distance of two rational points of `[0, 1)`.
    pub fn distance_exact(x: &Rational, y: &Rational) -> Rational {
        let d = (x - y).abs();
        let other = Rational::one() - &d;
        if d <= other {
            d
        } else {
            other
        }
    }

    /// `N` equally spaced points `offset + i/N`.
    pub fn equally_spaced(n: usize, offset: f64) -> Vec<f64> {
        (0..n).map(|i| wrap(offset + i as f64 / n as f64)).collect()
    }

    fn volume(r: f64) -> f64 {
        (2.0 * r).min(1.0)
    }

    /// Breakpoints in `r` of everything piecewise-polynomial built from
    /// the arcs `[x_i − r, x_i + r]`.
    fn radius_breakpoints(points: &[f64]) -> Vec<f64> {
        let mut b = vec![0.0, 0.5];
        for (i, &x) in points.iter().enumerate() {
            for (j, &y) in points.iter().enumerate() {
                if i != j {
                    b.push(0.5 * wrap(y - x));
                }
            }
        }
        b.sort_by(|a, b| a.total_cmp(b));
        b.dedup();
        b
    }

    /// Pieces `(length, count)` of the counting function
    /// `y ↦ #{i : ρ(x_i, y) ≤ r}` on `[0, 1)`.
    fn count_pieces(points: &[f64], r: f64) -> Vec<(f64, usize)> {
        let n = points.len();
        if 2.0 * r >= 1.0 {
            return vec![(1.0, n)];
        }
        let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * n);
        let mut count0: i64 = 0;
        for &x in points {
            let s = wrap(x - r);
            let e = wrap(x + r);
            let wraps = s > e;
            if (wraps && e > 0.0) || (!wraps && s == 0.0) {
                count0 += 1;
            }
            if s > 0.0 {
                events.push((s, 1));
            }
            if e > 0.0 {
                events.push((e, -1));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pieces = Vec::with_capacity(events.len() + 1);
        let mut pos = 0.0;
        let mut count = count0;
        for (at, delta) in events {
            if at > pos {
                pieces.push((at - pos, count.max(0) as usize));
                pos = at;
            }
            count += delta;
        }
        if pos < 1.0 {
            pieces.push((1.0 - pos, count.max(0) as usize));
        }
        pieces
    }

    /// `∫ |g(y)| dy` over `[0, 1)` for `g` linear between consecutive `breaks`.
    fn integrate_abs_piecewise_linear<F: Fn(f64) -> f64>(g: F, breaks: &mut Vec<f64>) -> f64 {
        breaks.push(0.0);
        breaks.push(1.0);
        breaks.sort_by(|a, b| a.total_cmp(b));
        breaks.dedup();
        let mut acc = NeumaierSum::new();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let len = b - a;
            if !(len > 0.0) {
                continue;
            }
            let g1 = g(a + 0.25 * len);
            let g3 = g(a + 0.75 * len);
            let ga = 1.5 * g1 - 0.5 * g3;
            let gb = 1.5 * g3 - 0.5 * g1;
            if ga * gb >= 0.0 {
                acc.add(0.5 * (ga.abs() + gb.abs()) * len);
            } else {
                acc.add(len * (ga * ga + gb * gb) / (2.0 * (ga.abs() + gb.abs())));
            }
        }
        acc.value()
    }
}

impl MetricMeasureSpace for Circle {
    type Point = f64;

    fn id(&self) -> String {
        String::from("circle")
    }

    fn dim(&self) -> usize {
        1
    }

    fn diameter(&self) -> f64 {
        0.5
    }

    fn radii(&self) -> RadiiSet {
        RadiiSet::Interval { max: 0.5 }
    }

    fn measure_kind(&self) -> MeasureKind {
        MeasureKind::ClosedForm
    }

    fn check_point(&self, p: &f64) -> Result<()> {
        if p.is_finite() && (0.0..1.0).contains(p) {
            Ok(())
        } else {
            Err(Error::Domain { space: self.id(), detail: format!("{p} not in [0, 1)") })
        }
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        let d = (x - y).abs();
        d.min(1.0 - d)
    }

    fn ball_volume_unchecked(&self, _y: &f64, r: f64) -> Estimate {
        Estimate::closed_form(Self::volume(r))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        wrap(rng.random::<f64>())
    }

    fn is_distance_invariant(&self) -> bool {
        true
    }

    fn volume_profile(&self, r: f64) -> Option<f64> {
        Some(Self::volume(r))
    }

    fn mean_distance_closed_form(&self) -> Option<f64> {
        Some(0.25)
    }

    fn closed_form_kernels(&self) -> Option<&dyn ClosedFormKernels<f64>> {
        Some(self)
    }

    fn coords(&self, p: &f64) -> Vec<f64> {
        vec![*p]
    }

    fn point_from_coords(&self, c: &[f64]) -> Result<f64> {
        match c {
            [x] => {
                self.check_point(x)?;
                Ok(*x)
            }
            _ => Err(Error::Domain { space: self.id(), detail: format!("expected 1 coordinate, got {}", c.len()) }),
        }
    }
}

impl ClosedFormKernels<f64> for Circle {
    fn symdiff_r(&self, y1: &f64, y2: &f64, r: f64) -> f64 {
        if 2.0 * r >= 1.0 {
            return 0.0;
        }
        let delta = self.distance(y1, y2);
        let len = 2.0 * r;
        let overlap = ((len - delta).max(0.0) + (len - (1.0 - delta)).max(0.0)).min(len);
        (2.0 * (len - overlap)).max(0.0)
    }

    fn symdiff_xi_direct(&self, xi: &RadialMeasure, y1: &f64, y2: &f64) -> f64 {
        let delta = self.distance(y1, y2);
        xi.integrate_piecewise(|r| self.symdiff_r(y1, y2, r), &[0.5 * delta, 0.5 * (1.0 - delta), 0.5])
    }

    fn symdiff_xi_sigma(&self, xi: &RadialMeasure, y1: &f64, y2: &f64) -> f64 {
        let mut breaks = vec![*y1, wrap(y1 + 0.5), *y2, wrap(y2 + 0.5)];
        for k in xi.breakpoints() {
            for y in [y1, y2] {
                breaks.push(wrap(y + k));
                breaks.push(wrap(y - k));
            }
        }
        let g = |y: f64| xi.sigma_unchecked(self.distance(y1, &y)) - xi.sigma_unchecked(self.distance(y2, &y));
        Self::integrate_abs_piecewise_linear(g, &mut breaks)
    }

    fn lambda_r(&self, points: &[f64], r: f64) -> f64 {
        let n = points.len() as f64;
        let nv = n * Self::volume(r);
        Self::count_pieces(points, r)
            .into_iter()
            .map(|(len, c)| {
                let lam = c as f64 - nv;
                len * lam * lam
            })
            .collect::<NeumaierSum>()
            .value()
    }

    fn lambda_xi(&self, points: &[f64], xi: &RadialMeasure) -> f64 {
        let breaks = Self::radius_breakpoints(points);
        xi.integrate_piecewise(|r| self.lambda_r(points, r), &breaks)
    }

    fn mean_symdiff_xi(&self, xi: &RadialMeasure) -> f64 {
        xi.integrate_piecewise(
            |r| {
                let v = Self::volume(r);
                2.0 * (v - v * v)
            },
            &[0.5],
        )
    }
}

impl Rectifiable for Circle {
    fn chart(&self) -> RectifiableChart {
        RectifiableChart {
            domain_dim: 1,
            support: Support::UnitCube,
            lipschitz: Lipschitz::Declared(1.0),
            base_measure: CubeMeasure::uniform(1),
        }
    }

    fn chart_map(&self, z: &[f64]) -> f64 {
        wrap(z[0])
    }

    fn chart_inverse(&self, p: &f64) -> Vec<f64> {
        vec![*p]
    }

    fn box_image_diameter(&self, lo: &[f64], hi: &[f64]) -> Option<f64> {
        Some((hi[0] - lo[0]).clamp(0.0, 0.5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraparound_distance() {
        assert!((Circle.distance(&0.1, &0.9) - 0.2).abs() < 1e-15);
        assert_eq!(Circle.distance(&0.3, &0.3), 0.0);
    }

    #[test]
    fn symdiff_of_disjoint_arcs() {
        assert!((Circle.symdiff_r(&0.0, &0.3, 0.1) - 0.4).abs() < 1e-15);
        assert_eq!(Circle.symdiff_r(&0.2, &0.2, 0.1), 0.0);
    }

    #[test]
    fn count_pieces_cover_the_circle() {
        let pts = [0.0, 0.5, 0.95];
        let pieces = Circle::count_pieces(&pts, 0.1);
        let total: f64 = pieces.iter().map(|p| p.0).sum();
        assert!((total - 1.0).abs() < 1e-15);
        let mass: f64 = pieces.iter().map(|p| p.0 * p.1 as f64).sum();
        assert!((mass - 3.0 * 0.2).abs() < 1e-14);
    }

    #[test]
    fn lambda_r_two_antipodal_points() {
        // Λ(y) = 1 − 0.4 on two arcs of length 0.2 each, −0.4 elsewhere.
        let v = Circle.lambda_r(&[0.0, 0.5], 0.1);
        let expected = 0.4 * 0.6 * 0.6 + 0.6 * 0.4 * 0.4;
        assert!((v - expected).abs() < 1e-15);
    }
}
