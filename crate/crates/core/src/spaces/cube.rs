//! The unit cube with the Euclidean metric and an absolutely continuous
//! measure. Not distance-invariant: balls near faces and corners are
//! clipped.

use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::{
    CubeMeasure, Lipschitz, MeasureKind, MetricMeasureSpace, RadialMeasure, RadiiSet, Rectifiable, RectifiableChart,
    Support,
};
use crate::numeric::{adaptive_gk15, Estimate};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanCube<const D: usize> {
    measure: CubeMeasure,
}

impl<const D: usize> EuclideanCube<D> {
    pub fn uniform() -> Self {
        EuclideanCube { measure: CubeMeasure::uniform(D) }
    }

    pub fn with_measure(measure: CubeMeasure) -> Result<Self> {
        if measure.dim() != D {
            return Err(Error::argument(format!("measure has dimension {}, cube has {D}", measure.dim())));
        }
        Ok(EuclideanCube { measure })
    }

    pub fn measure(&self) -> &CubeMeasure {
        &self.measure
    }

    /// `2∫∫ (v − v²) dξ dy` for the uniform measure and `D ≤ 2`, by nested
    /// adaptive quadrature over `[0, ½]^D` using the reflection symmetry.
    fn uniform_mean_symdiff(&self, xi: &RadialMeasure) -> (f64, f64) {
        let inner = |y: &[f64]| -> (f64, f64) {
            let mut breaks: Vec<f64> = Vec::with_capacity(8);
            for &c in y {
                breaks.push(c);
                breaks.push(1.0 - c);
            }
            if D == 2 {
                for a in [y[0], 1.0 - y[0]] {
                    for b in [y[1], 1.0 - y[1]] {
                        breaks.push((a * a + b * b).sqrt());
                    }
                }
            }
            xi.integrate_adaptive(
                |r| {
                    let v = self.measure.euclidean_ball_mass(y, r);
                    v - v * v
                },
                &breaks,
                1e-11,
            )
        };
        let mut err = 0.0;
        let total = match D {
            1 => adaptive_gk15(
                |t| {
                    let (v, e) = inner(&[t]);
                    err += e;
                    v
                },
                0.0,
                0.5,
                1e-13,
                1e-10,
            ),
            _ => adaptive_gk15(
                |s| {
                    adaptive_gk15(
                        |t| {
                            let (v, e) = inner(&[s, t]);
                            err += e;
                            v
                        },
                        0.0,
                        0.5,
                        1e-13,
                        1e-10,
                    )
                    .value
                },
                0.0,
                0.5,
                1e-12,
                1e-9,
            ),
        };
        let scale = 2.0 * (1u32 << D) as f64;
        (scale * total.value, scale * (total.error + 1e-10 * total.value.abs()))
    }
}

impl<const D: usize> MetricMeasureSpace for EuclideanCube<D> {
    type Point = [f64; D];

    fn id(&self) -> String {
        if self.measure.is_uniform() {
            format!("cube{D}")
        } else {
            format!("cube{D}[{}]", self.measure.label())
        }
    }

    fn dim(&self) -> usize {
        D
    }

    fn diameter(&self) -> f64 {
        (D as f64).sqrt()
    }

    fn radii(&self) -> RadiiSet {
        RadiiSet::Interval { max: self.diameter() }
    }

    fn measure_kind(&self) -> MeasureKind {
        if self.measure.is_uniform() && D <= 2 || matches!(self.measure, CubeMeasure::Product { .. }) && D == 1 {
            MeasureKind::ClosedForm
        } else {
            MeasureKind::Quadrature
        }
    }

    fn check_point(&self, p: &[f64; D]) -> Result<()> {
        if p.iter().all(|x| x.is_finite() && (0.0..=1.0).contains(x)) {
            Ok(())
        } else {
            Err(Error::Domain { space: self.id(), detail: format!("{p:?} not in [0, 1]^{D}") })
        }
    }

    fn distance(&self, x: &[f64; D], y: &[f64; D]) -> f64 {
        x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    fn ball_volume_unchecked(&self, y: &[f64; D], r: f64) -> Estimate {
        let v = self.measure.euclidean_ball_mass(y, r).clamp(0.0, 1.0);
        match self.measure_kind() {
            MeasureKind::ClosedForm => Estimate::closed_form(v),
            _ => Estimate::quadrature(v, 1e-10),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; D] {
        let z = self.measure.sample(rng);
        core::array::from_fn(|i| z[i])
    }

    fn mean_distance_closed_form(&self) -> Option<f64> {
        if !self.measure.is_uniform() {
            return None;
        }
        let sqrt2 = core::f64::consts::SQRT_2;
        let sqrt3 = 3f64.sqrt();
        match D {
            1 => Some(1.0 / 3.0),
            2 => Some((2.0 + sqrt2 + 5.0 * (1.0 + sqrt2).ln()) / 15.0),
            3 => Some(
                (4.0 + 17.0 * sqrt2 - 6.0 * sqrt3 - 7.0 * core::f64::consts::PI) / 105.0
                    + ((1.0 + sqrt2).ln() + 2.0 * (2.0 + sqrt3).ln()) / 5.0,
            ),
            _ => None,
        }
    }

    fn mean_symdiff_xi_quadrature(&self, xi: &RadialMeasure) -> Option<Estimate> {
        if !self.measure.is_uniform() || D > 2 {
            return None;
        }
        let (v, e) = self.uniform_mean_symdiff(xi);
        Some(Estimate::quadrature(v, e))
    }

    fn coords(&self, p: &[f64; D]) -> Vec<f64> {
        p.to_vec()
    }

    fn point_from_coords(&self, c: &[f64]) -> Result<[f64; D]> {
        let p: [f64; D] = c.try_into().map_err(|_| Error::Domain {
            space: self.id(),
            detail: format!("expected {D} coordinates, got {}", c.len()),
        })?;
        self.check_point(&p)?;
        Ok(p)
    }
}

impl<const D: usize> Rectifiable for EuclideanCube<D> {
    fn chart(&self) -> RectifiableChart {
        RectifiableChart {
            domain_dim: D,
            support: Support::UnitCube,
            lipschitz: Lipschitz::Declared(1.0),
            base_measure: self.measure.clone(),
        }
    }

    fn chart_map(&self, z: &[f64]) -> [f64; D] {
        core::array::from_fn(|i| z[i].clamp(0.0, 1.0))
    }

    fn chart_inverse(&self, p: &[f64; D]) -> Vec<f64> {
        p.to_vec()
    }

    fn box_image_diameter(&self, lo: &[f64], hi: &[f64]) -> Option<f64> {
        Some(lo.iter().zip(hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_and_centre_balls_differ() {
        let c = EuclideanCube::<2>::uniform();
        let centre = c.ball_volume_unchecked(&[0.5, 0.5], 0.25).value;
        let corner = c.ball_volume_unchecked(&[0.0, 0.0], 0.25).value;
        assert!((centre - core::f64::consts::PI / 16.0).abs() < 1e-14);
        assert!((corner - core::f64::consts::PI / 64.0).abs() < 1e-14);
    }

    #[test]
    fn mean_symdiff_of_the_unit_segment() {
        // v(y, r) = min(y + r, 1) − max(y − r, 0); ∫∫ 2(v − v²) dy dr over
        // r ∈ [0, 1] by an independent midpoint rule.
        let xi = RadialMeasure::lebesgue(1.0).unwrap();
        let got = EuclideanCube::<1>::uniform().mean_symdiff_xi_quadrature(&xi).unwrap();
        let m = 2000;
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                let (y, r) = ((i as f64 + 0.5) / m as f64, (j as f64 + 0.5) / m as f64);
                let v = (y + r).min(1.0) - (y - r).max(0.0);
                acc += 2.0 * (v - v * v);
            }
        }
        acc /= (m * m) as f64;
        assert!((got.value - acc).abs() < 1e-6, "{} vs {acc}", got.value);
    }

    #[test]
    fn uniform_cube3_ball_volume() {
        let c = EuclideanCube::<3>::uniform();
        let v = c.ball_volume_unchecked(&[0.5, 0.5, 0.5], 0.4).value;
        assert!((v - 4.0 / 3.0 * core::f64::consts::PI * 0.064).abs() < 1e-10);
        assert!((c.ball_volume_unchecked(&[0.0, 1.0, 0.0], 3f64.sqrt()).value - 1.0).abs() < 1e-9);
    }
}
