//! Flat tori `ℝ^d / ℤ^d` with the quotient Euclidean metric.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use super::geometry::disk_rect_area;
use super::{CubeMeasure, Lipschitz, MeasureKind, MetricMeasureSpace, RadiiSet, Rectifiable, RectifiableChart, Support};
use crate::numeric::{adaptive_gk15, Estimate};
use crate::{Error, Result};

/// The flat torus of dimension `D ∈ {1, 2, 3}`; points in `[0, 1)^D`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Torus<const D: usize>;

fn wrap(x: f64) -> f64 {
    let w = x - Float::floor(x);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

impl<const D: usize> Torus<D> {
    pub fn new() -> Self {
        assert!((1..=3).contains(&D), "torus dimension must be 1, 2 or 3");
        Torus
    }

    /// Volume of `{x ∈ [−½, ½]^D : ‖x‖ ≤ r}`.
    pub fn volume(r: f64) -> f64 {
        match D {
            1 => (2.0 * r).min(1.0),
            2 => disk_rect_area(0.5, 0.5, r, 0.0, 1.0, 0.0, 1.0),
            _ => {
                let h = r.min(0.5);
                if h <= 0.0 {
                    return 0.0;
                }
                let slice = |t: f64| disk_rect_area(0.5, 0.5, (r * r - t * t).max(0.0).sqrt(), 0.0, 1.0, 0.0, 1.0);
                2.0 * adaptive_gk15(slice, 0.0, h, 1e-14, 1e-12).value
            }
        }
    }
}

impl<const D: usize> MetricMeasureSpace for Torus<D> {
    type Point = [f64; D];

    fn id(&self) -> String {
        format!("torus{D}")
    }

    fn dim(&self) -> usize {
        D
    }

    fn diameter(&self) -> f64 {
        (D as f64).sqrt() / 2.0
    }

    fn radii(&self) -> RadiiSet {
        RadiiSet::Interval { max: self.diameter() }
    }

    fn measure_kind(&self) -> MeasureKind {
        if D <= 2 {
            MeasureKind::ClosedForm
        } else {
            MeasureKind::Quadrature
        }
    }

    fn check_point(&self, p: &[f64; D]) -> Result<()> {
        if p.iter().all(|x| x.is_finite() && (0.0..1.0).contains(x)) {
            Ok(())
        } else {
            Err(Error::Domain { space: self.id(), detail: format!("{p:?} not in [0, 1)^{D}") })
        }
    }

    fn distance(&self, x: &[f64; D], y: &[f64; D]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(a, b)| {
                let d = (a - b).abs();
                let d = d.min(1.0 - d);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    fn ball_volume_unchecked(&self, _y: &[f64; D], r: f64) -> Estimate {
        let v = Self::volume(r);
        if D <= 2 {
            Estimate::closed_form(v)
        } else {
            Estimate::quadrature(v, 1e-12)
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; D] {
        core::array::from_fn(|_| wrap(rng.random::<f64>()))
    }

    fn is_distance_invariant(&self) -> bool {
        true
    }

    fn volume_profile(&self, r: f64) -> Option<f64> {
        Some(Self::volume(r))
    }

    fn mean_distance_closed_form(&self) -> Option<f64> {
        let sqrt2 = core::f64::consts::SQRT_2;
        let sqrt3 = 3f64.sqrt();
        match D {
            1 => Some(0.25),
            2 => Some((sqrt2 + (1.0 + sqrt2).ln()) / 6.0),
            // Half the mean distance from the centre of [−1, 1]³.
            3 => Some((sqrt3 / 4.0 + (2.0 + sqrt3).ln() / 2.0 - core::f64::consts::PI / 24.0) / 2.0),
            _ => None,
        }
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

impl<const D: usize> Rectifiable for Torus<D> {
    fn chart(&self) -> RectifiableChart {
        RectifiableChart {
            domain_dim: D,
            support: Support::UnitCube,
            lipschitz: Lipschitz::Declared(1.0),
            base_measure: CubeMeasure::uniform(D),
        }
    }

    fn chart_map(&self, z: &[f64]) -> [f64; D] {
        core::array::from_fn(|i| wrap(z[i]))
    }

    fn chart_inverse(&self, p: &[f64; D]) -> Vec<f64> {
        p.to_vec()
    }

    fn box_image_diameter(&self, lo: &[f64], hi: &[f64]) -> Option<f64> {
        Some(
            lo.iter()
                .zip(hi)
                .map(|(a, b)| {
                    let l = (b - a).clamp(0.0, 0.5);
                    l * l
                })
                .sum::<f64>()
                .sqrt(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinatewise_wrap() {
        let t = Torus::<2>::new();
        assert!((t.distance(&[0.9, 0.0], &[0.1, 0.0]) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn volumes_reach_one_at_the_diameter() {
        assert!((Torus::<1>::volume(0.5) - 1.0).abs() < 1e-15);
        assert!((Torus::<2>::volume(Torus::<2>::new().diameter()) - 1.0).abs() < 1e-12);
        assert!((Torus::<3>::volume(Torus::<3>::new().diameter()) - 1.0).abs() < 1e-9);
        let r = 0.3;
        assert!((Torus::<3>::volume(r) - 4.0 / 3.0 * core::f64::consts::PI * r * r * r).abs() < 1e-11);
    }
}
