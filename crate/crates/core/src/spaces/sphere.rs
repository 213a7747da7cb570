//! The unit sphere `S²` with the geodesic metric and normalized area, charted
//! by the Lambert cylindrical equal-area map.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use core::f64::consts::PI;
use num_traits::Float;
use rand::Rng;

use super::{CubeMeasure, Lipschitz, MeasureKind, MetricMeasureSpace, RadiiSet, Rectifiable, RectifiableChart, Support};
use crate::numeric::Estimate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sphere;

impl Sphere {
    pub fn new() -> Self {
        Sphere
    }

    /// Lambert map `(u, v) ↦ (φ = 2πu, z = 2v − 1)`.
    pub fn lambert(u: f64, v: f64) -> [f64; 3] {
        let z = (2.0 * v - 1.0).clamp(-1.0, 1.0);
        let s = (1.0 - z * z).max(0.0).sqrt();
        let phi = 2.0 * PI * u;
        [s * phi.cos(), s * phi.sin(), z]
    }
}

impl MetricMeasureSpace for Sphere {
    type Point = [f64; 3];

    fn id(&self) -> String {
        String::from("sphere")
    }

    fn dim(&self) -> usize {
        2
    }

    fn diameter(&self) -> f64 {
        PI
    }

    fn radii(&self) -> RadiiSet {
        RadiiSet::Interval { max: PI }
    }

    fn measure_kind(&self) -> MeasureKind {
        MeasureKind::ClosedForm
    }

    fn check_point(&self, p: &[f64; 3]) -> Result<()> {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if n.is_finite() && (n - 1.0).abs() <= 1e-9 {
            Ok(())
        } else {
            Err(Error::Domain { space: self.id(), detail: format!("{p:?} has norm {n}") })
        }
    }

    fn distance(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        // atan2 form stays accurate for nearly equal and nearly antipodal points.
        let cross = [
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        ];
        let c = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        let d = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
        c.atan2(d)
    }

    fn ball_volume_unchecked(&self, _y: &[f64; 3], r: f64) -> Estimate {
        Estimate::closed_form((1.0 - r.cos()) / 2.0)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        Self::lambert(rng.random::<f64>(), rng.random::<f64>())
    }

    fn is_distance_invariant(&self) -> bool {
        true
    }

    fn volume_profile(&self, r: f64) -> Option<f64> {
        Some((1.0 - r.cos()) / 2.0)
    }

    fn mean_distance_closed_form(&self) -> Option<f64> {
        Some(PI / 2.0)
    }

    fn coords(&self, p: &[f64; 3]) -> Vec<f64> {
        p.to_vec()
    }

    fn point_from_coords(&self, c: &[f64]) -> Result<[f64; 3]> {
        let p: [f64; 3] = c.try_into().map_err(|_| Error::Domain {
            space: self.id(),
            detail: format!("expected 3 coordinates, got {}", c.len()),
        })?;
        self.check_point(&p)?;
        Ok(p)
    }
}

impl Rectifiable for Sphere {
    fn chart(&self) -> RectifiableChart {
        RectifiableChart {
            domain_dim: 2,
            support: Support::UnitCube,
            lipschitz: Lipschitz::Empirical,
            base_measure: CubeMeasure::uniform(2),
        }
    }

    fn chart_map(&self, z: &[f64]) -> [f64; 3] {
        Self::lambert(z[0], z[1])
    }

    fn chart_inverse(&self, p: &[f64; 3]) -> Vec<f64> {
        let u = p[1].atan2(p[0]) / (2.0 * PI);
        let u = u - Float::floor(u);
        let u = if u >= 1.0 { 0.0 } else { u };
        alloc::vec![u, ((p[2] + 1.0) / 2.0).clamp(0.0, 1.0)]
    }
}
