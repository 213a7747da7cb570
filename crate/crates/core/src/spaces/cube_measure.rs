//! Absolutely continuous probability measures `ν` on the unit cube `I^d`.

use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::numeric::adaptive_gk15;
use crate::{Error, Result};

const QUAD_ABS_TOL: f64 = 1e-13;
const QUAD_REL_TOL: f64 = 1e-10;
const MIN_ACCEPTANCE: f64 = 1e-3;

/// A one-dimensional probability density on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisDensity {
    Uniform,
    /// `(p + 1) z^p`, CDF `z^{p+1}`.
    Power { exponent: f64 },
    /// CDF interpolating the sorted `(z, F(z))` knots linearly, from `(0, 0)` to `(1, 1)`.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

impl AxisDensity {
    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 || knots[0] != (0.0, 0.0) || knots[knots.len() - 1] != (1.0, 1.0) {
            return Err(Error::argument("piecewise-linear CDF must run from (0,0) to (1,1)"));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) || !(w[1].1 >= w[0].1) {
                return Err(Error::argument(
                    "piecewise-linear CDF knots must be strictly increasing in z and non-decreasing in F",
                ));
            }
        }
        Ok(AxisDensity::PiecewiseLinear { knots })
    }

    pub fn label(&self) -> String {
        match self {
            AxisDensity::Uniform => String::from("uniform"),
            AxisDensity::Power { exponent } => format!("power{exponent}"),
            AxisDensity::PiecewiseLinear { knots } => format!("pwl{}", knots.len()),
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        let z = z.clamp(0.0, 1.0);
        match self {
            AxisDensity::Uniform => z,
            AxisDensity::Power { exponent } => z.powf(exponent + 1.0),
            AxisDensity::PiecewiseLinear { knots } => {
                for w in knots.windows(2) {
                    let ((z0, f0), (z1, f1)) = (w[0], w[1]);
                    if z <= z1 {
                        return f0 + (f1 - f0) * (z - z0) / (z1 - z0);
                    }
                }
                1.0
            }
        }
    }

    pub fn density(&self, z: f64) -> f64 {
        if !(0.0..=1.0).contains(&z) {
            return 0.0;
        }
        match self {
            AxisDensity::Uniform => 1.0,
            AxisDensity::Power { exponent } => (exponent + 1.0) * z.powf(*exponent),
            AxisDensity::PiecewiseLinear { knots } => {
                for w in knots.windows(2) {
                    let ((z0, f0), (z1, f1)) = (w[0], w[1]);
                    if z <= z1 {
                        return (f1 - f0) / (z1 - z0);
                    }
                }
                0.0
            }
        }
    }

    /// Rightmost `z` with `F(z) = u`.
    pub fn inverse(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            AxisDensity::Uniform => u,
            AxisDensity::Power { exponent } => u.powf(1.0 / (exponent + 1.0)),
            AxisDensity::PiecewiseLinear { knots } => {
                for w in knots.windows(2).rev() {
                    let ((z0, f0), (z1, f1)) = (w[0], w[1]);
                    if u >= f0 {
                        if f1 == f0 {
                            return z1;
                        }
                        if u <= f1 {
                            return z0 + (z1 - z0) * (u - f0) / (f1 - f0);
                        }
                    }
                }
                0.0
            }
        }
    }

    /// Has a closed-form inverse that honours the rightmost-preimage convention.
    pub fn has_exact_inverse(&self) -> bool {
        match self {
            AxisDensity::Uniform | AxisDensity::PiecewiseLinear { .. } => true,
            AxisDensity::Power { exponent } => *exponent >= 0.0,
        }
    }
}

/// A user-supplied density on `I^d`, bounded by `sup`.
#[derive(Debug, Clone)]
pub struct CustomDensity {
    name: String,
    dim: usize,
    density: fn(&[f64]) -> f64,
    sup: f64,
    mass: f64,
}

impl PartialEq for CustomDensity {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.dim == other.dim && self.sup == other.sup
    }
}

impl CustomDensity {
    /// Normalizes `density` numerically; `sup` must bound the raw density.
    pub fn new(name: impl Into<String>, dim: usize, density: fn(&[f64]) -> f64, sup: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::argument("custom densities are supported for d in 1..=3"));
        }
        if !(sup > 0.0) {
            return Err(Error::argument("density bound must be positive"));
        }
        let mut d = CustomDensity { name: name.into(), dim, density, sup, mass: 1.0 };
        let lo = vec![0.0; dim];
        let hi = vec![1.0; dim];
        let mass = d.raw_box_integral(&lo, &hi);
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::argument("custom density must have positive finite mass"));
        }
        d.mass = mass;
        Ok(d)
    }

    fn raw_box_integral(&self, lo: &[f64], hi: &[f64]) -> f64 {
        nested_box_integral(self.density, lo, hi, &[])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        (self.density)(z) / self.mass
    }

    pub fn sup(&self) -> f64 {
        self.sup / self.mass
    }
}

fn nested_box_integral(f: fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], prefix: &[f64]) -> f64 {
    let axis = prefix.len();
    if !(hi[axis] > lo[axis]) {
        return 0.0;
    }
    adaptive_gk15(
        |t| {
            let mut z = prefix.to_vec();
            z.push(t);
            if z.len() == lo.len() {
                f(&z)
            } else {
                nested_box_integral(f, lo, hi, &z)
            }
        },
        lo[axis],
        hi[axis],
        QUAD_ABS_TOL,
        QUAD_REL_TOL,
    )
    .value
}

/// The base measure `ν` of a chart.
#[derive(Debug, Clone, PartialEq)]
pub enum CubeMeasure {
    Uniform { dim: usize },
    Product { axes: Vec<AxisDensity> },
    Custom(CustomDensity),
}

impl CubeMeasure {
    pub fn uniform(dim: usize) -> Self {
        CubeMeasure::Uniform { dim }
    }

    pub fn product(axes: Vec<AxisDensity>) -> Self {
        CubeMeasure::Product { axes }
    }

    /// Density `(p+1)^d Π z_i^p`; `p = 1, d = 2` gives `4 z₁ z₂`.
    pub fn power_product(dim: usize, exponent: f64) -> Self {
        CubeMeasure::Product { axes: vec![AxisDensity::Power { exponent }; dim] }
    }

    pub fn dim(&self) -> usize {
        match self {
            CubeMeasure::Uniform { dim } => *dim,
            CubeMeasure::Product { axes } => axes.len(),
            CubeMeasure::Custom(c) => c.dim,
        }
    }

    pub fn label(&self) -> String {
        match self {
            CubeMeasure::Uniform { .. } => String::from("uniform"),
            CubeMeasure::Product { axes } => {
                let parts: Vec<String> = axes.iter().map(AxisDensity::label).collect();
                format!("product({})", parts.join(","))
            }
            CubeMeasure::Custom(c) => format!("custom({})", c.name),
        }
    }

    pub fn is_uniform(&self) -> bool {
        match self {
            CubeMeasure::Uniform { .. } => true,
            CubeMeasure::Product { axes } => axes.iter().all(|a| *a == AxisDensity::Uniform),
            CubeMeasure::Custom(_) => false,
        }
    }

    /// Per-axis densities when `ν` is a product measure.
    pub fn axes(&self) -> Option<Vec<AxisDensity>> {
        match self {
            CubeMeasure::Uniform { dim } => Some(vec![AxisDensity::Uniform; *dim]),
            CubeMeasure::Product { axes } => Some(axes.clone()),
            CubeMeasure::Custom(_) => None,
        }
    }

    pub fn density(&self, z: &[f64]) -> f64 {
        if z.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return 0.0;
        }
        match self {
            CubeMeasure::Uniform { .. } => 1.0,
            CubeMeasure::Product { axes } => axes.iter().zip(z).map(|(a, &x)| a.density(x)).product(),
            CubeMeasure::Custom(c) => c.value(z),
        }
    }

    /// `ν([lo₁, hi₁] × … × [lo_d, hi_d])`.
    pub fn box_measure(&self, lo: &[f64], hi: &[f64]) -> f64 {
        match self {
            CubeMeasure::Uniform { .. } => lo.iter().zip(hi).map(|(a, b)| (b - a).max(0.0)).product(),
            CubeMeasure::Product { axes } => axes
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(ax, (&a, &b))| (ax.cdf(b) - ax.cdf(a)).max(0.0))
                .product(),
            CubeMeasure::Custom(c) => c.raw_box_integral(lo, hi) / c.mass,
        }
    }

    /// Draws a point from `ν`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let d = self.dim();
        self.sample_in_box(&vec![0.0; d], &vec![1.0; d], rng)
            .expect("whole cube has positive mass")
    }

    /// Draws from `ν` restricted to a box and renormalized.
    ///
    /// Product measures invert the per-axis CDFs; custom densities use
    /// rejection from the uniform distribution on the box.
    pub fn sample_in_box<R: Rng + ?Sized>(&self, lo: &[f64], hi: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        match self {
            CubeMeasure::Uniform { .. } => Ok(lo
                .iter()
                .zip(hi)
                .map(|(&a, &b)| a + (b - a) * rng.random::<f64>())
                .collect()),
            CubeMeasure::Product { axes } => Ok(axes
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(ax, (&a, &b))| {
                    let (fa, fb) = (ax.cdf(a), ax.cdf(b));
                    if fb > fa {
                        ax.inverse(fa + (fb - fa) * rng.random::<f64>()).clamp(a, b)
                    } else {
                        a + (b - a) * rng.random::<f64>()
                    }
                })
                .collect()),
            CubeMeasure::Custom(c) => {
                let budget = (16.0 / MIN_ACCEPTANCE) as usize;
                let sup = c.sup();
                for _ in 0..budget {
                    let z: Vec<f64> = lo.iter().zip(hi).map(|(&a, &b)| a + (b - a) * rng.random::<f64>()).collect();
                    if rng.random::<f64>() * sup <= c.value(&z) {
                        return Ok(z);
                    }
                }
                Err(Error::SamplerDegenerate { rate: 1.0 / budget as f64, min: MIN_ACCEPTANCE })
            }
        }
    }

    /// Expected acceptance rate of the rejection sampler on a box.
    pub fn acceptance_rate(&self, lo: &[f64], hi: &[f64]) -> f64 {
        match self {
            CubeMeasure::Custom(c) => {
                let vol: f64 = lo.iter().zip(hi).map(|(a, b)| (b - a).max(0.0)).product();
                if vol <= 0.0 {
                    return 0.0;
                }
                self.box_measure(lo, hi) / (vol * c.sup())
            }
            _ => 1.0,
        }
    }

    /// `ν(B_r(c) ∩ I^d)` for the Euclidean ball.
    pub fn euclidean_ball_mass(&self, center: &[f64], r: f64) -> f64 {
        ball_mass_rec(self, center, r, &[])
    }
}

fn ball_mass_rec(m: &CubeMeasure, c: &[f64], r: f64, prefix: &[f64]) -> f64 {
    let axis = prefix.len();
    let d = c.len();
    if r < 0.0 {
        return 0.0;
    }
    let lo = (c[axis] - r).max(0.0);
    let hi = (c[axis] + r).min(1.0);
    if !(hi > lo) {
        return 0.0;
    }
    if axis + 1 == d {
        return match m {
            CubeMeasure::Uniform { .. } => hi - lo,
            CubeMeasure::Product { axes } => axes[axis].cdf(hi) - axes[axis].cdf(lo),
            CubeMeasure::Custom(cd) => {
                adaptive_gk15(
                    |t| {
                        let mut z = prefix.to_vec();
                        z.push(t);
                        cd.value(&z)
                    },
                    lo,
                    hi,
                    QUAD_ABS_TOL,
                    QUAD_REL_TOL,
                )
                .value
            }
        };
    }
    if axis + 2 == d && m.is_uniform() {
        return super::geometry::disk_rect_area(c[axis], c[axis + 1], r, 0.0, 1.0, 0.0, 1.0);
    }
    let weight = |t: f64| match m {
        CubeMeasure::Uniform { .. } | CubeMeasure::Custom(_) => 1.0,
        CubeMeasure::Product { axes } => axes[axis].density(t),
    };
    let mut split = vec![lo];
    if c[axis] > lo && c[axis] < hi {
        split.push(c[axis]);
    }
    split.push(hi);
    split
        .windows(2)
        .map(|w| {
            adaptive_gk15(
                |t| {
                    let rr = (r * r - (t - c[axis]) * (t - c[axis])).max(0.0).sqrt();
                    let mut z = prefix.to_vec();
                    z.push(t);
                    weight(t) * ball_mass_rec(m, c, rr, &z)
                },
                w[0],
                w[1],
                QUAD_ABS_TOL,
                QUAD_REL_TOL,
            )
            .value
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::stream_rng;

    #[test]
    fn power_axis_inverse() {
        let a = AxisDensity::Power { exponent: 1.0 };
        assert!((a.inverse(0.5) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((a.cdf(a.inverse(0.3)) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn plateau_inverse_takes_rightmost_point() {
        let a = AxisDensity::piecewise_linear(vec![(0.0, 0.0), (0.4, 0.5), (0.6, 0.5), (1.0, 1.0)]).unwrap();
        assert_eq!(a.inverse(0.5), 0.6);
        assert!((a.inverse(0.25) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn product_box_measure() {
        let m = CubeMeasure::power_product(2, 1.0);
        let v = m.box_measure(&[0.0, 0.0], &[0.5, 0.5]);
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    fn tilted(z: &[f64]) -> f64 {
        1.0 + z[0] * z[1]
    }

    #[test]
    fn custom_density_is_normalized() {
        let c = CustomDensity::new("tilted", 2, tilted, 2.0).unwrap();
        let m = CubeMeasure::Custom(c);
        assert!((m.box_measure(&[0.0, 0.0], &[1.0, 1.0]) - 1.0).abs() < 1e-10);
        let q = m.box_measure(&[0.0, 0.0], &[0.5, 0.5]);
        let exact = (0.25 + 1.0 / 64.0) / 1.25;
        assert!((q - exact).abs() < 1e-10);
        let mut rng = stream_rng(1, 0);
        let z = m.sample_in_box(&[0.2, 0.2], &[0.3, 0.4], &mut rng).unwrap();
        assert!(z[0] >= 0.2 && z[0] <= 0.3 && z[1] >= 0.2 && z[1] <= 0.4);
    }

    #[test]
    fn ball_mass_product_matches_grid() {
        let m = CubeMeasure::power_product(2, 1.0);
        let (c, r) = ([0.3, 0.6], 0.4);
        let v = m.euclidean_ball_mass(&c, r);
        let n = 1500;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = (i as f64 + 0.5) / n as f64;
                let y = (j as f64 + 0.5) / n as f64;
                if (x - c[0]).powi(2) + (y - c[1]).powi(2) <= r * r {
                    acc += 4.0 * x * y;
                }
            }
        }
        assert!((v - acc / (n * n) as f64).abs() < 2e-4);
    }
}
