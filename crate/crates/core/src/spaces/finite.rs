//! Finite metric spaces with integer distances and rational point weights,
//! including the Hamming cubes `{0,1}^n`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{MeasureKind, MetricMeasureSpace, RadiiSet};
use crate::numeric::Estimate;
use crate::{Error, Rational, Result};

/// Largest Hamming dimension accepted by [`FiniteSpace::hamming`].
pub const MAX_HAMMING_BITS: usize = 10;

/// A finite metric-measure space. Points are indices `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    name: String,
    n: usize,
    dist: Vec<u32>,
    weights: Vec<Rational>,
    weights_f: Vec<f64>,
    cumulative: Vec<f64>,
    radii: Vec<u32>,
    // vol[y * radii.len() + k] = μ(B_{radii[k]}(y))
    vol: Vec<Rational>,
    vol_f: Vec<f64>,
    invariant: bool,
    hamming_bits: Option<usize>,
}

impl FiniteSpace {
    /// `{0,1}^n` with the Hamming metric and the uniform measure.
    pub fn hamming(bits: usize) -> Result<Self> {
        if bits == 0 || bits > MAX_HAMMING_BITS {
            return Err(Error::argument(format!("Hamming dimension must lie in 1..={MAX_HAMMING_BITS}, got {bits}")));
        }
        let n = 1usize << bits;
        let dist = (0..n * n).map(|k| ((k / n) ^ (k % n)).count_ones()).collect();
        let w = Rational::new(1.into(), n.into());
        let mut s = Self::build(format!("hamming{bits}"), n, dist, vec![w; n]);
        s.hamming_bits = Some(bits);
        Ok(s)
    }

    /// A finite space from a distance matrix and point weights.
    ///
    /// The metric axioms are checked exactly; weights must be non-negative
    /// and sum to one.
    pub fn from_distance_matrix(name: impl Into<String>, dist: Vec<Vec<u32>>, weights: Vec<Rational>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::argument("a finite space needs at least one point"));
        }
        if weights.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::argument("distance matrix must be square and match the weights"));
        }
        for i in 0..n {
            if dist[i][i] != 0 {
                return Err(Error::argument(format!("ρ({i},{i}) = {} is not zero", dist[i][i])));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::argument(format!("distance matrix not symmetric at ({i},{j})")));
                }
                if i != j && dist[i][j] == 0 {
                    return Err(Error::argument(format!("distinct points {i} and {j} at distance zero")));
                }
                for k in 0..n {
                    if dist[i][j] > dist[i][k] + dist[k][j] {
                        return Err(Error::argument(format!("triangle inequality fails for ({i},{k},{j})")));
                    }
                }
            }
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::argument("point weights must be non-negative"));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::argument(format!("point weights sum to {total}, not 1")));
        }
        let flat = dist.into_iter().flatten().collect();
        Ok(Self::build(name.into(), n, flat, weights))
    }

    /// `n` points with uniform weights.
    pub fn uniform_from_distance_matrix(name: impl Into<String>, dist: Vec<Vec<u32>>) -> Result<Self> {
        let n = dist.len();
        let w = Rational::new(1.into(), n.max(1).into());
        Self::from_distance_matrix(name, dist, vec![w; n])
    }

    fn build(name: String, n: usize, dist: Vec<u32>, weights: Vec<Rational>) -> Self {
        let weights_f: Vec<f64> = weights.iter().map(|w| w.to_f64().unwrap_or(0.0)).collect();
        let mut cumulative = Vec::with_capacity(n);
        let mut acc = 0.0;
        for w in &weights_f {
            acc += w;
            cumulative.push(acc);
        }
        let mut radii = dist.clone();
        radii.sort_unstable();
        radii.dedup();
        let t = radii.len();
        let mut vol = Vec::with_capacity(n * t);
        for y in 0..n {
            let mut by_radius = vec![Rational::zero(); t];
            for x in 0..n {
                let k = radii.binary_search(&dist[y * n + x]).unwrap_or(0);
                by_radius[k] += &weights[x];
            }
            let mut run = Rational::zero();
            for v in by_radius {
                run += v;
                vol.push(run.clone());
            }
        }
        let vol_f = vol.iter().map(|v| v.to_f64().unwrap_or(0.0)).collect();
        let invariant = (1..n).all(|y| vol[y * t..(y + 1) * t] == vol[..t]);
        FiniteSpace {
            name,
            n,
            dist,
            weights,
            weights_f,
            cumulative,
            radii,
            vol,
            vol_f,
            invariant,
            hamming_bits: None,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn hamming_bits(&self) -> Option<usize> {
        self.hamming_bits
    }

    /// Integer distance between two points.
    pub fn dist(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    pub fn weight_f64(&self, x: usize) -> f64 {
        self.weights_f[x]
    }

    /// The realized distances `T`, sorted.
    pub fn radii_u32(&self) -> &[u32] {
        &self.radii
    }

    /// Index into `T` of the largest realized distance `≤ r`, if any.
    pub fn radius_index(&self, r: f64) -> Option<usize> {
        let k = self.radii.partition_point(|&t| (t as f64) <= r);
        k.checked_sub(1)
    }

    /// As [`radius_index`](Self::radius_index) for a rational radius.
    pub fn radius_index_exact(&self, r: &Rational) -> Option<usize> {
        let k = self.radii.partition_point(|&t| Rational::from_integer(t.into()) <= *r);
        k.checked_sub(1)
    }

    /// `μ(B_r(y))` in exact arithmetic.
    pub fn ball_volume_exact(&self, y: usize, r: &Rational) -> Rational {
        match self.radius_index_exact(r) {
            Some(k) => self.vol[y * self.radii.len() + k].clone(),
            None => Rational::zero(),
        }
    }

    /// `μ(B_r(y))` for the radius `T[k]`.
    pub fn ball_volume_at(&self, y: usize, k: usize) -> &Rational {
        &self.vol[y * self.radii.len() + k]
    }

    fn ball_volume_f64(&self, y: usize, r: f64) -> f64 {
        match self.radius_index(r) {
            Some(k) => self.vol_f[y * self.radii.len() + k],
            None => 0.0,
        }
    }

    /// Exact `⟨ρ⟩ = Σ_x Σ_y w(x) w(y) ρ(x, y)`.
    pub fn mean_distance_exact(&self) -> Rational {
        let mut acc = Rational::zero();
        for x in 0..self.n {
            let mut row = Rational::zero();
            for y in 0..self.n {
                row += &self.weights[y] * Rational::from_integer(self.dist(x, y).into());
            }
            acc += &self.weights[x] * row;
        }
        acc
    }

    /// Largest deviation `|μ(B_r(y)) − μ(B_r(y₀))|` over all centres and `r ∈ T`.
    pub fn distance_invariance_defect(&self) -> Rational {
        let t = self.radii.len();
        let mut worst = Rational::zero();
        for y in 1..self.n {
            for k in 0..t {
                let d = (&self.vol[y * t + k] - &self.vol[k]).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

impl MetricMeasureSpace for FiniteSpace {
    type Point = usize;

    fn id(&self) -> String {
        self.name.clone()
    }

    fn dim(&self) -> usize {
        0
    }

    fn diameter(&self) -> f64 {
        self.radii.last().copied().unwrap_or(0) as f64
    }

    fn radii(&self) -> RadiiSet {
        RadiiSet::Finite(self.radii.iter().map(|&t| t as f64).collect())
    }

    fn measure_kind(&self) -> MeasureKind {
        MeasureKind::ExactFinite
    }

    fn check_point(&self, p: &usize) -> Result<()> {
        if *p < self.n {
            Ok(())
        } else {
            Err(Error::Domain { space: self.id(), detail: format!("index {p} >= {}", self.n) })
        }
    }

    fn distance(&self, x: &usize, y: &usize) -> f64 {
        self.dist(*x, *y) as f64
    }

    fn ball_volume_unchecked(&self, y: &usize, r: f64) -> Estimate {
        Estimate::exact(self.ball_volume_f64(*y, r))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.hamming_bits.is_some() {
            return rng.random_range(0..self.n);
        }
        let u = rng.random::<f64>() * self.cumulative[self.n - 1];
        self.cumulative.partition_point(|&c| c <= u).min(self.n - 1)
    }

    fn is_distance_invariant(&self) -> bool {
        self.invariant
    }

    fn volume_profile(&self, r: f64) -> Option<f64> {
        self.invariant.then(|| self.ball_volume_f64(0, r))
    }

    fn mean_distance_closed_form(&self) -> Option<f64> {
        self.hamming_bits.map(|b| b as f64 / 2.0)
    }

    fn enumerate(&self) -> Option<Vec<(usize, f64)>> {
        Some((0..self.n).map(|x| (x, self.weights_f[x])).collect())
    }

    fn coords(&self, p: &usize) -> Vec<f64> {
        match self.hamming_bits {
            Some(b) => (0..b).rev().map(|i| ((p >> i) & 1) as f64).collect(),
            None => vec![*p as f64],
        }
    }

    fn point_from_coords(&self, c: &[f64]) -> Result<usize> {
        let bad = || Error::Domain { space: self.id(), detail: format!("bad coordinates {c:?}") };
        let p = match self.hamming_bits {
            Some(b) => {
                if c.len() != b {
                    return Err(bad());
                }
                let mut p = 0usize;
                for &bit in c {
                    if bit != 0.0 && bit != 1.0 {
                        return Err(bad());
                    }
                    p = (p << 1) | bit as usize;
                }
                p
            }
            None => {
                if c.len() != 1 || c[0] < 0.0 || Float::fract(c[0]) != 0.0 {
                    return Err(bad());
                }
                c[0] as usize
            }
        };
        self.check_point(&p)?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn hamming_ball_volumes_are_binomial_sums() {
        let h = FiniteSpace::hamming(3).unwrap();
        assert_eq!(h.ball_volume_exact(5, &q(1, 1)), q(1, 2));
        assert_eq!(h.ball_volume_exact(0, &q(3, 2)), q(1, 2));
        assert_eq!(h.ball_volume_exact(0, &q(3, 1)), q(1, 1));
        assert_eq!(h.ball_volume_exact(0, &q(-1, 2)), q(0, 1));
        assert!(h.is_distance_invariant());
        assert!(h.distance_invariance_defect().is_zero());
        assert_eq!(h.radii(), RadiiSet::Finite(vec![0.0, 1.0, 2.0, 3.0]));
    }

    #[test]
    fn hamming_mean_distance_is_half_n() {
        for bits in 1..=4 {
            let h = FiniteSpace::hamming(bits).unwrap();
            assert_eq!(h.mean_distance_exact(), q(bits as i64, 2));
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let h = FiniteSpace::hamming(2).unwrap();
        assert_eq!(h.coords(&3), vec![1.0, 1.0]);
        assert_eq!(h.point_from_coords(&[1.0, 0.0]).unwrap(), 2);
        assert_eq!(h.distance(&0, &3), 2.0);
        assert!(h.point_from_coords(&[2.0, 0.0]).is_err());
    }

    #[test]
    fn path_graph_is_not_distance_invariant() {
        let d = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]];
        let p = FiniteSpace::uniform_from_distance_matrix("path3", d).unwrap();
        assert!(!p.is_distance_invariant());
        assert_eq!(p.distance_invariance_defect(), q(1, 3));
    }

    #[test]
    fn metric_axioms_are_validated() {
        let bad = vec![vec![0, 5, 1], vec![5, 0, 1], vec![1, 1, 0]];
        assert!(FiniteSpace::uniform_from_distance_matrix("bad", bad).is_err());
        let w = vec![q(1, 2), q(1, 3)];
        assert!(FiniteSpace::from_distance_matrix("w", vec![vec![0, 1], vec![1, 0]], w).is_err());
    }

    #[test]
    fn weighted_sampling_follows_weights() {
        let d = vec![vec![0, 1], vec![1, 0]];
        let s = FiniteSpace::from_distance_matrix("two", d, vec![q(1, 4), q(3, 4)]).unwrap();
        let mut rng = crate::numeric::stream_rng(1, 0);
        let hits = (0..40_000).filter(|_| s.sample(&mut rng) == 1).count();
        assert!((hits as f64 / 40_000.0 - 0.75).abs() < 0.01);
    }
}
