use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::NeumaierSum;

/// How a numerical value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Method {
    /// Finite enumeration or exact arithmetic.
    Exact,
    /// A registered closed form (possibly evaluated piecewise).
    ClosedForm,
    /// Deterministic adaptive quadrature; the error is the quadrature estimate.
    Quadrature,
    /// Monte Carlo; the error is one standard error.
    MonteCarlo { samples: u64, seed: u64 },
}

/// A value with its error estimate and provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub method: Method,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0, method: Method::Exact }
    }

    pub fn closed_form(value: f64) -> Self {
        Estimate { value, error: 0.0, method: Method::ClosedForm }
    }

    pub fn quadrature(value: f64, error: f64) -> Self {
        Estimate { value, error, method: Method::Quadrature }
    }

    pub fn monte_carlo(value: f64, std_error: f64, samples: u64, seed: u64) -> Self {
        Estimate { value, error: std_error, method: Method::MonteCarlo { samples, seed } }
    }

    /// `true` if `|value − other| ≤ k·error + abs_slack`.
    pub fn agrees_with(&self, other: f64, k: f64, abs_slack: f64) -> bool {
        (self.value - other).abs() <= k * self.error + abs_slack
    }
}

/// Welford running mean and variance.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
    sum: NeumaierSum,
}

impl MeanAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum.add(x);
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum.value() / self.count as f64
        }
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn estimate(&self, seed: u64) -> Estimate {
        Estimate::monte_carlo(self.mean(), self.std_error(), self.count, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 2.0, 4.0, 8.0, 16.0];
        let mut acc = MeanAccumulator::new();
        xs.iter().for_each(|&x| acc.push(x));
        let mean = xs.iter().sum::<f64>() / 5.0;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 4.0;
        assert!((acc.mean() - mean).abs() < 1e-12);
        assert!((acc.variance() - var).abs() < 1e-12);
        assert!((acc.std_error() - (var / 5.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constant_stream_has_zero_error() {
        let mut acc = MeanAccumulator::new();
        for _ in 0..10 {
            acc.push(3.0);
        }
        assert_eq!(acc.std_error(), 0.0);
        assert_eq!(acc.mean(), 3.0);
    }
}
