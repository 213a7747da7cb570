
/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        s.extend(iter);
        s
    }
}

/// `Σ_{i≠j} |a_i − a_j|` over ordered pairs, in `O(n log n)`.
pub fn pairwise_abs_diff_sum(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len() as f64;
    let mut acc = NeumaierSum::new();
    for (k, v) in values.iter().enumerate() {
        acc.add((2.0 * k as f64 - n + 1.0) * v);
    }
    2.0 * acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut s = NeumaierSum::new();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn abs_diff_matches_brute_force() {
        let data: Vec<f64> = vec![0.3, -1.0, 2.5, 0.3, 7.0];
        let mut brute = 0.0;
        for a in &data {
            for b in &data {
                brute += (a - b).abs();
            }
        }
        let mut v = data.clone();
        assert!((pairwise_abs_diff_sum(&mut v) - brute).abs() < 1e-12);
    }
}
