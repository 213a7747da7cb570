//! Zero/one occupancy labels `N(i₁,…,i_d)` on the `k^d` grid and their
//! prefix sums `N(i₁,…,i_q)`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// How the `N` ones are placed among the `k^d` grid cells.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccupancyStrategy {
    /// The first `N` cells in row-major order.
    #[default]
    Lexicographic,
    /// Ones spread as evenly as possible over every slice, recursively.
    Balanced,
}

/// Smallest `k` with `k^d ≥ N`, i.e. `⌈N^{1/d}⌉`, in integer arithmetic.
pub fn grid_order(n: usize, d: usize) -> usize {
    assert!(d >= 1, "dimension must be positive");
    // Float estimate, then exact correction.
    let mut k = num_traits::Float::round(approx_root(n as f64, d)).max(1.0) as usize;
    while k > 1 && pow_at_least(k - 1, d, n) {
        k -= 1;
    }
    while !pow_at_least(k, d, n) {
        k += 1;
    }
    k
}

fn approx_root(x: f64, d: usize) -> f64 {
    num_traits::Float::powf(x, 1.0 / d as f64)
}

/// `k^d ≥ n` without overflow.
fn pow_at_least(k: usize, d: usize, n: usize) -> bool {
    let mut acc: usize = 1;
    for _ in 0..d {
        acc = match acc.checked_mul(k) {
            Some(v) => v,
            None => return true,
        };
    }
    acc >= n
}

/// Occupancy labels together with all their prefix counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occupancy {
    n: usize,
    d: usize,
    k: usize,
    strategy: OccupancyStrategy,
    // levels[q][p] = N(i₁,…,i_q) with p the row-major index of the prefix.
    levels: Vec<Vec<usize>>,
}

impl Occupancy {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn strategy(&self) -> OccupancyStrategy {
        self.strategy
    }

    /// Labels `N(i₁,…,i_d) ∈ {0, 1}` in row-major order.
    pub fn labels(&self) -> &[usize] {
        &self.levels[self.d]
    }

    /// `N(i₁,…,i_q)` for the prefix with row-major index `p`; `q = 0` gives `N`.
    pub fn prefix_count(&self, q: usize, p: usize) -> usize {
        self.levels[q][p]
    }

    /// All level-`q` counts in row-major order.
    pub fn level(&self, q: usize) -> &[usize] {
        &self.levels[q]
    }
}

/// Row-major digits of `index` in base `k`, most significant first.
pub fn digits(mut index: usize, len: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % k;
        index /= k;
    }
    out
}

/// Places `N` ones on the `k^d` grid, `k = ⌈N^{1/d}⌉`.
pub fn assign_occupancy(n: usize, d: usize, strategy: OccupancyStrategy) -> Occupancy {
    let k = grid_order(n, d);
    let cells = k.pow(d as u32);
    let mut labels = vec![0usize; cells];
    match strategy {
        OccupancyStrategy::Lexicographic => labels[..n].iter_mut().for_each(|l| *l = 1),
        OccupancyStrategy::Balanced => spread(&mut labels, n, k),
    }
    let mut levels = vec![Vec::new(); d + 1];
    levels[d] = labels;
    for q in (0..d).rev() {
        levels[q] = levels[q + 1].chunks(k).map(|c| c.iter().sum()).collect();
    }
    Occupancy { n, d, k, strategy, levels }
}

/// Distributes `count` ones over `cells` by splitting into `k` slices whose
/// shares differ by at most one, recursively.
fn spread(cells: &mut [usize], count: usize, k: usize) {
    if cells.len() == 1 {
        cells[0] = count;
        return;
    }
    let slice = cells.len() / k;
    for (j, chunk) in cells.chunks_mut(slice).enumerate() {
        let share = (j + 1) * count / k - j * count / k;
        spread(chunk, share, k);
    }
}
