use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, One, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{stream_rng, MeanAccumulator, NeumaierSum};
use crate::partition::{EqualMeasurePartition, FinitePartition};
use crate::spaces::MetricMeasureSpace;
use crate::{Error, Estimate, Rational, Result};

type PointOf<P> = <<P as EqualMeasurePartition>::Space as MetricMeasureSpace>::Point;

/// Largest `|Ω_N|` enumerated by the exhaustive oracles.
const MAX_CONFIGURATIONS: usize = 10_000_000;

/// `E_N F¹` and `E_N F²` from (3.7) and (3.8).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma31Values {
    /// `N ∫ f dμ`.
    pub ef1: Estimate,
    /// `N² ∬ f dμ dμ − N² Σ_i ∬_{V_i×V_i} f dμ dμ`.
    pub ef2: Estimate,
}

/// (3.7)/(3.8) for an arbitrary partition.
///
/// Partitions of finite spaces are summed exactly. Otherwise the integrals
/// are estimated with `samples` draws: `∫ f` and `∬ f` under `μ`, and each
/// cell term as `N² ∬_{V_i×V_i} f dμ dμ = E f(u, v)` with `u, v ~ μ̃_i`.
pub fn lemma31_closed_forms<P: EqualMeasurePartition>(
    partition: &P,
    f1: &dyn Fn(&PointOf<P>) -> f64,
    f2: &dyn Fn(&PointOf<P>, &PointOf<P>) -> f64,
    samples: usize,
    seed: u64,
) -> Result<Lemma31Values> {
    let space = partition.space();
    let n = partition.len() as f64;
    let cells: Option<Vec<_>> = (0..partition.len()).map(|i| partition.cell_atoms(i)).collect();
    if let (Some(atoms), Some(cells)) = (space.enumerate(), cells) {
        let int1: NeumaierSum = atoms.iter().map(|(y, w)| w * f1(y)).collect();
        let mut int2 = NeumaierSum::new();
        for (a, wa) in &atoms {
            for (b, wb) in &atoms {
                int2.add(wa * wb * f2(a, b));
            }
        }
        // Cell atoms carry μ̃_i = N μ|V_i, so N² ∬_{V_i×V_i} f dμdμ is their plain double sum.
        let mut diag = NeumaierSum::new();
        for cell in &cells {
            for (a, wa) in cell {
                for (b, wb) in cell {
                    diag.add(wa * wb * f2(a, b));
                }
            }
        }
        return Ok(Lemma31Values {
            ef1: Estimate::exact(n * int1.value()),
            ef2: Estimate::exact(n * n * int2.value() - diag.value()),
        });
    }
    let samples = samples.max(2);
    let mut rng = stream_rng(seed, 0);
    let mut a1 = MeanAccumulator::new();
    let mut a2 = MeanAccumulator::new();
    for _ in 0..samples {
        let u = space.sample(&mut rng);
        let v = space.sample(&mut rng);
        a1.push(f1(&u));
        a2.push(f2(&u, &v));
    }
    let mut diag = 0.0;
    let mut diag_var = 0.0;
    for i in 0..partition.len() {
        let mut crng = stream_rng(seed, 1 + i as u64);
        let mut acc = MeanAccumulator::new();
        for _ in 0..samples {
            let u = partition.sample_cell(i, &mut crng)?;
            let v = partition.sample_cell(i, &mut crng)?;
            acc.push(f2(&u, &v));
        }
        diag += acc.mean();
        diag_var += acc.std_error() * acc.std_error();
    }
    let total = samples as u64;
    Ok(Lemma31Values {
        ef1: Estimate::monte_carlo(n * a1.mean(), n * a1.std_error(), total, seed),
        ef2: Estimate::monte_carlo(
            n * n * a2.mean() - diag,
            ((n * n * a2.std_error()).powi(2) + diag_var).sqrt(),
            total,
            seed,
        ),
    })
}

/// (3.7)/(3.8) in exact arithmetic on a finite partition.
pub fn lemma31_exact(
    partition: &FinitePartition,
    f1: &dyn Fn(usize) -> Rational,
    f2: &dyn Fn(usize, usize) -> Rational,
) -> (Rational, Rational) {
    let space = partition.space();
    let n = Rational::from_integer(partition.len().into());
    let mut int1 = Rational::zero();
    let mut int2 = Rational::zero();
    for a in 0..space.len() {
        int1 += space.weight(a) * f1(a);
        for b in 0..space.len() {
            int2 += space.weight(a) * space.weight(b) * f2(a, b);
        }
    }
    let mut diag = Rational::zero();
    for cell in partition.cells() {
        for &a in cell {
            for &b in cell {
                diag += space.weight(a) * space.weight(b) * f2(a, b);
            }
        }
    }
    (&n * int1, &n * &n * (int2 - diag))
}

/// Odometer over `∏ V_i`; calls `visit` with the cell-wise atom indices.
fn for_each_configuration(sizes: &[usize], mut visit: impl FnMut(&[usize])) -> Result<()> {
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    match total {
        Some(t) if t <= MAX_CONFIGURATIONS => {}
        _ => return Err(Error::unsupported("Ω_N is too large to enumerate")),
    }
    if sizes.contains(&0) {
        return Ok(());
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        visit(&idx);
        let mut k = 0;
        loop {
            if k == sizes.len() {
                return Ok(());
            }
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `(E_N F¹, E_N F²)` by enumerating every configuration of `Ω_N` with its
/// product weight. Needs cell atoms.
pub fn omega_expectation_exhaustive<P: EqualMeasurePartition>(
    partition: &P,
    f1: &dyn Fn(&PointOf<P>) -> f64,
    f2: &dyn Fn(&PointOf<P>, &PointOf<P>) -> f64,
) -> Result<(f64, f64)> {
    let cells: Vec<_> = (0..partition.len())
        .map(|i| partition.cell_atoms(i).ok_or_else(|| Error::unsupported("cells have no atoms")))
        .collect::<Result<_>>()?;
    let sizes: Vec<usize> = cells.iter().map(Vec::len).collect();
    let (mut e1, mut e2) = (NeumaierSum::new(), NeumaierSum::new());
    for_each_configuration(&sizes, |idx| {
        let mut w = 1.0;
        for (c, &k) in cells.iter().zip(idx) {
            w *= c[k].1;
        }
        if w == 0.0 {
            return;
        }
        let pts: Vec<&PointOf<P>> = cells.iter().zip(idx).map(|(c, &k)| &c[k].0).collect();
        e1.add(w * pts.iter().map(|p| f1(p)).sum::<f64>());
        let mut s = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                if i != j {
                    s += f2(a, b);
                }
            }
        }
        e2.add(w * s);
    })?;
    Ok((e1.value(), e2.value()))
}

/// Exact-arithmetic exhaustive enumeration of `Ω_N`.
pub fn omega_expectation_exhaustive_exact(
    partition: &FinitePartition,
    f1: &dyn Fn(usize) -> Rational,
    f2: &dyn Fn(usize, usize) -> Rational,
) -> Result<(Rational, Rational)> {
    let cells: Vec<Vec<(usize, Rational)>> = (0..partition.len()).map(|i| partition.cell_atoms_exact(i)).collect();
    let sizes: Vec<usize> = cells.iter().map(Vec::len).collect();
    let (mut e1, mut e2) = (Rational::zero(), Rational::zero());
    for_each_configuration(&sizes, |idx| {
        let mut w = Rational::one();
        for (c, &k) in cells.iter().zip(idx) {
            w *= &c[k].1;
        }
        let pts: Vec<usize> = cells.iter().zip(idx).map(|(c, &k)| c[k].0).collect();
        let s1: Rational = pts.iter().map(|&p| f1(p)).sum();
        let mut s2 = Rational::zero();
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate() {
                if i != j {
                    s2 += f2(a, b);
                }
            }
        }
        e1 += &w * s1;
        e2 += w * s2;
    })?;
    Ok((e1, e2))
}
