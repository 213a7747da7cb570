use alloc::vec::Vec;

use super::NeumaierSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

const MAX_SEGMENTS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the total
/// estimate drops below `max(abs_tol, rel_tol·|I|)`.
pub fn adaptive_gk15<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadResult {
    if !(b > a) {
        return QuadResult { value: 0.0, error: 0.0, converged: true };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut segments: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    segments.push((a, b, v, e));
    loop {
        let total: f64 = segments.iter().map(|s| s.2).collect::<NeumaierSum>().value();
        let error: f64 = segments.iter().map(|s| s.3).sum();
        if error <= abs_tol.max(rel_tol * total.abs()) {
            return QuadResult { value: total, error, converged: true };
        }
        if segments.len() >= MAX_SEGMENTS {
            return QuadResult { value: total, error, converged: false };
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // Interval exhausted at machine precision.
            let total: f64 = segments.iter().map(|s| s.2).sum::<f64>();
            return QuadResult { value: total, error, converged: false };
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
}

/// Five-point Gauss–Legendre on every piece of a sorted breakpoint list.
///
/// Exact (to rounding) for integrands that are polynomials of degree at most
/// nine on each piece.
pub fn gauss_legendre_pieces<F: FnMut(f64) -> f64>(mut f: F, breakpoints: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut piece = NeumaierSum::new();
        for (x, wt) in GL5_X.iter().zip(GL5_W.iter()) {
            piece.add(wt * f(center + half * x));
        }
        acc.add(half * piece.value());
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn gk_integrates_smooth_and_kinked_functions() {
        let r = adaptive_gk15(|x| x.sin(), 0.0, core::f64::consts::PI, 1e-13, 1e-13);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = adaptive_gk15(|x| (x - 0.3).abs(), 0.0, 1.0, 1e-12, 1e-12);
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-11);
        let r = adaptive_gk15(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, 1e-12, 1e-12);
        assert!((r.value - core::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_is_exact_for_piecewise_cubics() {
        let f = |x: f64| if x < 0.5 { x * x * x } else { 1.0 - x };
        let v = gauss_legendre_pieces(f, &[0.0, 0.5, 1.0]);
        assert!((v - (0.5f64.powi(4) / 4.0 + 0.125)).abs() < 1e-15);
    }
}
