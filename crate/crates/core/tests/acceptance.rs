//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;
use rectdisc_core::discrepancy::exact::{l2_discrepancy_r_exact, symdiff_xi_exact};
use rectdisc_core::discrepancy::{
    l2_discrepancy_r, lipschitz_check_rho_star, symdiff_metric_xi, L2Mode, SymdiffMode,
};
use rectdisc_core::invariance::{
    expectation_mc, exact_invariance_defect, exact_invariance_defect_rational, lemma31_exact,
    omega_expectation_exhaustive_exact, probabilistic_invariance_check, OmegaSampler, Statistic,
};
use rectdisc_core::numeric::stream_rng;
use rectdisc_core::partition::{
    build_box_partition, pushforward_partition, DiameterMode, EqualMeasurePartition, FinitePartition,
    OccupancyStrategy,
};
use rectdisc_core::spaces::{
    Circle, CubeMeasure, EuclideanCube, FiniteSpace, MetricMeasureSpace, Quadrature, RadialMeasure, Torus,
};
use rectdisc_core::{Estimate, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type PairFn<'a> = &'a dyn Fn(usize, usize) -> Rational;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn rat(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// Two estimates agree within `k` combined errors, plus absolute slack.
fn agree(a: &Estimate, b: &Estimate, k: f64, slack: f64) -> bool {
    (a.value - b.value).abs() <= k * a.error.hypot(b.error) + slack
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for bits in 2..=5 {
        let h = FiniteSpace::hamming(bits).map_err(|e| e.to_string())?;
        let xi = RadialMeasure::uniform_atomic(&h.radii()).map_err(|e| e.to_string())?;
        let mut rng = stream_rng(1, bits as u64);
        for n in 1..=16 {
            for _ in 0..20 {
                let pts: Vec<usize> = (0..n).map(|_| rng.random_range(0..h.len())).collect();
                let d = exact_invariance_defect_rational(&h, &pts, &xi).map_err(|e| e.to_string())?;
                if !d.defect.is_zero() {
                    return Err(format!("hamming{bits}, D_N = {pts:?}: defect {}", d.defect));
                }
                count += 1;
            }
        }
    }
    let t = start.elapsed();
    check(within(t, 10.0), format!("{count} multisets over n = 2..5, N = 1..16, all defects exactly 0, {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let xi = RadialMeasure::lebesgue(0.5).map_err(|e| e.to_string())?;
    let mut sets = vec![Circle::equally_spaced(4, 0.0), Circle::equally_spaced(8, 0.0)];
    let mut rng = stream_rng(2, 0);
    for _ in 0..20 {
        let n = rng.random_range(1..=16);
        sets.push((0..n).map(|_| Circle.sample(&mut rng)).collect());
    }
    let mut worst: f64 = 0.0;
    for pts in &sets {
        let d = exact_invariance_defect(&Circle, pts, &xi).map_err(|e| e.to_string())?;
        worst = worst.max(d.defect.abs());
    }
    let t = start.elapsed();
    check(worst < 1e-9 && within(t, 5.0), format!("{} point sets, max |defect| = {worst:.2e}, {t:.2?}", sets.len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let (mut eq, mut len, mut lvl) = (0f64, 0f64, 0f64);
    let mut built = 0;
    for d in 1..=3 {
        for measure in [CubeMeasure::uniform(d), CubeMeasure::power_product(d, 1.0)] {
            for n in 1..=512 {
                let p = build_box_partition(&measure, n, OccupancyStrategy::Lexicographic).map_err(|e| e.to_string())?;
                let c = p.checks();
                if !c.bound_holds {
                    return Err(format!("d = {d}, N = {n}, {}: ‖P_N‖₁ = {} > {}", measure.label(), c.avg_diameter, c.bound));
                }
                eq = eq.max(c.equal_measure_defect);
                len = len.max(c.length_sum_defect);
                lvl = lvl.max(c.level_measure_defect);
                built += 1;
            }
        }
    }
    let t = start.elapsed();
    check(
        eq <= 1e-9 && len <= 1e-12 && lvl <= 1e-9 && within(t, 30.0),
        format!(
            "{built} partitions, max cell defect {eq:.1e}, max level defect {lvl:.1e}, max length-sum defect {len:.1e}, diameter bound holds, {t:.2?}"
        ),
    )
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln() / m, b + y.ln() / m));
    let sxx: f64 = points.iter().map(|(x, _)| (x.ln() - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x.ln() - mx) * (y.ln() - my)).sum();
    sxy / sxx
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [2usize, 3] {
        let pts = (3..=12)
            .map(|k| {
                let n = 1usize << k;
                let p = build_box_partition(&CubeMeasure::uniform(d), n, OccupancyStrategy::Lexicographic).unwrap();
                (n as f64, p.avg_diameter())
            })
            .collect::<Vec<_>>();
        let s = slope(&pts);
        let target = -1.0 / d as f64;
        ok &= (s - target).abs() <= 0.1;
        parts.push(format!("d = {d}: slope {s:.3} (target {target:.3})"));
    }
    check(ok, parts.join(", "))
}

fn criterion_5() -> Outcome {
    // Path metric on six points with weights (3,1,2,2,1,3)/12.
    let dist: Vec<Vec<u32>> = (0..6i32).map(|i| (0..6i32).map(|j| (i - j).unsigned_abs()).collect()).collect();
    let weights = [3, 1, 2, 2, 1, 3].iter().map(|&w| Rational::new(w.into(), 12.into())).collect();
    let s = FiniteSpace::from_distance_matrix("path6", dist, weights).map_err(|e| e.to_string())?;
    let layouts = [
        vec![vec![0, 1, 2], vec![3, 4, 5]],
        vec![vec![1, 2, 3, 4], vec![0, 5]],
        vec![vec![0, 1], vec![2, 3], vec![4, 5]],
        vec![vec![0, 4], vec![1, 5], vec![2, 3]],
    ];
    let sr = &s;
    let f1 = |x: usize| rat((x * x) as i64 % 5 - 2);
    let rho = |a: usize, b: usize| rat(sr.dist(a, b) as i64);
    let ind = |t: u32| move |a: usize, b: usize| rat((sr.dist(a, b) <= t) as i64);
    let (i0, i1, i3) = (ind(0), ind(1), ind(3));
    let fs: [(&str, PairFn); 4] =
        [("ρ", &rho), ("χ(ρ ≤ 0)", &i0), ("χ(ρ ≤ 1)", &i1), ("χ(ρ ≤ 3)", &i3)];
    let mut checked = 0;
    for cells in layouts {
        let p = FinitePartition::new(&s, cells.clone()).map_err(|e| e.to_string())?;
        for (name, f2) in fs {
            let closed = lemma31_exact(&p, &f1, f2);
            let brute = omega_expectation_exhaustive_exact(&p, &f1, f2).map_err(|e| e.to_string())?;
            if closed != brute {
                return Err(format!("cells {cells:?}, f = {name}: (3.7)/(3.8) give {closed:?}, enumeration {brute:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (partition, f) pairs over 2- and 3-cell partitions agree exactly"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cube = EuclideanCube::<2>::uniform();
    let boxes = build_box_partition(&CubeMeasure::uniform(2), 16, OccupancyStrategy::Lexicographic).map_err(|e| e.to_string())?;
    let p = pushforward_partition(&cube, boxes, DiameterMode::Exact).map_err(|e| e.to_string())?;
    let xi = RadialMeasure::lebesgue(cube.diameter()).map_err(|e| e.to_string())?;
    let r = probabilistic_invariance_check(&p, &xi, 10_000, 6, 64).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    check(
        r.defect.abs() <= 3.0 * r.combined_error && within(t, 120.0),
        format!(
            "2E λ + E ρ* = {:.4} ± {:.4}, N²⟨ρ*(ξ)⟩ = {:.4}, |defect| = {:.4} ≤ 3σ = {:.4}, {t:.2?}",
            r.lhs.value,
            r.lhs.error,
            r.rhs.value,
            r.defect.abs(),
            3.0 * r.combined_error
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    for n in [4i64, 8, 16, 32] {
        let boxes = build_box_partition(&CubeMeasure::uniform(1), n as usize, OccupancyStrategy::Lexicographic).map_err(|e| e.to_string())?;
        let p = pushforward_partition(&Circle, boxes, DiameterMode::Exact).map_err(|e| e.to_string())?;
        let avg = Rational::from_float(p.avg_diameter()).ok_or("non-finite diameter")?;
        if avg != Rational::new(1.into(), n.into()) {
            return Err(format!("N = {n}: ‖R_N‖₁ = {avg}, expected 1/{n}"));
        }
        let pts: Vec<Rational> = (0..n).map(|i| Rational::new(i.into(), n.into())).collect();
        let mut rho = Rational::zero();
        for a in &pts {
            for b in &pts {
                rho += Circle::distance_exact(a, b);
            }
        }
        // ⟨ρ⟩ = 1/4 on the circle.
        let bound = rat(n * n) / rat(4) - rat(n) * &avg;
        if rho != rat(n * n) / rat(4) || rho < bound {
            return Err(format!("N = {n}: ρ = {rho}, bound {bound}"));
        }
        lines.push(format!("N = {n}: ρ = {rho} ≥ {bound}"));
    }
    Ok(lines.join("; "))
}

fn criterion_8() -> Outcome {
    let t2 = Torus::<2>::new();
    let xi = RadialMeasure::lebesgue(t2.diameter()).map_err(|e| e.to_string())?;
    let c0 = xi.c0().ok_or("no c0")?;
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [16usize, 64, 256] {
        let boxes = build_box_partition(&CubeMeasure::uniform(2), n, OccupancyStrategy::Lexicographic).map_err(|e| e.to_string())?;
        let p = pushforward_partition(&t2, boxes, DiameterMode::Exact).map_err(|e| e.to_string())?;
        let sampler = OmegaSampler::new(&p, 8);
        let e = expectation_mc(&sampler, &Statistic::LambdaXi(&xi), 1000, 64).map_err(|e| e.to_string())?;
        let bound = 0.5 * c0 * n as f64 * p.avg_diameter();
        ok &= e.mean <= bound + 3.0 * e.std_error;
        lines.push(format!("N = {n}: E λ = {:.3} ± {:.3} ≤ {bound:.3}", e.mean, e.std_error));
    }
    check(ok, lines.join("; "))
}

fn criterion_9() -> Outcome {
    // Finite spaces: exact equality.
    let h = FiniteSpace::hamming(4).map_err(|e| e.to_string())?;
    let xi_h = RadialMeasure::uniform_atomic(&h.radii()).map_err(|e| e.to_string())?;
    let mut rng = stream_rng(9, 0);
    for _ in 0..50 {
        let n = rng.random_range(1..=12);
        let pts: Vec<usize> = (0..n).map(|_| rng.random_range(0..h.len())).collect();
        let r = rat(rng.random_range(0..=4));
        let a = l2_discrepancy_r_exact(&h, &pts, &r, L2Mode::Integral).map_err(|e| e.to_string())?;
        let b = l2_discrepancy_r_exact(&h, &pts, &r, L2Mode::Kernel).map_err(|e| e.to_string())?;
        let (y1, y2) = (rng.random_range(0..h.len()), rng.random_range(0..h.len()));
        let c = symdiff_xi_exact(&h, &xi_h, y1, y2, SymdiffMode::Direct).map_err(|e| e.to_string())?;
        let d = symdiff_xi_exact(&h, &xi_h, y1, y2, SymdiffMode::Sigma).map_err(|e| e.to_string())?;
        if a != b || c != d {
            return Err(format!("hamming4 modes differ: λ_r {a} vs {b}, ρ*(ξ) {c} vs {d}"));
        }
    }
    let mut worst = [0f64; 4];
    let mut failures = 0;
    let mut instance = |which: usize, a: Estimate, b: Estimate, slack: f64| {
        let z = (a.value - b.value).abs() / a.error.hypot(b.error).max(f64::MIN_POSITIVE);
        if !agree(&a, &b, 3.0, slack) {
            failures += 1;
        }
        if a.error + b.error > 0.0 {
            worst[which] = worst[which].max(z);
        } else {
            worst[which] = worst[which].max((a.value - b.value).abs());
        }
    };
    // Circle: closed forms on both sides.
    let xi_c = RadialMeasure::lebesgue(0.5).map_err(|e| e.to_string())?;
    let cf = Quadrature::ClosedForm;
    for _ in 0..50 {
        let n = rng.random_range(1..=12);
        let pts: Vec<f64> = (0..n).map(|_| Circle.sample(&mut rng)).collect();
        let r = 0.5 * rng.random::<f64>();
        let a = l2_discrepancy_r(&Circle, &pts, r, L2Mode::Integral, cf).map_err(|e| e.to_string())?;
        let b = l2_discrepancy_r(&Circle, &pts, r, L2Mode::Kernel, cf).map_err(|e| e.to_string())?;
        instance(0, a, b, 1e-9);
        let (y1, y2) = (Circle.sample(&mut rng), Circle.sample(&mut rng));
        let c = symdiff_metric_xi(&Circle, &xi_c, &y1, &y2, SymdiffMode::Direct, cf).map_err(|e| e.to_string())?;
        let d = symdiff_metric_xi(&Circle, &xi_c, &y1, &y2, SymdiffMode::Sigma, cf).map_err(|e| e.to_string())?;
        instance(1, c, d, 1e-9);
    }
    // Torus: Monte Carlo on both sides with a shared seed.
    let t2 = Torus::<2>::new();
    let xi_t = RadialMeasure::lebesgue(t2.diameter()).map_err(|e| e.to_string())?;
    for k in 0..50u64 {
        let mc = Quadrature::MonteCarlo { samples: 20_000, seed: 900 + k };
        let n = rng.random_range(1..=12);
        let pts: Vec<[f64; 2]> = (0..n).map(|_| t2.sample(&mut rng)).collect();
        let r = t2.diameter() * rng.random::<f64>();
        let a = l2_discrepancy_r(&t2, &pts, r, L2Mode::Integral, mc).map_err(|e| e.to_string())?;
        let b = l2_discrepancy_r(&t2, &pts, r, L2Mode::Kernel, mc).map_err(|e| e.to_string())?;
        instance(2, a, b, 1e-12);
        let (y1, y2) = (t2.sample(&mut rng), t2.sample(&mut rng));
        let c = symdiff_metric_xi(&t2, &xi_t, &y1, &y2, SymdiffMode::Direct, mc).map_err(|e| e.to_string())?;
        let d = symdiff_metric_xi(&t2, &xi_t, &y1, &y2, SymdiffMode::Sigma, mc).map_err(|e| e.to_string())?;
        instance(3, c, d, 1e-12);
    }
    check(
        failures == 0,
        format!(
            "hamming4 exact on 50 instances; circle max |Δ| λ_r {:.1e}, ρ*(ξ) {:.1e}; torus2 max z λ_r {:.2}, ρ*(ξ) {:.2}; {failures} of 200 outside 3σ",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut run = |name: &str, c: rectdisc_core::discrepancy::LipschitzCheck| {
        ok &= c.holds(1e-6, 0.0);
        lines.push(format!("{name}: max ratio {:.6} vs c₀ {:.6}", c.max_ratio, c.c0));
    };
    let xi_c = RadialMeasure::lebesgue(0.5).map_err(|e| e.to_string())?;
    run("circle", lipschitz_check_rho_star(&Circle, &xi_c, 1000, 10, Quadrature::ClosedForm).map_err(|e| e.to_string())?);
    let t2 = Torus::<2>::new();
    let xi_t = RadialMeasure::lebesgue(t2.diameter()).map_err(|e| e.to_string())?;
    let mc = Quadrature::MonteCarlo { samples: 4000, seed: 10 };
    run("torus2", lipschitz_check_rho_star(&t2, &xi_t, 1000, 10, mc).map_err(|e| e.to_string())?);
    let h = FiniteSpace::hamming(4).map_err(|e| e.to_string())?;
    let xi_h = RadialMeasure::uniform_atomic(&h.radii()).map_err(|e| e.to_string())?;
    run("hamming4", lipschitz_check_rho_star(&h, &xi_h, 1000, 10, Quadrature::Exact).map_err(|e| e.to_string())?);
    check(ok, format!("1000 pairs each; {}", lines.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact invariance on Hamming cubes (2.21)", criterion_1),
        ("circle invariance by piecewise integration", criterion_2),
        ("box partition identities and diameter bound (4.15, 4.22, 4.23)", criterion_3),
        ("partition diameter scaling N^(-1/d)", criterion_4),
        ("Lemma 3.1 against exhaustive enumeration", criterion_5),
        ("probabilistic invariance on the unit square (3.15)", criterion_6),
        ("distance-sum lower bound on the circle (3.19)", criterion_7),
        ("L2 discrepancy upper bound on the 2-torus (3.20)", criterion_8),
        ("mode agreement for λ_r and ρ*(ξ) (2.8)", criterion_9),
        ("Lipschitz bound ρ*(ξ) ≤ c₀ρ (2.11)", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err(String::from("panicked")));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag}: {name}: {detail}", i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
