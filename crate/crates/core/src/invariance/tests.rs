use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::Rng;

use super::*;
use crate::numeric::stream_rng;
use crate::partition::{
    build_box_partition, pushforward_partition, DiameterMode, EqualMeasurePartition, FinitePartition,
    OccupancyStrategy,
};
use crate::spaces::{Circle, CubeMeasure, EuclideanCube, FiniteSpace, MetricMeasureSpace, RadialMeasure, Torus};
use crate::Rational;

fn circle_arcs(n: usize) -> crate::partition::SpacePartition<Circle> {
    let boxes = build_box_partition(&CubeMeasure::uniform(1), n, OccupancyStrategy::Lexicographic).unwrap();
    pushforward_partition(&Circle, boxes, DiameterMode::Exact).unwrap()
}

#[test]
fn distance_invariance_detection() {
    let h = FiniteSpace::hamming(3).unwrap();
    let c = check_distance_invariance(&h, &default_radii_grid(&h, 0), 0, 1);
    assert!(c.invariant);
    assert_eq!(c.max_deviation, 0.0);
    let c = check_distance_invariance(&Circle, &default_radii_grid(&Circle, 16), 32, 1);
    assert!(c.invariant);
    let cube = EuclideanCube::<2>::uniform();
    let c = check_distance_invariance(&cube, &[0.25], 32, 1);
    assert!(!c.invariant);
    assert!(c.max_deviation > 0.05);
}

#[test]
fn exact_defect_on_hamming_and_circle() {
    let h = FiniteSpace::hamming(4).unwrap();
    let xi = RadialMeasure::uniform_atomic(&h.radii()).unwrap();
    let mut rng = stream_rng(9, 0);
    let pts: Vec<usize> = (0..5).map(|_| rng.random_range(0..h.len())).collect();
    let d = exact_invariance_defect_rational(&h, &pts, &xi).unwrap();
    assert!(d.defect.is_zero());
    assert!(exact_invariance_defect(&h, &pts, &xi).unwrap().defect.abs() < 1e-9);
    // A single point: λ[ξ,{x}] = λ(ξ,x,x) and the identity reduces to (2.20).
    assert!(exact_invariance_defect_rational(&h, &[3], &xi).unwrap().defect.is_zero());

    let xi = RadialMeasure::lebesgue(0.5).unwrap();
    let d = exact_invariance_defect(&Circle, &Circle::equally_spaced(4, 0.0), &xi).unwrap();
    assert!(d.defect.abs() < 1e-9, "{d:?}");

    let cube = EuclideanCube::<2>::uniform();
    let xi = RadialMeasure::lebesgue(cube.diameter()).unwrap();
    assert!(matches!(
        exact_invariance_defect(&cube, &[[0.1, 0.2]], &xi),
        Err(crate::Error::Precondition(_))
    ));
}

#[test]
fn pair_identities_hold_on_hamming_cubes() {
    for bits in 1..=3 {
        let h = FiniteSpace::hamming(bits).unwrap();
        let xi = RadialMeasure::uniform_atomic(&h.radii()).unwrap();
        let r = pair_identities_exact(&h, &xi).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.checked, h.len() * h.len() * (bits + 2));
    }
    let path = FiniteSpace::uniform_from_distance_matrix("path3", vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]])
        .unwrap();
    let xi = RadialMeasure::uniform_atomic(&path.radii()).unwrap();
    assert!(matches!(pair_identities_exact(&path, &xi), Err(crate::Error::Precondition(_))));
}

#[test]
fn omega_samples_land_in_cells() {
    let p = circle_arcs(4);
    let s = OmegaSampler::new(&p, 3);
    for t in 0..20 {
        let x = sample_omega(&s, t).unwrap();
        for (i, pt) in x.points().iter().enumerate() {
            assert!(p.cell_contains(i, pt));
        }
    }
    let t = Torus::<2>::new();
    let boxes = build_box_partition(&CubeMeasure::uniform(2), 9, OccupancyStrategy::Lexicographic).unwrap();
    let p = pushforward_partition(&t, boxes, DiameterMode::LipschitzBound).unwrap();
    let x = sample_omega(&OmegaSampler::new(&p, 1), 0).unwrap();
    assert_eq!(x.len(), 9);
    assert!(x.points().iter().enumerate().all(|(i, pt)| p.cell_contains(i, pt)));
}

#[test]
fn first_cell_mean_is_its_centroid() {
    let t = Torus::<2>::new();
    let boxes = build_box_partition(&CubeMeasure::uniform(2), 9, OccupancyStrategy::Lexicographic).unwrap();
    let p = pushforward_partition(&t, boxes, DiameterMode::LipschitzBound).unwrap();
    let s = OmegaSampler::new(&p, 4);
    let centre = p.boxes().boxes()[0].center();
    let mut acc = [crate::numeric::MeanAccumulator::new(), crate::numeric::MeanAccumulator::new()];
    for trial in 0..10_000 {
        let x = s.draw(&mut s.trial_rng(trial)).unwrap();
        acc[0].push(x[0][0]);
        acc[1].push(x[0][1]);
    }
    for k in 0..2 {
        assert!((acc[k].mean() - centre[k]).abs() <= 3.0 * acc[k].std_error());
    }
}

#[test]
fn expectations_of_simple_statistics() {
    let p = circle_arcs(4);
    let s = OmegaSampler::new(&p, 2);
    let one = |_: &f64| 1.0;
    let e = expectation_mc(&s, &Statistic::F1(&one), 50, 0).unwrap();
    assert_eq!((e.mean, e.std_error), (4.0, 0.0));
    assert!(expectation_mc(&s, &Statistic::F1(&one), 1, 0).is_err());

    // E ρ[·] = N²/4 − N²·N·ℓ³/3 with ℓ = 1/N.
    let n: f64 = 4.0;
    let oracle = n * n / 4.0 - n * n * n * (1.0 / n).powi(3) / 3.0;
    let e = expectation_mc(&s, &Statistic::Rho, 20_000, 0).unwrap();
    assert!((e.mean - oracle).abs() <= 3.0 * e.std_error, "{e:?} vs {oracle}");
    let rho = |a: &f64, b: &f64| Circle.distance(a, b);
    let l = lemma31_closed_forms(&p, &one, &rho, 100_000, 5).unwrap();
    assert!(l.ef2.agrees_with(oracle, 3.0, 0.0), "{l:?} vs {oracle}");
    assert!((l.ef1.value - 4.0).abs() < 1e-12);
    let ones = |_: &f64, _: &f64| 1.0;
    let l = lemma31_closed_forms(&p, &one, &ones, 1000, 5).unwrap();
    assert!((l.ef2.value - (n * n - n)).abs() < 1e-12);
}

fn six_point_space() -> FiniteSpace {
    // A path metric on six points with two heavier points.
    let d: Vec<Vec<u32>> = (0..6).map(|i: i32| (0..6).map(|j: i32| (i - j).unsigned_abs()).collect()).collect();
    let w = [2, 1, 1, 1, 1, 2].iter().map(|&k| Rational::new(k.into(), 8.into())).collect();
    FiniteSpace::from_distance_matrix("path6", d, w).unwrap()
}

#[test]
fn lemma31_matches_exhaustive_enumeration() {
    let s = six_point_space();
    let partitions = [
        FinitePartition::new(&s, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap(),
        FinitePartition::new(&s, vec![vec![0], vec![2, 4], vec![1, 3], vec![5]]).unwrap(),
    ];
    let sr = &s;
    let rho = |a: usize, b: usize| Rational::from_integer(sr.dist(a, b).into());
    let ind = |t: u32| move |a: usize, b: usize| Rational::from_integer(((sr.dist(a, b) <= t) as u32).into());
    let f1 = |a: usize| Rational::from_integer((a as u32 % 3).into());
    let (i0, i1, i2) = (ind(0), ind(1), ind(3));
    let fs: [&dyn Fn(usize, usize) -> Rational; 4] = [&rho, &i0, &i1, &i2];
    for p in &partitions {
        for f2 in fs {
            let closed = lemma31_exact(p, &f1, f2);
            let brute = omega_expectation_exhaustive_exact(p, &f1, f2).unwrap();
            assert_eq!(closed, brute);
        }
        let (e1, e2) = omega_expectation_exhaustive(p, &|a: &usize| (*a % 3) as f64, &|a: &usize, b: &usize| {
            s.dist(*a, *b) as f64
        })
        .unwrap();
        let l = lemma31_closed_forms(p, &|a: &usize| (*a % 3) as f64, &|a: &usize, b: &usize| s.dist(*a, *b) as f64, 0, 0)
            .unwrap();
        assert!((e1 - l.ef1.value).abs() < 1e-12 && (e2 - l.ef2.value).abs() < 1e-12);
    }
}

#[test]
fn probabilistic_invariance_on_the_circle_is_exact_per_configuration() {
    let p = circle_arcs(6);
    let xi = RadialMeasure::lebesgue(0.5).unwrap();
    let r = probabilistic_invariance_check(&p, &xi, 2, 1, 0).unwrap();
    assert!(r.within_ci);
    assert!(r.max_configuration_defect.unwrap() < 1e-9);
    assert!(probabilistic_invariance_check(&p, &xi, 1, 1, 0).is_err());
}

#[test]
fn probabilistic_invariance_on_the_square_small_run() {
    let cube = EuclideanCube::<2>::uniform();
    let boxes = build_box_partition(&CubeMeasure::uniform(2), 4, OccupancyStrategy::Lexicographic).unwrap();
    let p = pushforward_partition(&cube, boxes, DiameterMode::LipschitzBound).unwrap();
    let xi = RadialMeasure::lebesgue(cube.diameter()).unwrap();
    let r = probabilistic_invariance_check(&p, &xi, 2000, 3, 32).unwrap();
    assert!(matches!(r.mode, InvarianceMode::NestedMonteCarlo { .. }));
    assert!(r.within_ci, "{r:?}");
    assert!(r.combined_error > 0.0);
}

#[test]
fn circle_bounds() {
    let p = circle_arcs(8);
    let xi = RadialMeasure::lebesgue(0.5).unwrap();
    let b = bound_report(&p, Some(&xi), Some(1.0), 200, 1, 0).unwrap();
    assert!((b.rho_lower_bound - 15.0).abs() < 1e-12);
    assert!((b.theorem11_rho_bound.unwrap() - 15.0).abs() < 1e-12);
    assert!(b.rho_bound_holds && b.q_n_chain_holds);
    assert!(b.lambda_bound_holds.unwrap());
    assert!(b.theorem11_consistent.unwrap());
    // Centres of equal arcs are equally spaced.
    assert!((b.centre_witness_rho - 16.0).abs() < 1e-12);
    assert!(b.best_observed_rho >= b.rho_lower_bound);
}

#[test]
fn missing_c0_omits_the_lambda_bound() {
    let p = circle_arcs(4);
    let xi = RadialMeasure::single_atom(0.1, 1.0, &Circle.radii()).unwrap();
    let b = bound_report(&p, Some(&xi), None, 10, 1, 0).unwrap();
    assert!(b.lambda_upper_bound.is_none());
    assert_eq!(b.warnings.len(), 1);
}
