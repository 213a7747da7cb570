//! End-to-end checks through the public API.

use rectdisc_core::invariance::{bound_report, probabilistic_invariance_check};
use rectdisc_core::partition::{
    build_box_partition, pushforward_partition, DiameterMode, EqualMeasurePartition, OccupancyStrategy,
};
use rectdisc_core::spaces::{Circle, CubeMeasure, EuclideanCube, MetricMeasureSpace, RadialMeasure, Torus};

#[test]
fn circle_bound_report_end_to_end() {
    let boxes = build_box_partition(&CubeMeasure::uniform(1), 32, OccupancyStrategy::Lexicographic).unwrap();
    let p = pushforward_partition(&Circle, boxes, DiameterMode::Exact).unwrap();
    let xi = RadialMeasure::lebesgue(0.5).unwrap();
    let r = bound_report(&p, Some(&xi), Some(1.0), 200, 3, 32).unwrap();
    // Centres are equally spaced, so ρ = N²/4 exactly and the bound is N²/4 − 1.
    assert!((r.centre_witness_rho - 256.0).abs() < 1e-9);
    assert!((r.rho_lower_bound - 255.0).abs() < 1e-9);
    assert!(r.rho_bound_holds);
    assert_eq!(r.lambda_bound_holds, Some(true));
    // Q_N(ρ) on arcs of length 1/N is N · (1/N)²/(3N) = 1/(3N²).
    let q = 1.0 / (3.0 * 32.0 * 32.0);
    assert!((r.q_n_rho.value - q).abs() < 5.0 * r.q_n_rho.error.max(1e-6));
    assert!(r.q_n_chain_holds);
}

#[test]
fn torus_partition_diameters_shrink() {
    let t = Torus::<2>::new();
    let mut last = f64::INFINITY;
    for n in [4usize, 16, 64, 256] {
        let boxes = build_box_partition(&CubeMeasure::uniform(2), n, OccupancyStrategy::Lexicographic).unwrap();
        let p = pushforward_partition(&t, boxes, DiameterMode::Exact).unwrap();
        assert_eq!(p.len(), n);
        let avg = p.avg_diameter();
        assert!(avg < last);
        // Square cells of side N^{-1/2} have diagonal √2 · N^{-1/2}.
        assert!((avg - (2.0 / n as f64).sqrt()).abs() < 1e-9, "N = {n}: {avg}");
        last = avg;
    }
}

#[test]
fn cube_invariance_holds_in_expectation() {
    let cube = EuclideanCube::<2>::uniform();
    let boxes = build_box_partition(&CubeMeasure::uniform(2), 4, OccupancyStrategy::Lexicographic).unwrap();
    let p = pushforward_partition(&cube, boxes, DiameterMode::Exact).unwrap();
    let xi = RadialMeasure::lebesgue(cube.diameter()).unwrap();
    let r = probabilistic_invariance_check(&p, &xi, 2000, 21, 32).unwrap();
    assert!(r.defect.abs() <= 4.0 * r.combined_error, "{r:?}");
}
