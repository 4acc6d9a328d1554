use boundgen::arith::sl_order;
use boundgen::spectral::{
    cayley_graph, compare_bounds, displacement_upper_bound, enumerate_group, lazy_step, mixing_time,
    spectral_gap, spectrum, tv_to_uniform, GapMethod, RegularGraph, SpectralError,
};
use num_rational::Ratio;
use num_traits::ToPrimitive;

#[test]
fn orders_match_formula() {
    for (n, p) in [(2, 2), (2, 3), (2, 5), (2, 7), (2, 11), (3, 2), (3, 3), (4, 2)] {
        let g = enumerate_group(n, p, 100_000).unwrap();
        assert_eq!(g.len() as u64, sl_order(n as u32, p).to_u64().unwrap(), "n={n} p={p}");
    }
}

#[test]
fn size_cap_is_checked_first() {
    match enumerate_group(4, 3, 1_000_000) {
        Err(SpectralError::Size { predicted, .. }) => assert_eq!(predicted, sl_order(4, 3)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn spectra_are_sane() {
    for (n, p) in [(2, 3), (2, 5), (3, 2)] {
        let g = cayley_graph(enumerate_group(n, p, 10_000).unwrap());
        assert!(g.graph.is_symmetric());
        let ev = spectrum(&g.graph).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-10);
        assert!(ev.iter().all(|&l| l.abs() <= 1.0 + 1e-10));
    }
}

#[test]
fn complete_and_cycle_self_tests() {
    let k4 = spectral_gap(&RegularGraph::complete(4)).unwrap();
    assert!((k4.beta - 4.0 / 3.0).abs() < 1e-12);
    let c6 = spectral_gap(&RegularGraph::cycle(6)).unwrap();
    assert!((c6.beta - 0.5).abs() < 1e-12);
}

// The lazy walk on C_6 from vertex 0 has the closed form
// P_t(x) = (1/6) Σ_k ((1 + cos(2πk/6))/2)^t cos(2πkx/6).
#[test]
fn cycle_walk_matches_fourier_oracle() {
    let g = RegularGraph::cycle(6);
    let mut d = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let mut next = vec![0.0; 6];
    for t in 1..=40 {
        lazy_step(&g, &d, &mut next);
        std::mem::swap(&mut d, &mut next);
        for (x, &px) in d.iter().enumerate() {
            let oracle: f64 = (0..6)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / 6.0;
                    ((1.0 + th.cos()) / 2.0).powi(t) * (th * x as f64).cos()
                })
                .sum::<f64>()
                / 6.0;
            assert!((px - oracle).abs() < 1e-12, "t={t} x={x}");
        }
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
    let m = mixing_time(&g, 0.25, 100).unwrap();
    assert!(m.distance <= 0.25 && m.steps >= 1);
    assert!(tv_to_uniform(&d) < 0.25);
}

#[test]
fn bounds_for_small_groups() {
    let r = compare_bounds(3, 2, 10_000).unwrap();
    assert_eq!(r.order, 168);
    assert_eq!(r.degree, 12);
    assert_eq!(r.method, GapMethod::Dense);
    assert_eq!(r.bound_checks.lower_holds, Some(true));
    assert_eq!(r.bound_checks.mixing_within_envelope, Some(true));
    assert_eq!(r.displacement_sq, "2/3");

    let r = compare_bounds(3, 3, 10_000).unwrap();
    assert_eq!(r.order, 5616);
    assert_eq!(r.method, GapMethod::Power);
    assert_eq!(r.bound_checks.lower_holds, Some(true));
    assert!(r.residual < 1e-6);

    let r = compare_bounds(2, 5, 10_000).unwrap();
    assert!(!r.bound_checks.applicable);
    assert_eq!(r.bound_checks.lower_holds, None);
}

#[test]
fn displacement_is_two_over_n() {
    assert_eq!(displacement_upper_bound(3, 5).unwrap(), Ratio::new(2, 3));
    assert_eq!(displacement_upper_bound(2, 3).unwrap(), Ratio::from_integer(1));
    assert!(displacement_upper_bound(1, 3).is_err());
}
