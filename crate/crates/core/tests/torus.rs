use boundgen::torus::{
    act_sl2, check_bp_cp, check_mapping_identities, check_partition, check_symmetry, classify_t2, in_b, in_c,
    partition_table, Elementary, QPoint, Region, Q,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pt(a: i64, b: i64, d: i64) -> QPoint {
    QPoint::grid(&[a, b], d)
}

#[test]
fn spec_examples() {
    assert_eq!(act_sl2(Elementary::new(0, 1, 1), &pt(0, 1, 4)), pt(1, 1, 4));
    assert_eq!(act_sl2(Elementary::new(1, 0, -1), &pt(1, 1, 2)), pt(1, 0, 2));
    assert_eq!(classify_t2(&pt(0, 0, 1)), Region::Origin);
    assert_eq!(classify_t2(&pt(3, 0, 8)), Region::BandX);
    assert_eq!(classify_t2(&pt(2, 1, 16)), Region::A2);
}

#[test]
fn inverse_action_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let d = rng.gen_range(1..1000);
        let p = QPoint::new(vec![Q::new(rng.gen_range(-2000..2000), d), Q::new(rng.gen_range(-2000..2000), d)]);
        let g = Elementary::new(rng.gen_range(0..2), 0, if rng.gen() { 1 } else { -1 });
        let g = if g.i == 0 { Elementary { j: 1, ..g } } else { g };
        assert_eq!(g.inverse().act(&g.act(&p)), p);
    }
}

#[test]
fn every_grid_point_has_one_label() {
    for q in [4, 5, 6, 7, 9, 10, 31, 64, 100] {
        let r = check_partition(q);
        assert_eq!(r.violations, 0, "q={q}: {r:?}");
        assert_eq!(r.label_counts.values().sum::<u64>(), (q * q) as u64);
        assert_eq!(r.label_counts.get("CentralResidue"), None);
    }
}

#[test]
fn identities_hold_on_odd_and_even_grids() {
    for q in [5, 7, 12, 33, 64, 128] {
        let r = check_mapping_identities(q);
        assert_eq!(r.violations(), 0, "q={q}: {r:?}");
        assert!(r.control.violations() > 0);
        assert_eq!(r.grid_bijective, (q <= 64).then_some(true));
        assert_eq!(check_symmetry(q).violations, 0);
    }
}

#[test]
fn full_resolution_grid() {
    let r = check_mapping_identities(512);
    assert_eq!(r.violations(), 0);
    assert_eq!(check_partition(512).violations, 0);
}

#[test]
fn coordinate_sets() {
    let y = QPoint::grid(&[0, 0, 1], 8);
    assert!(in_b(2, &y) && !in_b(3, &y));
    let img = Elementary::new(0, 2, 1).act(&y);
    assert_eq!(img, QPoint::grid(&[1, 0, 1], 8));
    assert!(in_c(3, &img));
    assert!(!(in_c(2, &img) && in_c(3, &img)));
    for (p, q) in [(3, 8), (4, 4), (5, 4), (3, 12)] {
        assert_eq!(check_bp_cp(p, q).violations, 0, "p={p} q={q}");
    }
}

#[test]
fn table_lists_every_label() {
    let t = partition_table();
    let labels: Vec<&str> = t.iter().map(|r| r.label).collect();
    for r in Region::A.iter().chain(Region::A_PRIME.iter()) {
        assert!(labels.contains(&r.name()));
    }
    assert!(labels.contains(&"CentralResidue"));
}
