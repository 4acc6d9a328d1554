use std::cmp::Ordering;

use boundgen::constants::surd::{decide_sign, sign_two_roots, Bounds, QuadSurd};
use boundgen::constants::{
    bound_report, consistency_report, dominance_sweep, h_bound_sweep, h_dp, kazhdan_lower_a_double_prime,
    kazhdan_lower_a_prime, kazhdan_upper, rel_const_k, rel_const_l, verify_chain_r2, verify_chain_rp,
    verify_chain_rpq, BoundOptions, HTable, RecursionParams,
};
use num_bigint::BigUint;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn stated_values() {
    assert!(close(kazhdan_lower_a_prime(100), 1.0 / 1280.0, 1e-15));
    assert!(close(kazhdan_upper(2), 1.0, 1e-15));
    assert!(close(kazhdan_lower_a_double_prime(3).powi(2) / 4.0, 4.4009900076e-7, 1e-9));
    assert_eq!(rel_const_l(11).unwrap(), 9.0);
    assert!(rel_const_k(3).is_err());
    assert!(close(rel_const_k(16).unwrap(), 100f64.sqrt() + 6.0, 1e-15));
}

#[test]
fn h_table_is_monotone_enough_and_below_both_bounds() {
    let r = h_bound_sweep(20_000);
    assert!(r.violations.is_empty());
    assert!(r.theorem_a_follows);
    let t = HTable::compute(2000);
    assert_eq!(t.max_n(), 2000);
    assert_eq!(t.get(7).unwrap(), h_dp(7).unwrap());
    assert!(t.get(2001).is_err());
}

#[test]
fn recursion_dominates() {
    let r = dominance_sweep(20_000);
    assert_eq!(r.checked, 20_000 - 6);
    assert!(r.violations.is_empty());
    let p = RecursionParams::h_instance();
    assert!(p.closed_form(7).unwrap() >= 2692.0);
}

#[test]
fn chains_small_ranges() {
    assert!(verify_chain_r2().passed());
    let rp = verify_chain_rp(2000);
    assert!(rp.passed() && rp.cases > 0);
    let rpq = verify_chain_rpq(200, 200);
    assert!(rpq.passed(), "{rpq:?}");
}

#[test]
fn report_fields() {
    let opts = BoundOptions { p: Some(3), group_size: None, literal_mixing: true };
    let r = bound_report(3, &opts).unwrap();
    assert_eq!(r.group_size.as_deref(), Some("5616"));
    assert!(r.mixing_bound.unwrap() > 0.0 && r.mixing_bound_literal.unwrap() > 0.0);
    assert!(close(r.spectral_lower, kazhdan_lower_a_double_prime(3).powi(2) / 4.0, 1e-15));
    let opts = BoundOptions { p: None, group_size: Some(BigUint::from(10u32).pow(30)), literal_mixing: false };
    let r = bound_report(50, &opts).unwrap();
    assert!(r.pra_bound.unwrap() > 0.0);
    assert!(r.mixing_bound_literal.is_none());
    assert!(bound_report(5, &BoundOptions { p: Some(9), ..Default::default() }).is_err());
}

#[test]
fn consistency_flags_are_exactly_the_known_two() {
    let r = consistency_report(3, 10_000);
    assert_eq!(r.flag_ids(), ["kazhdan_a_proof_line_50_vs_64", "remark_33_vs_42"]);
    assert!(r.all_verified());
}

#[test]
fn surd_tools_agree() {
    // (2 + √10)² = 14 + 4√10
    let s = QuadSurd::new((2, 1), (1, 1), 10);
    assert_eq!(s.square() - QuadSurd::new((14, 1), (4, 1), 10), QuadSurd::int(0, 10));
    // 6√p − 1 ≤ 6√(p + 25) at p = 2
    assert_eq!(sign_two_roots(-1, 1, 72, -1, 36 * 27), Ordering::Less);
    let s = decide_sign(|p| Bounds::int(3, p).sqrt() + Bounds::int(1, p) - Bounds::ratio(273, 100, p));
    assert_eq!(s, Some(Ordering::Greater));
}
