use boundgen::algebra::{ElemTransvection, GenTransvection, IntMat};
use boundgen::factor::{
    base_case_sl3, decompose_block, expand_to_elementary, factor_full, level_budget, random_sl,
    verify_certificate, verify_certificate_mod_p, FactorOp, DEFAULT_EXPAND_CAP,
};
use boundgen::vecsys::Policy;
use num_bigint::BigInt;
use proptest::prelude::*;

fn word_product(n: usize, word: &[boundgen::factor::Letter]) -> IntMat {
    let mut p = IntMat::identity(n);
    for l in word {
        l.to_elem(n).apply_right(&mut p);
    }
    p
}

#[test]
fn identity_has_empty_certificate() {
    let cert = factor_full(&IntMat::identity(9), Policy::Z3k).unwrap();
    assert!(cert.factors.is_empty());
    assert_eq!(cert.generalized_count, 0);
    assert!(verify_certificate(&cert, &IntMat::identity(9)));
    assert!(expand_to_elementary(&cert, DEFAULT_EXPAND_CAP).unwrap().is_empty());
}

#[test]
fn nine_by_nine_word_of_thirty() {
    let g = random_sl(9, 30, 2024);
    let cert = factor_full(&g, Policy::Z3k).unwrap();
    assert!(verify_certificate(&cert, &g));
    assert!(cert.generalized_count <= 15 + cert.base_count);
    for p in [2, 3, 101, 1_000_003] {
        assert!(verify_certificate_mod_p(&cert, &g, p).unwrap());
    }
}

#[test]
fn peel_on_six_by_six() {
    let g = random_sl(6, 20, 5);
    let p = decompose_block(&g, 2, Policy::Z3k).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            if i < 2 || j < 2 {
                let want = BigInt::from(u8::from(i == j));
                assert_eq!(p.residual[(i, j)], want, "({i},{j})");
            }
        }
    }
    let mut prod = p.residual.clone();
    p.right.apply_right(&mut prod);
    for t in p.lefts.iter().rev() {
        t.apply_left(&mut prod);
    }
    assert_eq!(prod, g);
}

#[test]
fn tampering_is_detected() {
    let g = random_sl(7, 40, 9);
    let mut cert = factor_full(&g, Policy::Z3k).unwrap();
    assert!(verify_certificate(&cert, &g));
    let f = cert.factors.iter_mut().find(|f| f.op.word_length() > BigInt::from(0)).unwrap();
    match &mut f.op {
        FactorOp::Generalized(t) => {
            let x = t.alpha.entries().iter().position(|x| x != &BigInt::from(0)).unwrap();
            let c = t.alpha.cols();
            t.alpha[(x / c, x % c)] += 1;
        }
        FactorOp::Elementary(e) => e.m += 1,
    }
    assert!(!verify_certificate(&cert, &g));

    let mut cert = factor_full(&g, Policy::Z3k).unwrap();
    cert.product_hash = "0".repeat(64);
    assert!(!verify_certificate(&cert, &g));
}

#[test]
fn base_case_examples() {
    assert!(base_case_sl3(&IntMat::identity(3)).unwrap().is_empty());
    let g = ElemTransvection::new(3, 1, 0, 3).unwrap().to_matrix();
    let f = base_case_sl3(&g).unwrap();
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].m, BigInt::from(3));

    let g = random_sl(3, 10, 77);
    let f = base_case_sl3(&g).unwrap();
    let mut p = IntMat::identity(3);
    for e in &f {
        e.apply_right(&mut p);
    }
    assert_eq!(p, g);
    assert!(base_case_sl3(&IntMat::identity(4)).is_err());
}

#[test]
fn expansion_lengths() {
    let t = GenTransvection::new(4, vec![0], vec![1, 2], IntMat::from_rows(&[vec![2, -1]])).unwrap();
    assert_eq!(t.word_length(), BigInt::from(3));

    let g = ElemTransvection::new(9, 1, 2, 5).unwrap().to_matrix();
    let cert = factor_full(&g, Policy::Z3k).unwrap();
    let word = expand_to_elementary(&cert, DEFAULT_EXPAND_CAP).unwrap();
    assert_eq!(word.len(), 5);
    assert_eq!(word_product(9, &word), g);
    assert!(expand_to_elementary(&cert, 4).is_err());
}

#[test]
fn random_sl_is_deterministic_and_special() {
    assert!(random_sl(5, 0, 1).is_identity());
    for s in 0..100 {
        assert_eq!(random_sl(5, 40, s).det().unwrap(), BigInt::from(1));
    }
    assert_eq!(random_sl(6, 30, 42), random_sl(6, 30, 42));
    assert_ne!(random_sl(6, 30, 42), random_sl(6, 30, 43));
}

#[test]
fn both_policies_across_dimensions() {
    for n in 3..=12 {
        for (s, policy) in [Policy::Z3k, Policy::Z2k1].into_iter().enumerate() {
            let g = random_sl(n, 50, (n * 10 + s) as u64);
            let cert = factor_full(&g, policy).unwrap();
            assert!(verify_certificate(&cert, &g), "n={n} {policy}");
            assert!(
                cert.generalized_count <= 5 * level_budget(n) + cert.base_count,
                "n={n} {policy}: {} factors, base {}",
                cert.generalized_count,
                cert.base_count
            );
            let word = expand_to_elementary(&cert, DEFAULT_EXPAND_CAP);
            if let Ok(word) = word {
                assert_eq!(word_product(n, &word), g);
            }
        }
    }
}

#[test]
fn certificate_json_round_trip() {
    let g = random_sl(5, 25, 8);
    let cert = factor_full(&g, Policy::Z3k).unwrap();
    let s = serde_json::to_string(&cert).unwrap();
    let back: boundgen::factor::FactorCertificate = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back, &g));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn round_trip(n in 3usize..9, len in 0usize..40, seed in any::<u64>()) {
        let g = random_sl(n, len, seed);
        let cert = factor_full(&g, Policy::Z3k).unwrap();
        prop_assert!(verify_certificate(&cert, &g));
        prop_assert!(verify_certificate_mod_p(&cert, &g, 7).unwrap());
        prop_assert!(cert.generalized_count <= 5 * level_budget(n) + cert.base_count);
    }
}
