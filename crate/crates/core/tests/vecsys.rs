use boundgen::vecsys::{
    make_prime_system, random_complete_system, reduce_to_standard, Policy, Ring, Shape,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn stress_all_policies() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for policy in Policy::ALL {
        let mut hist = [0usize; 6];
        for case in 0..300 {
            let k = 1 + case % 6;
            let n = policy.min_n(k) + case % 3;
            let ring = if policy == Policy::Fp2k { Ring::Prime([2, 3, 5, 7, 101][case % 5]) } else { Ring::Integers };
            let shape = Shape::ALL[case % 3];
            let v = random_complete_system(&mut rng, k, n, ring, shape, 1000);
            let t = reduce_to_standard(&v, policy).unwrap_or_else(|e| panic!("{policy} k={k} n={n} {shape:?}: {e}\n{}", v.matrix()));
            assert!(t.verify(&v));
            hist[t.op_count] += 1;
        }
        println!("{policy}: {hist:?}");
    }
}

#[test]
fn prime_systems_from_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..60 {
        let k = 1 + case % 4;
        let v = random_complete_system(&mut rng, k, 2 * k + case % 2, Ring::Integers, Shape::ALL[case % 3], 100);
        let ps = make_prime_system(&v).unwrap();
        assert!(ps.primes.iter().all(|q| q > &ps.reference_det));
    }
}
