//! Integer helpers shared across modules: primality, integer square roots,
//! squarefreeness.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller-Rabin rounds for candidates above 2^64. Each round has error at most
/// 1/4, so 64 rounds keep the error below 2^-128.
pub const MR_ROUNDS: usize = 64;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for 64-bit integers (bases 2..37 suffice below 3.3e24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary integers. Exact below 2^64; above, Miller-Rabin with
/// [`MR_ROUNDS`] bases drawn from a fixed-seed generator so results are
/// reproducible.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let two = &one + &one;
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_b0d9);
    'witness: for _ in 0..MR_ROUNDS {
        let a = rng.gen_biguint_range(&two, &nm1);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Floor square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative");
    n.sqrt()
}

/// True when no prime square divides |n|. Zero is not squarefree.
///
/// Small factors are removed by trial division; a cofactor with no factor
/// below 2^16 that is prime, a square, or below 2^48 is decided directly.
/// Anything else goes to a general factorisation.
pub fn is_squarefree(n: &BigInt) -> bool {
    const TRIAL: u32 = 1 << 16;
    let mut m = n.magnitude().clone();
    if m.is_zero() {
        return false;
    }
    let mut p = 2u32;
    while p < TRIAL && BigUint::from(p) * p <= m {
        if (&m % p).is_zero() {
            m /= p;
            if (&m % p).is_zero() {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() || is_prime(&BigInt::from(m.clone())) {
        return true;
    }
    let r = m.sqrt();
    if &r * &r == m {
        return false;
    }
    // Every prime factor exceeds 2^16, so below 2^48 there are exactly two.
    if m.bits() <= 48 {
        return true;
    }
    num_prime::nt_funcs::factorize(m).values().all(|&e| e == 1)
}

/// Squarefree factorisation of a small radicand: returns (c, r) with n = c² r, r squarefree.
pub fn split_square(n: u64) -> (u64, u64) {
    let mut c = 1u64;
    let mut r = n;
    let mut p = 2u64;
    while p * p <= r {
        while r % (p * p) == 0 {
            r /= p * p;
            c *= p;
        }
        p += 1;
    }
    (c, r)
}

/// |SL_n(F_p)| = p^(n(n-1)/2) · ∏_{i=2}^{n} (p^i - 1).
pub fn sl_order(n: u32, p: u64) -> BigUint {
    let bp = BigUint::from(p);
    let mut o = bp.pow(n * n.saturating_sub(1) / 2);
    for i in 2..=n {
        o *= bp.pow(i) - 1u32;
    }
    o
}

/// Natural logarithm of a positive big integer, to double precision.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn u64_primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        for n in [2047u64, 1373653, 25326001, 3215031751, 3825123056546413051] {
            assert!(!is_prime_u64(n));
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_primality() {
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_prime(&m127));
        let composite = &m127 * BigInt::from(3u8);
        assert!(!is_prime(&composite));
        let carmichael_like = BigInt::from(2u8).pow(89) - 1;
        assert!(is_prime(&carmichael_like));
        assert!(!is_prime(&(BigInt::from(2u8).pow(67) - 1)));
    }

    #[test]
    fn squarefree_and_split() {
        assert!(is_squarefree(&BigInt::from(30)));
        assert!(!is_squarefree(&BigInt::from(-18)));
        assert!(!is_squarefree(&BigInt::zero()));
        assert!(is_squarefree(&BigInt::from(101 * 103)));
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(999_983u64);
        assert!(is_squarefree(&(&p * &q)));
        assert!(!is_squarefree(&(&p * &p)));
        assert!(!is_squarefree(&(&p * &p * &q * 7)));
        let big = BigInt::from(4_294_967_311u64);
        assert!(is_squarefree(&(&big * &p * &q)));
        assert!(!is_squarefree(&(&big * &big * &q)));
        assert_eq!(split_square(150), (5, 6));
        assert_eq!(split_square(250), (5, 10));
        assert_eq!(split_square(7), (1, 7));
    }

    #[test]
    fn group_orders() {
        assert_eq!(sl_order(2, 2), BigUint::from(6u32));
        assert_eq!(sl_order(3, 2), BigUint::from(168u32));
        assert_eq!(sl_order(3, 3), BigUint::from(5616u32));
        assert_eq!(sl_order(2, 5), BigUint::from(120u32));
    }

    #[test]
    fn big_logs() {
        let x = BigUint::from(3u32).pow(2000);
        assert!((ln_big(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
        assert!((ln_big(&BigUint::from(168u32)) - 168f64.ln()).abs() < 1e-15);
    }
}
