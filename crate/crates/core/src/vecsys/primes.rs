use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::VecSysError;
use crate::arith::is_prime;

/// Candidates examined per progression before giving up.
pub const SEARCH_BUDGET: u64 = 1_000_000;

/// Smallest prime `q > lower` with `q ≡ a (mod d)` and `q ∉ distinct_from`.
pub fn dirichlet_prime(
    a: &BigInt,
    d: &BigInt,
    lower: &BigInt,
    distinct_from: &BTreeSet<BigInt>,
) -> Result<BigInt, VecSysError> {
    if !d.is_positive() {
        return Err(VecSysError::NoSolution(format!("modulus {d} is not positive")));
    }
    if !a.gcd(d).is_one() {
        return Err(VecSysError::NoSolution(format!("gcd({a}, {d}) != 1")));
    }
    let r = a.mod_floor(d);
    // first candidate strictly above `lower` in the residue class
    let mut q = lower + (&r - lower).mod_floor(d);
    if &q <= lower {
        q += d;
    }
    for _ in 0..SEARCH_BUDGET {
        if !distinct_from.contains(&q) && is_prime(&q) {
            return Ok(q);
        }
        q += d;
    }
    Err(VecSysError::Budget(format!(
        "no prime found in {SEARCH_BUDGET} candidates of {r} mod {d} above {lower}"
    )))
}
