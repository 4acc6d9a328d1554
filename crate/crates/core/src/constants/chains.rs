//! Inequality chains of the torus measure lemmas, checked exactly.

use std::cmp::Ordering;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::surd::{decide_sign, sign_two_roots, Bounds, QuadSurd};

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ChainReport {
    pub chain: &'static str,
    pub checks: Vec<NamedCheck>,
    pub cases: u64,
    pub violations: u64,
    /// Cases where interval refinement could not separate the two sides.
    pub undecided: u64,
    pub first_violation: Option<(u64, u64)>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.undecided == 0 && self.checks.iter().all(|c| c.holds)
    }

    fn check(&mut self, name: &'static str, holds: bool) {
        self.cases += 1;
        if !holds {
            self.violations += 1;
        }
        self.checks.push(NamedCheck { name, holds });
    }
}

fn is_zero(x: &QuadSurd) -> bool {
    x.sign() == Ordering::Equal
}

/// Quadratic steps and identities behind the two-dimensional lemma, plus a
/// sampled check of `Σ √a_i ≤ √(k Σ a_i)`.
pub fn verify_chain_r2() -> ChainReport {
    let mut r = ChainReport { chain: "R2", ..Default::default() };
    let q = |a: (i64, i64), b: (i64, i64), d| QuadSurd::new(a, b, d);

    // c² - 4c - 6 ≤ 0 with c = √(s + 1): the positive root is 2 + √10.
    let c = q((2, 1), (1, 1), 10);
    let poly = c.square() - c.scale(&BigRational::from_integer(4.into())) - QuadSurd::int(6, 10);
    r.check("sum: 2+sqrt10 solves c^2 = 4c + 6", is_zero(&poly));
    r.check("sum: other root 2-sqrt10 is negative", q((2, 1), (-1, 1), 10).sign() == Ordering::Less);
    let s = c.square() - QuadSurd::int(1, 10);
    r.check("sum: c^2 - 1 = 13 + 4 sqrt10", s == q((13, 1), (4, 1), 10));
    // s = 5 + 4√(s+1) at the extreme, with √(s+1) = c > 0
    let rhs = QuadSurd::int(5, 10) + c.scale(&BigRational::from_integer(4.into()));
    r.check("sum: s = 5 + 4 sqrt(s+1) at the root", s == rhs && c.sign() == Ordering::Greater);

    // m ≤ 3/2 + 2√(m + 1/2): c² - 2c - 2 ≤ 0 with positive root 1 + √3.
    let c = q((1, 1), (1, 1), 3);
    let poly = c.square() - c.scale(&BigRational::from_integer(2.into())) - QuadSurd::int(2, 3);
    r.check("max: 1+sqrt3 solves c^2 = 2c + 2", is_zero(&poly));
    r.check("max: other root 1-sqrt3 is negative", q((1, 1), (-1, 1), 3).sign() == Ordering::Less);
    let m = c.square() - q((1, 2), (0, 1), 3);
    r.check("max: c^2 - 1/2 = 7/2 + 2 sqrt3", m == q((7, 2), (2, 1), 3));

    r.check(
        "(13 + 4 sqrt10) + 1 = (2 + sqrt10)^2",
        q((13, 1), (4, 1), 10) + QuadSurd::int(1, 10) == q((2, 1), (1, 1), 10).square(),
    );
    r.check(
        "(7/2 + 2 sqrt3) + 1/2 = (1 + sqrt3)^2",
        q((7, 2), (2, 1), 3) + q((1, 2), (0, 1), 3) == q((1, 1), (1, 1), 3).square(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut ok = true;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=16);
        let a: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1e3)).collect();
        let lhs: f64 = a.iter().map(|x| x.sqrt()).sum();
        let rhs = (k as f64 * a.iter().sum::<f64>()).sqrt();
        ok &= lhs <= rhs * (1.0 + 1e-12);
    }
    r.check("sum sqrt(a_i) <= sqrt(k sum a_i) on 10^4 samples", ok);
    r
}

/// For 2 ≤ p ≤ p_max: `p + 6√p + 33 ≤ (√(p+25) + 3)²` and the aggregation
/// `p + 16 + 4√10 + 2√3 + 2(1+√3)√(p-2) ≤ p + 6√p + 33`.
pub fn verify_chain_rp(p_max: u64) -> ChainReport {
    let results: Vec<(u64, bool, Option<bool>)> = (2..=p_max)
        .into_par_iter()
        .map(|p| {
            // 6√p - 1 ≤ 6√(p+25)
            let pi = p as i128;
            let main = sign_two_roots(-1, 1, 36 * pi, -1, 36 * (pi + 25)) != Ordering::Greater;
            let p = p as i64;
            let agg = decide_sign(|prec| {
                let r = |x: i64| Bounds::int(x, prec).sqrt();
                let two = Bounds::int(2, prec);
                Bounds::int(4, prec) * r(10) + two.clone() * r(3) + two.clone() * r(p - 2)
                    + two * r(3 * (p - 2))
                    - Bounds::int(6, prec) * r(p)
                    - Bounds::int(17, prec)
            });
            (p as u64, main, agg.map(|s| s != Ordering::Greater))
        })
        .collect();
    let mut r = ChainReport { chain: "Rp", ..Default::default() };
    for (p, main, agg) in results {
        r.cases += 2;
        if !main || agg == Some(false) {
            r.violations += 1;
            r.first_violation.get_or_insert((p, 0));
        }
        if agg.is_none() {
            r.undecided += 1;
        }
    }
    r
}

/// For 2 ≤ p ≤ p_max, 2 ≤ q ≤ q_max: `3p + 2q + 97 + 18√p ≤ (√(3p+2q+60) + 6)²`.
pub fn verify_chain_rpq(p_max: u64, q_max: u64) -> ChainReport {
    let per_p: Vec<(u64, u64, Option<u64>)> = (2..=p_max)
        .into_par_iter()
        .map(|p| {
            let pi = p as i128;
            let mut bad = 0;
            let mut first = None;
            for q in 2..=q_max {
                // 1 + 18√p ≤ 12√(3p+2q+60)
                let qi = q as i128;
                if sign_two_roots(1, 1, 324 * pi, -1, 144 * (3 * pi + 2 * qi + 60)) == Ordering::Greater {
                    bad += 1;
                    first.get_or_insert(q);
                }
            }
            (p, bad, first)
        })
        .collect();
    let mut r = ChainReport { chain: "Rpq", ..Default::default() };
    for (p, bad, first) in per_p {
        r.cases += q_max.saturating_sub(1);
        r.violations += bad;
        if let (None, Some(q)) = (r.first_violation, first) {
            r.first_violation = Some((p, q));
        }
    }
    r
}
