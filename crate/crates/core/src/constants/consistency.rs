//! Cross-checks between stated constants and the bounds they are derived from.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::surd::{decide_sign, Bounds};
use super::{h_closed, rel_const_k, shalom_bound, HTable, RecursionParams};

/// A stated bound that does not follow from the stated inputs.
#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub id: &'static str,
    pub description: &'static str,
    /// How many n in the range fail.
    pub failing: u64,
    pub first_n: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub id: &'static str,
    pub description: &'static str,
    pub holds: bool,
}

/// Informational: an intermediate step that is off but does not affect any
/// final bound.
#[derive(Clone, Debug, Serialize)]
pub struct Note {
    pub id: &'static str,
    pub description: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub n_min: u64,
    pub n_max: u64,
    pub flags: Vec<Flag>,
    pub verified: Vec<Relation>,
    pub notes: Vec<Note>,
}

impl ConsistencyReport {
    pub fn flag_ids(&self) -> Vec<&'static str> {
        self.flags.iter().map(|f| f.id).collect()
    }

    pub fn all_verified(&self) -> bool {
        self.verified.iter().all(|r| r.holds)
    }
}

const FLAG_50: &str = "kazhdan_a_proof_line_50_vs_64";
const FLAG_33: &str = "remark_33_vs_42";

// √2/(90√n + 4000) ≥ (50√n + 2850)⁻¹  ⟺  √(5000n) + √(2·2850²) − 90√n − 4000 ≥ 0
fn proof_line_50_holds(n: u64) -> bool {
    let n = n as i64;
    let s = decide_sign(|p| {
        Bounds::int(5000 * n, p).sqrt() + Bounds::int(2 * 2850 * 2850, p).sqrt()
            - Bounds::int(90, p) * Bounds::int(n, p).sqrt()
            - Bounds::int(4000, p)
    });
    s != Some(Ordering::Less)
}

/// Flags that apply at a single n.
pub(crate) fn flags_at(n: u64) -> Vec<String> {
    let mut v = Vec::new();
    if !proof_line_50_holds(n) {
        v.push(FLAG_50.to_string());
    }
    // (33√n + 317)⁻¹ exceeds (42√n + 860)⁻¹ for every n ≥ 0
    v.push(FLAG_33.to_string());
    v
}

fn count_failing(lo: u64, hi: u64, holds: impl Fn(u64) -> bool + Sync + Send) -> (u64, Option<u64>) {
    let failing: Vec<u64> = (lo..=hi).into_par_iter().filter(|&n| !holds(n)).collect();
    (failing.len() as u64, failing.first().copied())
}

fn all_n(lo: u64, hi: u64, holds: impl Fn(u64) -> bool + Sync + Send) -> bool {
    (lo..=hi).into_par_iter().all(holds)
}

/// Checks every derived constant over `n_min..=n_max` (n_min ≥ 3).
pub fn consistency_report(n_min: u64, n_max: u64) -> ConsistencyReport {
    let n_min = n_min.max(3);
    let table = HTable::compute(n_max);
    let sqrt = |n: u64| (n as f64).sqrt();
    let log2 = |n: u64| (n as f64).log2();
    let s2 = std::f64::consts::SQRT_2;
    let mut flags = Vec::new();
    let mut verified = Vec::new();
    let mut notes = Vec::new();

    let (failing, first_n) = count_failing(n_min, n_max, proof_line_50_holds);
    if failing > 0 {
        flags.push(Flag {
            id: FLAG_50,
            description: "sqrt2/h(n) >= (50 sqrt n + 2850)^-1 does not follow from h(n) < 90 sqrt n + 4000; \
                          the theorem statement's (64 sqrt n + 2850)^-1 does",
            failing,
            first_n,
        });
    }
    // 33 < 42 and 317 < 860, so the remark's bound is strictly larger than
    // what its h estimate yields, at every n.
    flags.push(Flag {
        id: FLAG_33,
        description: "h(n) < sqrt2 (42 sqrt n + 860) gives K >= (42 sqrt n + 860)^-1, not the stated (33 sqrt n + 317)^-1",
        failing: n_max + 1 - n_min,
        first_n: Some(n_min),
    });

    verified.push(Relation {
        id: "theorem_a_from_h_closed",
        description: "sqrt2/(90 sqrt n + 4000) >= (64 sqrt n + 2850)^-1 for all n",
        holds: super::theorem_a_from_h_closed(),
    });
    verified.push(Relation {
        id: "h_dp_below_h_closed",
        description: "H(n) <= 90 sqrt n + 4000 on the range",
        holds: all_n(n_min, n_max, |n| table.h[n as usize] < h_closed(n)),
    });
    verified.push(Relation {
        id: "h_dp_below_shalom",
        description: "H(n) <= 33n^2 - 11n + 1152 on the range",
        holds: all_n(n_min, n_max, |n| table.h[n as usize] <= shalom_bound(n)),
    });
    verified.push(Relation {
        id: "shalom_h7",
        description: "33*49 - 11*7 + 1152 = 2692",
        holds: 33 * 49 - 11 * 7 + 1152 == 2692,
    });
    verified.push(Relation {
        id: "ten_k_is_recursion_step",
        description: "10 k(n) = sqrt(250 n + 6000) + 60 (100 (5n/2 + 60) = 250 n + 6000)",
        holds: all_n(n_min.max(4), n_max, |n| {
            let a = 10.0 * rel_const_k(n).expect("n >= 4");
            let b = (250.0 * n as f64 + 6000.0).sqrt() + 60.0;
            (a - b).abs() <= 1e-12 * b
        }),
    });
    let p = RecursionParams::h_instance();
    verified.push(Relation {
        id: "recursion_a_constant",
        description: "sqrt250/(1 - sqrt(2/3)) = 15 sqrt10 + 10 sqrt15",
        holds: (p.big_a() - (15.0 * 10f64.sqrt() + 10.0 * 15f64.sqrt())).abs() < 1e-10,
    });
    verified.push(Relation {
        id: "theorem_aprime_from_remark_h",
        description: "sqrt2 (5 sqrt5 + 1)(sqrt2 + 1) sqrt n + 22 log2 n + 350 < sqrt2 (42 sqrt n + 860)",
        holds: all_n(n_min, n_max, |n| {
            s2 * (5.0 * 5f64.sqrt() + 1.0) * (s2 + 1.0) * sqrt(n) + 22.0 * log2(n) + 350.0
                < s2 * (42.0 * sqrt(n) + 860.0)
        }),
    });
    verified.push(Relation {
        id: "theorem_adoubleprime_from_remark_h",
        description: "8 sqrt3 (sqrt2 + 1) sqrt n + 8 log2 n / 3 + 100 < sqrt2 (24 sqrt n + 100), \
                      and (24 sqrt n + 100)^-1 >= (31 sqrt n + 700)^-1",
        holds: all_n(n_min, n_max, |n| {
            8.0 * 3f64.sqrt() * (s2 + 1.0) * sqrt(n) + 8.0 * log2(n) / 3.0 + 100.0 < s2 * (24.0 * sqrt(n) + 100.0)
        }),
    });
    verified.push(Relation {
        id: "lower_below_upper",
        description: "every lower bound is at most sqrt(2/n)",
        holds: all_n(n_min, n_max, |n| {
            let up = super::kazhdan_upper(n);
            super::kazhdan_lower_a(n) <= up
                && super::kazhdan_lower_a_prime(n) <= up
                && super::kazhdan_lower_a_double_prime(n) <= up
                && s2 / table.h[n as usize] <= up
        }),
    });

    let stated_b = 675.0 * (2.0 + 6f64.sqrt());
    notes.push(Note {
        id: "recursion_b_instantiation",
        description: format!(
            "B = (b + a/(1-l^2))/((1-l) sqrt a) = {:.2} for a=250, b=6000; the stated 675(2+sqrt6) = {stated_b:.2} \
             uses sqrt150 in the denominator. Dominance holds with either value.",
            p.big_b()
        ),
    });
    let (failing, first) = count_failing(n_min, n_max, |n| {
        (15.0 * 10f64.sqrt() + 10.0 * 15f64.sqrt()) * sqrt(n) + 60.0 * (n as f64).ln() / 1.5f64.ln() + 3900.0
            < 90.0 * sqrt(n) + 4000.0
    });
    if failing > 0 {
        notes.push(Note {
            id: "h_intermediate_chain",
            description: format!(
                "(15 sqrt10 + 10 sqrt15) sqrt n + 60 log_1.5 n + 3900 < 90 sqrt n + 4000 fails for {failing} n \
                 in range (first n = {}); H(n) < 90 sqrt n + 4000 itself holds",
                first.unwrap_or(0)
            ),
        });
    }
    notes.push(Note {
        id: "rpq_square_term",
        description: "aggregation in the pq lemma writes (q-1)^2 eps^2 where the previous line has (q-1) eps^2; \
                      with (q-1) the next line follows by AM-GM"
            .into(),
    });

    ConsistencyReport { n_min, n_max, flags, verified, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_two_flags() {
        let r = consistency_report(3, 3000);
        assert_eq!(r.flag_ids(), vec![FLAG_50, FLAG_33]);
        assert!(r.all_verified(), "{:?}", r.verified);
        assert_eq!(r.flags[0].first_n, Some(3));
    }

    #[test]
    fn per_n_flags() {
        assert_eq!(flags_at(100), vec![FLAG_50.to_string(), FLAG_33.to_string()]);
    }
}
