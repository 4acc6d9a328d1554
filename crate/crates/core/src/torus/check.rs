use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use num_traits::Zero;

use super::{classify_t2, gcd_den, grid_points, in_b, in_c, in_region, Elementary, QPoint, Region};

/// `g(X) = Y` with X and Y unions of regions.
#[derive(Clone, Copy, Debug)]
pub struct Identity {
    pub name: &'static str,
    pub g: Elementary,
    pub from: &'static [Region],
    pub to: &'static [Region],
}

pub const IDENTITIES: [Identity; 4] = [
    Identity {
        name: "g12+(A3 u A4') = A3 u A4",
        g: Elementary::new(0, 1, 1),
        from: &[Region::A3, Region::A4p],
        to: &[Region::A3, Region::A4],
    },
    Identity {
        name: "g21+(A3' u A4) = A3 u A4",
        g: Elementary::new(1, 0, 1),
        from: &[Region::A3p, Region::A4],
        to: &[Region::A3, Region::A4],
    },
    Identity {
        name: "g12-(A1' u A2) = A1 u A2",
        g: Elementary::new(0, 1, -1),
        from: &[Region::A1p, Region::A2],
        to: &[Region::A1, Region::A2],
    },
    Identity {
        name: "g21-(A1 u A2') = A1 u A2",
        g: Elementary::new(1, 0, -1),
        from: &[Region::A1, Region::A2p],
        to: &[Region::A1, Region::A2],
    },
];

const CONTROL: Identity = Identity {
    name: "g12+(A1) = A1 (false, control)",
    g: Elementary::new(0, 1, 1),
    from: &[Region::A1],
    to: &[Region::A1],
};

fn in_union(rs: &[Region], p: &QPoint) -> bool {
    rs.iter().any(|&r| in_region(r, p))
}

fn points_2d(q: i64) -> Vec<QPoint> {
    assert!(q >= 1, "grid denominator must be positive");
    grid_points(2, q).collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PartitionReport {
    pub q: i64,
    pub points: u64,
    /// Points in two or more of A1..A4.
    pub a_overlaps: u64,
    /// Points in two or more of A1'..A4'.
    pub a_prime_overlaps: u64,
    /// Points in some A_i' and some A_j.
    pub a_prime_meets_a: u64,
    /// Points outside A1..A4, both bands and the origin.
    pub uncovered: u64,
    /// Points whose label disagrees with the region predicates.
    pub label_mismatch: u64,
    pub violations: u64,
    pub label_counts: BTreeMap<String, u64>,
}

/// Exhaustive partition check on the grid `(1/q)Z² / Z²`.
pub fn check_partition(q: i64) -> PartitionReport {
    let pts = points_2d(q);
    let mut r = pts
        .par_iter()
        .fold(PartitionReport::default, |mut r, p| {
            let a = Region::A.iter().filter(|&&g| in_region(g, p)).count();
            let ap = Region::A_PRIME.iter().filter(|&&g| in_region(g, p)).count();
            let label = classify_t2(p);
            r.points += 1;
            r.a_overlaps += (a > 1) as u64;
            r.a_prime_overlaps += (ap > 1) as u64;
            r.a_prime_meets_a += (a > 0 && ap > 0) as u64;
            let band = in_region(Region::BandX, p) || in_region(Region::BandY, p);
            r.uncovered += (a == 0 && !band && !p.is_origin()) as u64;
            let consistent = match label {
                Region::Origin => p.is_origin(),
                Region::CentralResidue => a == 0 && ap == 0 && !band && !p.is_origin(),
                Region::BandX | Region::BandY => a == 0 && ap == 0 && in_region(label, p),
                l => in_region(l, p),
            };
            r.label_mismatch += (!consistent) as u64;
            *r.label_counts.entry(label.name().to_string()).or_default() += 1;
            r
        })
        .reduce(PartitionReport::default, |mut a, b| {
            a.points += b.points;
            a.a_overlaps += b.a_overlaps;
            a.a_prime_overlaps += b.a_prime_overlaps;
            a.a_prime_meets_a += b.a_prime_meets_a;
            a.uncovered += b.uncovered;
            a.label_mismatch += b.label_mismatch;
            for (k, v) in b.label_counts {
                *a.label_counts.entry(k).or_default() += v;
            }
            a
        });
    r.q = q;
    r.violations = r.a_overlaps + r.a_prime_overlaps + r.a_prime_meets_a + r.uncovered + r.label_mismatch;
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub name: &'static str,
    /// x ∈ X but g(x) ∉ Y.
    pub forward: u64,
    /// y ∈ Y but g⁻¹(y) ∉ X.
    pub backward: u64,
    pub first_counterexample: Option<String>,
}

impl IdentityResult {
    pub fn violations(&self) -> u64 {
        self.forward + self.backward
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub q: i64,
    pub identities: Vec<IdentityResult>,
    pub control: IdentityResult,
    /// Whether every g^±1 maps the grid bijectively to itself (checked for q ≤ 64).
    pub grid_bijective: Option<bool>,
}

impl IdentityReport {
    pub fn violations(&self) -> u64 {
        self.identities.iter().map(IdentityResult::violations).sum()
    }
}

fn check_identity(id: &Identity, pts: &[QPoint]) -> IdentityResult {
    let inv = id.g.inverse();
    let bad: Vec<(bool, &QPoint)> = pts
        .par_iter()
        .flat_map_iter(|p| {
            let f = in_union(id.from, p) && !in_union(id.to, &id.g.act(p));
            let b = in_union(id.to, p) && !in_union(id.from, &inv.act(p));
            [(f, true), (b, false)].into_iter().filter(|x| x.0).map(move |(_, fwd)| (fwd, p))
        })
        .collect();
    let forward = bad.iter().filter(|x| x.0).count() as u64;
    let first = bad.iter().min_by_key(|x| x.1).map(|(fwd, p)| {
        if *fwd {
            format!("{p} in source, image {} not in target", id.g.act(p))
        } else {
            format!("{p} in target, preimage {} not in source", inv.act(p))
        }
    });
    IdentityResult { name: id.name, forward, backward: bad.len() as u64 - forward, first_counterexample: first }
}

fn grid_bijective(q: i64, pts: &[QPoint]) -> bool {
    let gens = [(0, 1), (1, 0)]
        .into_iter()
        .flat_map(|(i, j)| [Elementary::new(i, j, 1), Elementary::new(i, j, -1)]);
    gens.into_iter().all(|g| {
        let imgs: HashSet<QPoint> = pts.iter().map(|p| g.act(p)).collect();
        imgs.len() == pts.len() && imgs.iter().all(|p| q % gcd_den(p) == 0)
    })
}

/// Both inclusions of every mapping identity, plus the negative control.
pub fn check_mapping_identities(q: i64) -> IdentityReport {
    let pts = points_2d(q);
    IdentityReport {
        q,
        identities: IDENTITIES.iter().map(|id| check_identity(id, &pts)).collect(),
        control: check_identity(&CONTROL, &pts),
        grid_bijective: (q <= 64).then(|| grid_bijective(q, &pts)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub q: i64,
    pub violations: u64,
}

/// Every A_i and A_i' is closed under x ↦ −x.
pub fn check_symmetry(q: i64) -> SymmetryReport {
    let pts = points_2d(q);
    let all: Vec<Region> = Region::A.iter().chain(Region::A_PRIME.iter()).copied().collect();
    let violations = pts
        .par_iter()
        .map(|p| {
            let n = p.neg();
            all.iter().filter(|&&r| in_region(r, p) != in_region(r, &n)).count() as u64
        })
        .sum();
    SymmetryReport { q, violations }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BpCpReport {
    pub p: usize,
    pub q: i64,
    pub points: u64,
    /// y ∈ B_{i-1} \ B_i with g_1i(y) ∉ C_i, over 3 ≤ i ≤ p.
    pub mapping_violations: u64,
    /// Points in two or more of C_2..C_p.
    pub disjoint_violations: u64,
    /// Points of C_i (i ≥ 3) outside C = {y_1 ≠ 0, y_2 = 0}.
    pub union_violations: u64,
    /// Points of C_2 outside C. Informational: C_2 forces y_2 = y_1 ≠ 0.
    pub c2_outside_c: u64,
    /// Points of B_1 \ B_2 mapped into C_2 by g_12 (the i = 2 case).
    pub i2_mapping_ok: u64,
    pub violations: u64,
}

/// Exhaustive check of the coordinate-set mappings on the grid in T^p.
pub fn check_bp_cp(p: usize, q: i64) -> BpCpReport {
    assert!((3..=5).contains(&p), "p must be in 3..=5");
    let pts: Vec<QPoint> = grid_points(p, q).collect();
    let mut r = pts
        .par_iter()
        .fold(BpCpReport::default, |mut r, y| {
            r.points += 1;
            for i in 2..=p {
                if in_b(i - 1, y) && !in_b(i, y) {
                    let img = Elementary::new(0, i - 1, 1).act(y);
                    if i >= 3 {
                        r.mapping_violations += (!in_c(i, &img)) as u64;
                    } else {
                        r.i2_mapping_ok += in_c(2, &img) as u64;
                    }
                }
            }
            let cs: Vec<usize> = (2..=p).filter(|&i| in_c(i, y)).collect();
            r.disjoint_violations += (cs.len() > 1) as u64;
            let in_big_c = !y.coords()[0].is_zero() && y.coords()[1].is_zero();
            for &i in &cs {
                if !in_big_c {
                    if i >= 3 {
                        r.union_violations += 1;
                    } else {
                        r.c2_outside_c += 1;
                    }
                }
            }
            r
        })
        .reduce(BpCpReport::default, |a, b| BpCpReport {
            points: a.points + b.points,
            mapping_violations: a.mapping_violations + b.mapping_violations,
            disjoint_violations: a.disjoint_violations + b.disjoint_violations,
            union_violations: a.union_violations + b.union_violations,
            c2_outside_c: a.c2_outside_c + b.c2_outside_c,
            i2_mapping_ok: a.i2_mapping_ok + b.i2_mapping_ok,
            ..Default::default()
        });
    r.p = p;
    r.q = q;
    r.violations = r.mapping_violations + r.disjoint_violations + r.union_violations;
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_small_grids() {
        for q in [4, 8, 12, 16, 64] {
            let r = check_partition(q);
            assert_eq!(r.violations, 0, "{r:?}");
            assert_eq!(r.points, (q * q) as u64);
        }
    }

    #[test]
    fn identities_small_grids() {
        for q in [4, 6, 8, 16, 24, 64] {
            let r = check_mapping_identities(q);
            for id in &r.identities {
                assert_eq!(id.violations(), 0, "q={q}: {id:?}");
            }
            assert_eq!(r.grid_bijective, Some(true));
        }
        assert!(check_mapping_identities(8).control.violations() > 0);
    }

    #[test]
    fn symmetric() {
        assert_eq!(check_symmetry(64).violations, 0);
    }

    #[test]
    fn bp_cp() {
        let r = check_bp_cp(3, 8);
        assert_eq!(r.points, 512);
        assert_eq!(r.violations, 0, "{r:?}");
        assert!(r.c2_outside_c > 0);
        assert_eq!(check_bp_cp(4, 4).violations, 0);
    }
}
