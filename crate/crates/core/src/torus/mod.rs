//! Exact checks of the region bookkeeping on the torus T² = R²/Z² and of the
//! coordinate-set mappings in T^p.
//!
//! Coordinates live in (−1/2, 1/2]. The inner square is |x|, |y| < 1/4.
//! Its axes and diagonals cut it into eight triangles; `A_i` is a pair of
//! antipodal triangles, `A_i'` a pair of antipodal triangles in the bands
//! |x| ≥ 1/4 or |y| ≥ 1/4:
//!
//! | set   | triangle with x > 0 or (x = 0, y > 0)  | edges kept           |
//! |-------|----------------------------------------|----------------------|
//! | A1    | 0 ≤ x < y                              | ray x = 0            |
//! | A2    | 0 < y ≤ x                              | ray y = x            |
//! | A3    | 0 ≤ −y < x                             | ray y = 0            |
//! | A4    | 0 < x ≤ −y                             | ray y = −x           |
//! | A1'   | x ≥ 1/4, y < 1/4, x − y < 1/4          | x = 1/4              |
//! | A2'   | y ≥ 1/4, x < 1/4, y − x < 1/4          | y = 1/4              |
//! | A3'   | y ≤ −1/4, x < 1/4, x + y > −1/4        | y = −1/4             |
//! | A4'   | x ≥ 1/4, y > −1/4, x + y < 1/4         | x = 1/4              |
//!
//! Each set is closed under x ↦ −x. Every `A_i` keeps the ray bounding its
//! triangle counter-clockwise and drops the clockwise one; every `A_i'`
//! keeps only its edge on the inner square. No set contains a triangle
//! vertex.

mod check;

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

pub use check::{
    check_bp_cp, check_mapping_identities, check_partition, check_symmetry, BpCpReport,
    IdentityReport, PartitionReport, SymmetryReport, IDENTITIES,
};

pub type Q = Ratio<i64>;

/// Point of T^p with every coordinate reduced into (−1/2, 1/2].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoint(Vec<Q>);

fn reduce(q: Q) -> Q {
    let half = Q::new(1, 2);
    // q - ⌈q - 1/2⌉ lies in (−1/2, 1/2]
    let r = q - (q - half).ceil();
    debug_assert!(r > -half && r <= half);
    r
}

impl QPoint {
    pub fn new(coords: Vec<Q>) -> Self {
        QPoint(coords.into_iter().map(reduce).collect())
    }

    /// `(n_0/den, n_1/den, …)`.
    pub fn grid(nums: &[i64], den: i64) -> Self {
        Self::new(nums.iter().map(|&n| Q::new(n, den)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn x(&self) -> Q {
        self.0[0]
    }

    pub fn y(&self) -> Q {
        self.0[1]
    }

    pub fn neg(&self) -> Self {
        Self::new(self.0.iter().map(|&c| -c).collect())
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `g_ij^± = I ± e_ij` acting on T^p: coordinate i += ±coordinate j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Elementary {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

impl Elementary {
    pub const fn new(i: usize, j: usize, sign: i8) -> Self {
        Elementary { i, j, sign }
    }

    pub fn inverse(self) -> Self {
        Elementary { sign: -self.sign, ..self }
    }

    pub fn act(self, x: &QPoint) -> QPoint {
        let mut c = x.0.clone();
        c[self.i] = c[self.i] + x.0[self.j] * Q::from(self.sign as i64);
        QPoint::new(c)
    }
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}{}{}", self.i + 1, self.j + 1, if self.sign > 0 { "+" } else { "-" })
    }
}

/// `g` on a point of T² (0-based indices: g12 is `Elementary::new(0, 1, ±1)`).
pub fn act_sl2(g: Elementary, x: &QPoint) -> QPoint {
    assert_eq!(x.dim(), 2, "act_sl2 needs a point of T^2");
    g.act(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Region {
    A1,
    A2,
    A3,
    A4,
    A1p,
    A2p,
    A3p,
    A4p,
    Origin,
    BandX,
    BandY,
    CentralResidue,
}

impl Region {
    pub const A: [Region; 4] = [Region::A1, Region::A2, Region::A3, Region::A4];
    pub const A_PRIME: [Region; 4] = [Region::A1p, Region::A2p, Region::A3p, Region::A4p];

    pub fn name(self) -> &'static str {
        match self {
            Region::A1 => "A1",
            Region::A2 => "A2",
            Region::A3 => "A3",
            Region::A4 => "A4",
            Region::A1p => "A1'",
            Region::A2p => "A2'",
            Region::A3p => "A3'",
            Region::A4p => "A4'",
            Region::Origin => "Origin",
            Region::BandX => "BandX",
            Region::BandY => "BandY",
            Region::CentralResidue => "CentralResidue",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn quarter() -> Q {
    Q::new(1, 4)
}

fn in_inner_square(x: Q, y: Q) -> bool {
    x.abs() < quarter() && y.abs() < quarter()
}

// The half-plane representative: x > 0, or x = 0 and y > 0.
fn positive_side(x: Q, y: Q) -> (Q, Q) {
    if x.is_positive() || (x.is_zero() && y.is_positive()) { (x, y) } else { (-x, -y) }
}

fn a_positive(r: Region, x: Q, y: Q) -> bool {
    let z = Q::zero();
    match r {
        Region::A1 => z <= x && x < y,
        Region::A2 => z < y && y <= x,
        Region::A3 => z <= -y && -y < x,
        Region::A4 => z < x && x <= -y,
        _ => false,
    }
}

fn a_prime_positive(r: Region, x: Q, y: Q) -> bool {
    let q = quarter();
    match r {
        Region::A1p => x >= q && y < q && x - y < q,
        Region::A2p => y >= q && x < q && y - x < q,
        Region::A3p => y <= -q && x < q && x + y > -q,
        Region::A4p => x >= q && y > -q && x + y < q,
        _ => false,
    }
}

/// Membership of a point of T² in one of the eight triangle-pair sets.
/// Bands, origin and residue are answered by `classify_t2`.
pub fn in_region(r: Region, p: &QPoint) -> bool {
    let (x, y) = (p.x(), p.y());
    match r {
        Region::A1 | Region::A2 | Region::A3 | Region::A4 => {
            if !in_inner_square(x, y) || (x.is_zero() && y.is_zero()) {
                return false;
            }
            let (u, v) = positive_side(x, y);
            a_positive(r, u, v)
        }
        Region::A1p | Region::A2p | Region::A3p | Region::A4p => {
            a_prime_positive(r, x, y) || a_prime_positive(r, -x, -y)
        }
        Region::Origin => p.is_origin(),
        Region::BandX => x.abs() >= quarter(),
        Region::BandY => y.abs() >= quarter(),
        Region::CentralResidue => classify_t2(p) == Region::CentralResidue,
    }
}

/// Single label with precedence Origin > A > A' > BandX > BandY > residue.
pub fn classify_t2(p: &QPoint) -> Region {
    assert_eq!(p.dim(), 2);
    if p.is_origin() {
        return Region::Origin;
    }
    let order = Region::A.iter().chain(Region::A_PRIME.iter());
    if let Some(&r) = order.into_iter().find(|&&r| in_region(r, p)) {
        return r;
    }
    if p.x().abs() >= quarter() {
        Region::BandX
    } else if p.y().abs() >= quarter() {
        Region::BandY
    } else {
        Region::CentralResidue
    }
}

/// Machine-readable description of the boundary convention.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionRow {
    pub label: &'static str,
    pub predicate: &'static str,
    pub kept_edges: &'static str,
}

pub fn partition_table() -> Vec<PartitionRow> {
    let row = |label, predicate, kept_edges| PartitionRow { label, predicate, kept_edges };
    vec![
        row("Origin", "x = 0 and y = 0", "-"),
        row("A1", "|x|,|y| < 1/4 and (0 <= x < y or y < x <= 0)", "ray x = 0 (both halves)"),
        row("A2", "|x|,|y| < 1/4 and (0 < y <= x or x <= y < 0)", "ray y = x (both halves)"),
        row("A3", "|x|,|y| < 1/4 and (0 <= -y < x or x < -y <= 0)", "ray y = 0 (both halves)"),
        row("A4", "|x|,|y| < 1/4 and (0 < x <= -y or -y <= x < 0)", "ray y = -x (both halves)"),
        row("A1'", "(x >= 1/4, y < 1/4, x - y < 1/4) or its negative", "x = +-1/4, 0 < +-y < 1/4"),
        row("A2'", "(y >= 1/4, x < 1/4, y - x < 1/4) or its negative", "y = +-1/4, 0 < +-x < 1/4"),
        row("A3'", "(y <= -1/4, x < 1/4, x + y > -1/4) or its negative", "y = -+1/4, 0 < +-x < 1/4"),
        row("A4'", "(x >= 1/4, y > -1/4, x + y < 1/4) or its negative", "x = +-1/4, -1/4 < +-y < 0"),
        row("BandX", "|x| >= 1/4, not in any A'", "-"),
        row("BandY", "|y| >= 1/4, |x| < 1/4, not in any A'", "-"),
        row("CentralResidue", "anything else (empty under this convention)", "-"),
    ]
}

/// `B_i = {y : y_k = 0 for k ≤ i}` with 1-based `i`.
pub fn in_b(i: usize, y: &QPoint) -> bool {
    y.coords().iter().take(i).all(Zero::is_zero)
}

/// `C_i = {y : y_1 = y_i ≠ 0, y_k = 0 for 1 < k < i}` with 1-based `i ≥ 2`.
pub fn in_c(i: usize, y: &QPoint) -> bool {
    let c = y.coords();
    !c[0].is_zero() && c[0] == c[i - 1] && c[1..i - 1].iter().all(Zero::is_zero)
}

/// All points `(a_1/q, …, a_p/q)` with every `a_k` in `(−q/2, q/2]`.
pub fn grid_points(p: usize, q: i64) -> impl Iterator<Item = QPoint> {
    let lo = -((q - 1) / 2);
    let hi = q / 2;
    let width = (hi - lo + 1) as u64;
    let total = width.pow(p as u32);
    (0..total).map(move |mut idx| {
        let mut nums = Vec::with_capacity(p);
        for _ in 0..p {
            nums.push(lo + (idx % width) as i64);
            idx /= width;
        }
        QPoint::grid(&nums, q)
    })
}

pub(crate) fn gcd_den(p: &QPoint) -> i64 {
    p.coords().iter().fold(1i64, |acc, c| acc.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64, d: i64) -> QPoint {
        QPoint::grid(&[a, b], d)
    }

    #[test]
    fn reduction_into_fundamental_domain() {
        assert_eq!(QPoint::grid(&[-1, 3], 2), pt(1, 1, 2));
        assert_eq!(QPoint::grid(&[5, -7], 4), pt(1, 1, 4));
        assert_eq!(QPoint::grid(&[0], 1).coords()[0], Q::zero());
    }

    #[test]
    fn action_examples() {
        let g12p = Elementary::new(0, 1, 1);
        let g21m = Elementary::new(1, 0, -1);
        assert_eq!(act_sl2(g12p, &pt(0, 1, 4)), pt(1, 1, 4));
        assert_eq!(act_sl2(g21m, &pt(1, 1, 2)), pt(1, 0, 2));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_t2(&pt(0, 0, 1)), Region::Origin);
        assert_eq!(classify_t2(&pt(3, 0, 8)), Region::BandX);
        assert_eq!(classify_t2(&pt(2, 1, 16)), Region::A2);
        assert_eq!(classify_t2(&pt(0, 1, 8)), Region::A1);
        assert_eq!(classify_t2(&pt(0, -1, 8)), Region::A1);
        assert_eq!(classify_t2(&pt(1, 0, 8)), Region::A3);
        assert_eq!(classify_t2(&pt(2, 1, 8)), Region::A1p);
        assert_eq!(classify_t2(&pt(1, 2, 4)), Region::BandX);
        assert_eq!(classify_t2(&pt(1, 3, 8)), Region::BandY);
    }

    #[test]
    fn coordinate_sets() {
        let y = QPoint::grid(&[0, 0, 1], 8);
        assert!(in_b(2, &y) && !in_b(3, &y));
        let g13 = Elementary::new(0, 2, 1);
        let img = g13.act(&y);
        assert_eq!(img, QPoint::grid(&[1, 0, 1], 8));
        assert!(in_c(3, &img) && !in_c(2, &img));
    }

    #[test]
    fn grid_enumeration() {
        let pts: Vec<QPoint> = grid_points(2, 4).collect();
        assert_eq!(pts.len(), 16);
        assert!(pts.contains(&pt(1, 1, 2)));
        assert!(pts.iter().all(|p| p.coords().iter().all(|c| *c > Q::new(-1, 2))));
        assert_eq!(grid_points(3, 5).count(), 125);
    }
}
