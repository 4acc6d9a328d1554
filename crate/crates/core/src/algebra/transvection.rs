//! Elementary and generalized elementary transvections.
//!
//! Convention used throughout the crate: `GenTransvection { I, J, alpha }`
//! stands for the unipotent matrix `L` with `L[J[b]][I[a]] = alpha[a][b]`,
//! i.e. left multiplication adds `Σ_a alpha[a][b] · row I[a]` into row `J[b]`.
//! Read on the columns of a k×n vector system `V` the same operation is
//! `v_j += Σ_i alpha[i][j] · v_i`, which is `V ↦ V · Lᵀ`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, IntMat};

/// `I + m·e_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemTransvection {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    #[serde(with = "bigint_str")]
    pub m: BigInt,
}

impl ElemTransvection {
    pub fn new(n: usize, i: usize, j: usize, m: impl Into<BigInt>) -> Result<Self, AlgebraError> {
        if i == j || i >= n || j >= n {
            return Err(AlgebraError::InvalidOp(format!("e_({i},{j}) in dimension {n}")));
        }
        Ok(ElemTransvection { n, i, j, m: m.into() })
    }

    pub fn to_matrix(&self) -> IntMat {
        let mut a = IntMat::identity(self.n);
        a[(self.i, self.j)] = self.m.clone();
        a
    }

    pub fn inverse(&self) -> Self {
        ElemTransvection { m: -&self.m, ..self.clone() }
    }

    /// The same matrix as a one-entry generalized transvection.
    pub fn to_general(&self) -> GenTransvection {
        GenTransvection {
            n: self.n,
            rows_from: vec![self.j],
            rows_into: vec![self.i],
            alpha: IntMat::from_vec(1, 1, vec![self.m.clone()]).expect("1x1"),
        }
    }

    /// `a ← self · a`: row i += m · row j.
    pub fn apply_left(&self, a: &mut IntMat) {
        a.add_row_multiple(self.i, self.j, &self.m);
    }

    /// `a ← a · self`: column j += m · column i.
    pub fn apply_right(&self, a: &mut IntMat) {
        a.add_col_multiple(self.j, self.i, &self.m);
    }
}

/// `E_{I,J,α}`: adds α-combinations of the `I`-indexed rows into the
/// `J`-indexed rows. Serialized with keys `I`, `J`, `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenTransvection {
    pub n: usize,
    #[serde(rename = "I")]
    pub rows_from: Vec<usize>,
    #[serde(rename = "J")]
    pub rows_into: Vec<usize>,
    pub alpha: IntMat,
}

impl GenTransvection {
    pub fn new(
        n: usize,
        rows_from: Vec<usize>,
        rows_into: Vec<usize>,
        alpha: IntMat,
    ) -> Result<Self, AlgebraError> {
        let t = GenTransvection { n, rows_from, rows_into, alpha };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let (ii, jj) = (&self.rows_from, &self.rows_into);
        if self.alpha.rows() != ii.len() || self.alpha.cols() != jj.len() {
            return Err(AlgebraError::InvalidOp(format!(
                "alpha is {}x{} but |I| = {}, |J| = {}",
                self.alpha.rows(),
                self.alpha.cols(),
                ii.len(),
                jj.len()
            )));
        }
        let mut seen = vec![false; self.n];
        for &x in ii.iter().chain(jj) {
            if x >= self.n {
                return Err(AlgebraError::InvalidOp(format!("index {x} outside 0..{}", self.n)));
            }
            if seen[x] {
                return Err(AlgebraError::InvalidOp(format!(
                    "index {x} repeated or shared by I and J"
                )));
            }
            seen[x] = true;
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Self {
        GenTransvection { n, rows_from: vec![], rows_into: vec![], alpha: IntMat::zeros(0, 0) }
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha.is_zero()
    }

    pub fn to_matrix(&self) -> IntMat {
        let mut l = IntMat::identity(self.n);
        for (a, &i) in self.rows_from.iter().enumerate() {
            for (b, &j) in self.rows_into.iter().enumerate() {
                l[(j, i)] = self.alpha[(a, b)].clone();
            }
        }
        l
    }

    pub fn inverse(&self) -> Self {
        let mut alpha = self.alpha.clone();
        for a in 0..alpha.rows() {
            for b in 0..alpha.cols() {
                alpha[(a, b)] = -&alpha[(a, b)];
            }
        }
        GenTransvection { alpha, ..self.clone() }
    }

    /// Shifts every index by `offset` inside a larger ambient dimension.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        GenTransvection {
            n,
            rows_from: self.rows_from.iter().map(|x| x + offset).collect(),
            rows_into: self.rows_into.iter().map(|x| x + offset).collect(),
            alpha: self.alpha.clone(),
        }
    }

    /// `a ← L · a`.
    pub fn apply_left(&self, a: &mut IntMat) {
        for (b, &j) in self.rows_into.iter().enumerate() {
            for (ai, &i) in self.rows_from.iter().enumerate() {
                a.add_row_multiple(j, i, &self.alpha[(ai, b)]);
            }
        }
    }

    /// `a ← a · L`.
    pub fn apply_right(&self, a: &mut IntMat) {
        for (ai, &i) in self.rows_from.iter().enumerate() {
            for (b, &j) in self.rows_into.iter().enumerate() {
                a.add_col_multiple(i, j, &self.alpha[(ai, b)]);
            }
        }
    }

    /// Acts on the columns of a k×n system: `v_J[b] += Σ_a alpha[a][b] v_I[a]`.
    pub fn apply_to_system(&self, v: &mut IntMat) {
        for (b, &j) in self.rows_into.iter().enumerate() {
            for (ai, &i) in self.rows_from.iter().enumerate() {
                v.add_col_multiple(j, i, &self.alpha[(ai, b)]);
            }
        }
    }

    /// Nonzero entries as elementary transvections, row-major in alpha. The
    /// factors pairwise commute because I and J are disjoint.
    pub fn elementary_factors(&self) -> Vec<ElemTransvection> {
        let mut out = Vec::new();
        for (a, &i) in self.rows_from.iter().enumerate() {
            for (b, &j) in self.rows_into.iter().enumerate() {
                let m = &self.alpha[(a, b)];
                if !m.is_zero() {
                    out.push(ElemTransvection { n: self.n, i: j, j: i, m: m.clone() });
                }
            }
        }
        out
    }

    /// Σ |alpha_ab|: length of the expansion into ±1 generators.
    pub fn word_length(&self) -> BigInt {
        self.alpha.entries().iter().map(|x| x.abs()).sum()
    }
}

pub(crate) mod bigint_str {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn elementary_matrix() {
        let e = ElemTransvection::new(3, 0, 1, 1).unwrap();
        let mut want = IntMat::identity(3);
        want[(0, 1)] = BigInt::one();
        assert_eq!(e.to_matrix(), want);
        assert_eq!(e.to_general().to_matrix(), want);
        assert!(ElemTransvection::new(3, 1, 1, 1).is_err());
        assert!(ElemTransvection::new(3, 0, 3, 1).is_err());
    }

    #[test]
    fn block_row_pattern() {
        // I = {2}, J = {0, 1}, alpha = [4 7]: row 0 += 4 row 2, row 1 += 7 row 2
        let t = GenTransvection::new(3, vec![2], vec![0, 1], IntMat::from_rows(&[vec![4, 7]])).unwrap();
        let want = IntMat::from_rows(&[vec![1, 0, 4], vec![0, 1, 7], vec![0, 0, 1]]);
        assert_eq!(t.to_matrix(), want);
        assert!((&t.to_matrix() * &t.inverse().to_matrix()).is_identity());
        assert!(t.to_matrix().det().unwrap().is_one());
    }

    #[test]
    fn rejects_overlap() {
        let r = GenTransvection::new(3, vec![0, 1], vec![1], IntMat::from_rows(&[vec![1], vec![1]]));
        assert!(matches!(r, Err(AlgebraError::InvalidOp(_))));
        let r = GenTransvection::new(3, vec![0], vec![1], IntMat::from_rows(&[vec![1, 2]]));
        assert!(r.is_err());
    }

    #[test]
    fn in_place_actions_match_products() {
        let t = GenTransvection::new(
            4,
            vec![3, 0],
            vec![1],
            IntMat::from_rows(&[vec![-2], vec![5]]),
        )
        .unwrap();
        let g = IntMat::from_rows(&[
            vec![1, 2, 3, 4],
            vec![0, 1, -1, 2],
            vec![7, 0, 1, 1],
            vec![2, 2, 0, 1],
        ]);
        let mut left = g.clone();
        t.apply_left(&mut left);
        assert_eq!(left, &t.to_matrix() * &g);
        let mut right = g.clone();
        t.apply_right(&mut right);
        assert_eq!(right, &g * &t.to_matrix());
        let mut sys = g.clone();
        t.apply_to_system(&mut sys);
        assert_eq!(sys, &g * &t.to_matrix().transpose());
        let prod = t
            .elementary_factors()
            .iter()
            .fold(IntMat::identity(4), |acc, e| &acc * &e.to_matrix());
        assert_eq!(prod, t.to_matrix());
        assert_eq!(t.word_length(), BigInt::from(7));
    }
}
