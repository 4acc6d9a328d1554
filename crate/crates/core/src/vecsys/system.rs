use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::VecSysError;
use crate::algebra::{column_hermite, is_complete, reduce_mod_p, GenTransvection, IntMat};
use crate::arith::{is_prime_u64, is_squarefree};

/// Coefficient ring of a vector system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Integers,
    Prime(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `n` vectors in `R^k`, stored as the columns of a k×n matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorSystem {
    mat: IntMat,
    ring: Ring,
}

impl VectorSystem {
    /// Validates completeness. Over F_p entries are reduced into [0, p).
    pub fn new(mat: IntMat, ring: Ring) -> Result<Self, VecSysError> {
        let sys = Self::unchecked(mat, ring)?;
        if !sys.is_complete()? {
            return Err(VecSysError::NotComplete);
        }
        Ok(sys)
    }

    pub(crate) fn unchecked(mat: IntMat, ring: Ring) -> Result<Self, VecSysError> {
        let mat = match ring {
            Ring::Integers => mat,
            Ring::Prime(p) => {
                if !is_prime_u64(p) {
                    return Err(VecSysError::Policy(format!("{p} is not prime")));
                }
                mat.mod_floor(&BigInt::from(p))
            }
        };
        Ok(VectorSystem { mat, ring })
    }

    /// The standard system: e_0..e_{k-1} followed by zero vectors.
    pub fn standard(k: usize, n: usize, ring: Ring) -> Result<Self, VecSysError> {
        if k > n {
            return Err(VecSysError::Policy(format!("k = {k} exceeds n = {n}")));
        }
        let mut m = IntMat::zeros(k, n);
        for i in 0..k {
            m[(i, i)] = BigInt::one();
        }
        Self::new(m, ring)
    }

    pub fn k(&self) -> usize {
        self.mat.rows()
    }

    pub fn n(&self) -> usize {
        self.mat.cols()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    pub fn vector(&self, j: usize) -> Vec<BigInt> {
        self.mat.col(j)
    }

    pub fn is_standard(&self) -> bool {
        let k = self.k();
        (0..k).all(|i| {
            (0..self.n()).all(|j| {
                let x = &self.mat[(i, j)];
                if i == j { x.is_one() } else { x.is_zero() }
            })
        })
    }

    pub fn is_complete(&self) -> Result<bool, VecSysError> {
        Ok(match self.ring {
            Ring::Integers => is_complete(&self.mat)?,
            Ring::Prime(p) => {
                if self.k() > self.n() {
                    return Err(VecSysError::Policy("more dimensions than vectors".into()));
                }
                reduce_mod_p(&self.mat, p)?.rank() == self.k()
            }
        })
    }

    /// Rank of the listed columns over the coefficient ring's fraction field.
    pub fn rank_of(&self, cols: &[usize]) -> usize {
        let sub = self.mat.select_cols(cols);
        match self.ring {
            Ring::Integers => column_hermite(&sub).rank(),
            Ring::Prime(p) => reduce_mod_p(&sub, p).expect("prime checked").rank(),
        }
    }

    /// Coefficients `x` over the listed columns with `Σ x_c v_c = target`, if any.
    pub fn express(&self, cols: &[usize], target: &[BigInt]) -> Option<Vec<BigInt>> {
        let k = self.k();
        match self.ring {
            Ring::Integers => column_hermite(&self.mat.select_cols(cols)).solve(target),
            Ring::Prime(p) => {
                // Solve over Z in the lattice spanned by the columns and p·Z^k.
                let bp = BigInt::from(p);
                let mut aug = IntMat::zeros(k, cols.len() + k);
                for (b, &c) in cols.iter().enumerate() {
                    for i in 0..k {
                        aug[(i, b)] = self.mat[(i, c)].clone();
                    }
                }
                for i in 0..k {
                    aug[(i, cols.len() + i)] = bp.clone();
                }
                let x = column_hermite(&aug).solve(target)?;
                Some(x[..cols.len()].iter().map(|v| num_integer::Integer::mod_floor(v, &bp)).collect())
            }
        }
    }

    /// Applies `t` in place; over F_p the result is reduced again.
    pub(crate) fn apply_in_place(&mut self, t: &GenTransvection) {
        t.apply_to_system(&mut self.mat);
        if let Ring::Prime(p) = self.ring {
            self.mat = self.mat.mod_floor(&BigInt::from(p));
        }
    }
}

/// `v_j += Σ_{i ∈ I} α_ij v_i` for every `j ∈ J`.
pub fn apply_generalized(v: &VectorSystem, t: &GenTransvection) -> Result<VectorSystem, VecSysError> {
    if t.n != v.n() {
        return Err(VecSysError::InvalidOp(format!(
            "operation on {} vectors applied to a system of {}",
            t.n,
            v.n()
        )));
    }
    t.validate().map_err(|e| VecSysError::InvalidOp(e.to_string()))?;
    let mut out = v.clone();
    out.apply_in_place(t);
    if !out.is_complete()? {
        return Err(VecSysError::NotComplete);
    }
    Ok(out)
}

/// True iff the square system `w` spans a sublattice whose quotient is a
/// product of cyclic groups of pairwise distinct prime orders, i.e. |det w|
/// is nonzero and squarefree.
pub fn is_prime_system(w: &IntMat) -> bool {
    w.is_square() && w.det().map(|d| is_squarefree(&d)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_system_examples() {
        assert!(is_prime_system(&IntMat::from_rows(&[vec![3, 0], vec![0, 5]])));
        assert!(!is_prime_system(&IntMat::from_rows(&[vec![3, 0], vec![0, 3]])));
        assert!(is_prime_system(&IntMat::from_rows(&[vec![101, 7], vec![0, 103]])));
        assert!(!is_prime_system(&IntMat::from_rows(&[vec![1, 2], vec![2, 4]])));
    }

    #[test]
    fn generalized_action() {
        let v = VectorSystem::new(IntMat::from_rows(&[vec![6, 10, 15]]), Ring::Integers).unwrap();
        let t = GenTransvection::new(3, vec![1, 2], vec![0], IntMat::from_rows(&[vec![1], vec![1]])).unwrap();
        let w = apply_generalized(&v, &t).unwrap();
        assert_eq!(w.matrix(), &IntMat::from_rows(&[vec![31, 10, 15]]));
        let zero = GenTransvection::new(3, vec![1], vec![0], IntMat::zeros(1, 1)).unwrap();
        assert_eq!(apply_generalized(&v, &zero).unwrap(), v);
        let bad = GenTransvection { n: 3, rows_from: vec![0], rows_into: vec![0], alpha: IntMat::zeros(1, 1) };
        assert!(matches!(apply_generalized(&v, &bad), Err(VecSysError::InvalidOp(_))));
    }

    #[test]
    fn modular_systems() {
        let v = VectorSystem::new(IntMat::from_rows(&[vec![6, 10, -1]]), Ring::Prime(5)).unwrap();
        assert_eq!(v.matrix(), &IntMat::from_rows(&[vec![1, 0, 4]]));
        assert!(VectorSystem::new(IntMat::from_rows(&[vec![5, 10]]), Ring::Prime(5)).is_err());
        let x = v.express(&[2], &[BigInt::from(3)]).unwrap();
        assert_eq!((&x[0] * 4) % 5, BigInt::from(3));
    }
}
