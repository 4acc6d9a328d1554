use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{AlgebraError, IntMat};
use crate::arith::is_prime_u64;

/// Dense matrix over F_p with entries stored as residues in [0, p).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModMat {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

fn check_prime(p: u64) -> Result<(), AlgebraError> {
    if is_prime_u64(p) { Ok(()) } else { Err(AlgebraError::NotPrime(p)) }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Multiplicative inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(p as i128) as u64
}

impl ModMat {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Result<Self, AlgebraError> {
        check_prime(p)?;
        Ok(ModMat { rows, cols, p, data: vec![0; rows * cols] })
    }

    pub fn identity(n: usize, p: u64) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(n, n, p)?;
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        Ok(m)
    }

    /// Builds from signed entries, reducing each into [0, p).
    pub fn from_i64(rows: usize, cols: usize, p: u64, entries: &[i64]) -> Result<Self, AlgebraError> {
        check_prime(p)?;
        if entries.len() != rows * cols {
            return Err(AlgebraError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let data = entries.iter().map(|&x| (x as i128).rem_euclid(p as i128) as u64).collect();
        Ok(ModMat { rows, cols, p, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn mul(&self, rhs: &ModMat) -> Result<ModMat, AlgebraError> {
        if self.p != rhs.p || self.cols != rhs.rows {
            return Err(AlgebraError::Dimension(format!(
                "cannot multiply {}x{} mod {} by {}x{} mod {}",
                self.rows, self.cols, self.p, rhs.rows, rhs.cols, rhs.p
            )));
        }
        let p = self.p;
        let mut out = vec![0u64; self.rows * rhs.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let o = &mut out[i * rhs.cols + j];
                    *o = (*o + mulm(a, rhs.get(l, j), p)) % p;
                }
            }
        }
        Ok(ModMat { rows: self.rows, cols: rhs.cols, p, data: out })
    }

    fn echelon(&self) -> (ModMat, usize, u64) {
        let p = self.p;
        let mut a = self.clone();
        let mut rank = 0;
        let mut det = 1u64;
        for c in 0..a.cols {
            let Some(r) = (rank..a.rows).find(|&r| a.get(r, c) != 0) else {
                det = 0;
                continue;
            };
            if r != rank {
                for j in 0..a.cols {
                    a.data.swap(r * a.cols + j, rank * a.cols + j);
                }
                det = (p - det) % p;
            }
            let piv = a.get(rank, c);
            det = mulm(det, piv, p);
            let inv = inv_mod(piv, p);
            for r2 in rank + 1..a.rows {
                let f = mulm(a.get(r2, c), inv, p);
                if f == 0 {
                    continue;
                }
                for j in c..a.cols {
                    let v = (a.get(r2, j) + p - mulm(f, a.get(rank, j), p)) % p;
                    a.data[r2 * a.cols + j] = v;
                }
            }
            rank += 1;
        }
        (a, rank, det)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1
    }

    pub fn det(&self) -> Result<u64, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Dimension("determinant of a non-square matrix".into()));
        }
        let (_, rank, det) = self.echelon();
        Ok(if rank < self.rows { 0 } else { det })
    }

    /// Lifts entries to integers in [0, p).
    pub fn to_intmat(&self) -> IntMat {
        let data = self.data.iter().map(|&x| BigInt::from(x)).collect();
        IntMat::from_vec(self.rows, self.cols, data).expect("shape preserved")
    }
}

impl fmt::Display for ModMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Entrywise reduction of an integer matrix modulo a prime.
pub fn reduce_mod_p(a: &IntMat, p: u64) -> Result<ModMat, AlgebraError> {
    check_prime(p)?;
    let bp = BigInt::from(p);
    let data = a
        .entries()
        .iter()
        .map(|x| x.mod_floor(&bp).to_u64().expect("residue fits in u64"))
        .collect();
    Ok(ModMat { rows: a.rows(), cols: a.cols(), p, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_transvection_mod_its_amount() {
        let mut a = IntMat::identity(3);
        a[(0, 1)] = BigInt::from(5);
        assert!(reduce_mod_p(&a, 5).unwrap().is_identity());
        assert!(!reduce_mod_p(&a, 7).unwrap().is_identity());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(matches!(ModMat::identity(2, 6), Err(AlgebraError::NotPrime(6))));
    }

    #[test]
    fn det_and_rank() {
        let m = ModMat::from_i64(2, 2, 7, &[1, 2, 3, 4]).unwrap();
        assert_eq!(m.det().unwrap(), 5);
        let s = ModMat::from_i64(2, 3, 3, &[1, 2, 0, 2, 1, 0]).unwrap();
        assert_eq!(s.rank(), 1);
        let z = ModMat::from_i64(2, 2, 5, &[0, 1, 1, 0]).unwrap();
        assert_eq!(z.det().unwrap(), 4);
    }

    #[test]
    fn product_commutes_with_reduction() {
        let a = IntMat::from_rows(&[vec![3, -7], vec![11, 2]]);
        let b = IntMat::from_rows(&[vec![-5, 4], vec![1, 9]]);
        let ab = reduce_mod_p(&(&a * &b), 13).unwrap();
        let prod = reduce_mod_p(&a, 13).unwrap().mul(&reduce_mod_p(&b, 13).unwrap()).unwrap();
        assert_eq!(ab, prod);
    }
}
