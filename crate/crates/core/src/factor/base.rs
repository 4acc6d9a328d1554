//! Euclidean elimination on SL_3(Z) with every row operation recorded.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{ElemTransvection, IntMat};

struct Tracker {
    cur: IntMat,
    ops: Vec<ElemTransvection>,
}

impl Tracker {
    // row i += m · row j
    fn add(&mut self, i: usize, j: usize, m: BigInt) {
        if m.is_zero() {
            return;
        }
        let op = ElemTransvection { n: self.cur.rows(), i, j, m };
        op.apply_left(&mut self.cur);
        self.ops.push(op);
    }
}

/// Row operations `E_1, …, E_m` with `E_m ⋯ E_1 · g = I`. `g` must be
/// square with determinant 1; works in any dimension.
pub(crate) fn eliminate(g: &IntMat) -> Vec<ElemTransvection> {
    let n = g.rows();
    let mut t = Tracker { cur: g.clone(), ops: Vec::new() };

    for c in 0..n {
        loop {
            let nz: Vec<usize> = (c..n).filter(|&r| !t.cur[(r, c)].is_zero()).collect();
            let p = *nz
                .iter()
                .min_by(|&&a, &&b| t.cur[(a, c)].abs().cmp(&t.cur[(b, c)].abs()))
                .expect("unimodular column has a nonzero entry");
            if nz.len() == 1 {
                if p != c {
                    t.add(c, p, BigInt::one());
                    t.add(p, c, -BigInt::one());
                }
                break;
            }
            for &r in &nz {
                if r != p {
                    let q = &t.cur[(r, c)] / &t.cur[(p, c)];
                    t.add(r, p, -q);
                }
            }
        }
    }

    // upper triangular with ±1 on the diagonal
    for c in (0..n).rev() {
        for r in 0..c {
            let m = -(&t.cur[(r, c)] * &t.cur[(c, c)]);
            t.add(r, c, m);
        }
    }

    let neg: Vec<usize> = (0..n).filter(|&i| t.cur[(i, i)].is_negative()).collect();
    for pair in neg.chunks(2) {
        let &[i, j] = pair else { unreachable!("det 1 forces an even number of -1") };
        let one = BigInt::one;
        t.add(i, j, one());
        t.add(j, i, -one());
        t.add(i, j, BigInt::from(2));
        t.add(j, i, -one());
        t.add(i, j, one());
    }
    debug_assert!(t.cur.is_identity());
    t.ops
}

#[cfg(test)]
mod tests {
    use super::*;

    fn replay(g: &IntMat) {
        let ops = eliminate(g);
        let mut p = IntMat::identity(g.rows());
        for op in ops.iter().rev() {
            op.inverse().apply_left(&mut p);
        }
        assert_eq!(&p, g);
    }

    #[test]
    fn identity_needs_nothing() {
        assert!(eliminate(&IntMat::identity(3)).is_empty());
    }

    #[test]
    fn single_transvection() {
        let g = IntMat::from_rows(&[vec![1, 0, 0], vec![3, 1, 0], vec![0, 0, 1]]);
        let ops = eliminate(&g);
        assert_eq!(ops.len(), 1);
        assert_eq!(ops[0].m, BigInt::from(-3));
        replay(&g);
    }

    #[test]
    fn sign_pairs() {
        replay(&IntMat::from_rows(&[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]));
        replay(&IntMat::from_rows(&[vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 1]]));
        replay(&IntMat::from_rows(&[vec![2, 3, 5], vec![1, 2, 3], vec![4, 7, 12]]));
    }
}
