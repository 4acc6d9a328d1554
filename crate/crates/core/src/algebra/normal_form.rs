//! Hermite and Smith normal forms with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{AlgebraError, IntMat};

/// Column Hermite form: `g · u = h`, `u` unimodular, `h` lower echelon.
///
/// Column `t < rank` of `h` has its leading (topmost) nonzero entry at
/// `pivot_rows[t]`, which is positive; entries to the left of a pivot in the
/// same row lie in `[0, pivot)`. Columns `rank..` of `h` are zero, so the
/// matching columns of `u` span the integer kernel of `g`.
#[derive(Clone, Debug)]
pub struct ColumnHermite {
    pub h: IntMat,
    pub u: IntMat,
    pub pivot_rows: Vec<usize>,
}

impl ColumnHermite {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Index of the column lattice in Z^rows when it has full rank.
    pub fn lattice_index(&self) -> Option<BigInt> {
        if self.rank() != self.h.rows() {
            return None;
        }
        Some(
            self.pivot_rows
                .iter()
                .enumerate()
                .map(|(t, &r)| self.h[(r, t)].clone())
                .product(),
        )
    }

    /// Integer coefficients `x` with `g · x = target`, if the target lies in
    /// the column lattice.
    pub fn solve(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let rows = self.h.rows();
        let mut res = target.to_vec();
        let mut y = vec![BigInt::zero(); self.h.cols()];
        let mut row = 0;
        for (t, &pr) in self.pivot_rows.iter().enumerate() {
            if res[row..pr].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = res[pr].div_rem(&self.h[(pr, t)]);
            if !r.is_zero() {
                return None;
            }
            for i in pr..rows {
                let v = &self.h[(i, t)] * &q;
                res[i] -= v;
            }
            y[t] = q;
            row = pr + 1;
        }
        if res.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![BigInt::zero(); self.u.rows()];
        for (t, yt) in y.iter().enumerate().take(self.rank()) {
            if yt.is_zero() {
                continue;
            }
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += &self.u[(i, t)] * yt;
            }
        }
        Some(x)
    }
}

/// Computes the column Hermite form of `g` together with its transform.
pub fn column_hermite(g: &IntMat) -> ColumnHermite {
    let (rows, cols) = (g.rows(), g.cols());
    let mut h = g.clone();
    let mut u = IntMat::identity(cols);
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        for j in pc + 1..cols {
            if h[(i, j)].is_zero() {
                continue;
            }
            if h[(i, pc)].is_zero() {
                h.swap_cols(pc, j);
                u.swap_cols(pc, j);
                continue;
            }
            let a = h[(i, pc)].clone();
            let b = h[(i, j)].clone();
            if (&b % &a).is_zero() {
                let q = -(&b / &a);
                h.add_col_multiple(j, pc, &q);
                u.add_col_multiple(j, pc, &q);
                continue;
            }
            let e = a.extended_gcd(&b);
            let (s, t, d) = (e.x, e.y, e.gcd);
            let (bd, ad) = (&b / &d, &a / &d);
            combine_cols(&mut h, pc, j, &s, &t, &bd, &ad);
            combine_cols(&mut u, pc, j, &s, &t, &bd, &ad);
        }
        if h[(i, pc)].is_zero() {
            continue;
        }
        if h[(i, pc)].is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        let piv = h[(i, pc)].clone();
        for j in 0..pc {
            let q = h[(i, j)].div_floor(&piv);
            if !q.is_zero() {
                let mq = -q;
                h.add_col_multiple(j, pc, &mq);
                u.add_col_multiple(j, pc, &mq);
            }
        }
        pivot_rows.push(i);
        pc += 1;
    }
    ColumnHermite { h, u, pivot_rows }
}

// (c_p, c_j) <- (s c_p + t c_j, -bd c_p + ad c_j); determinant s·ad + t·bd = 1.
fn combine_cols(m: &mut IntMat, p: usize, j: usize, s: &BigInt, t: &BigInt, bd: &BigInt, ad: &BigInt) {
    for r in 0..m.rows() {
        let x = m[(r, p)].clone();
        let y = m[(r, j)].clone();
        m[(r, p)] = s * &x + t * &y;
        m[(r, j)] = ad * &y - bd * &x;
    }
}

/// `u · a · v = d` with `d` diagonal and each diagonal entry dividing the next.
#[derive(Clone, Debug, Serialize)]
pub struct SmithForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by repeated elimination around the smallest nonzero
/// entry of the remaining block. Deterministic: ties go to the first entry in
/// row-major order.
pub fn smith_normal_form(a: &IntMat) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let piv = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = &d[(i, t)] / &piv;
                if !q.is_zero() {
                    let mq = -q;
                    d.add_row_multiple(i, t, &mq);
                    u.add_row_multiple(i, t, &mq);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = &d[(t, j)] / &piv;
                if !q.is_zero() {
                    let mq = -q;
                    d.add_col_multiple(j, t, &mq);
                    v.add_col_multiple(j, t, &mq);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &piv).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

fn smallest_entry(d: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let m = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| m < *b) {
                best = Some((i, j, m));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Inverse of a matrix with determinant ±1.
pub fn inverse_unimodular(a: &IntMat) -> Result<IntMat, AlgebraError> {
    if !a.is_square() {
        return Err(AlgebraError::Dimension(format!(
            "inverse of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let s = smith_normal_form(a);
    let n = a.rows();
    if (0..n).any(|i| !s.d[(i, i)].is_one()) {
        return Err(AlgebraError::NotUnimodular(a.det()?));
    }
    // u a v = 1  =>  a^-1 = v u
    Ok(&s.v * &s.u)
}

/// True iff the columns of the k×n matrix `v` generate Z^k.
pub fn is_complete(v: &IntMat) -> Result<bool, AlgebraError> {
    if v.rows() > v.cols() {
        return Err(AlgebraError::Dimension(format!(
            "{} vectors cannot span Z^{}",
            v.cols(),
            v.rows()
        )));
    }
    Ok(column_hermite(v).lattice_index().is_some_and(|d| d.is_one()))
}

/// Rank over Q.
pub fn rank(m: &IntMat) -> usize {
    column_hermite(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IntMat) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(f.iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn smith_examples() {
        let s = check_smith(&IntMat::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
        let s = check_smith(&IntMat::from_rows(&[vec![6, 10, 15]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::one()]);
        let s = check_smith(&IntMat::identity(2));
        assert_eq!(s.invariant_factors().len(), 2);
        let s = check_smith(&IntMat::from_rows(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 0]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::one(), BigInt::from(6)]);
        check_smith(&IntMat::zeros(2, 3));
    }

    #[test]
    fn hermite_solves_and_spans_kernel() {
        let g = IntMat::from_rows(&[vec![6, 10, 15], vec![1, 2, 3]]);
        let hf = column_hermite(&g);
        assert_eq!(&g * &hf.u, hf.h);
        assert_eq!(hf.rank(), 2);
        let target = vec![BigInt::from(7), BigInt::from(-2)];
        let x = hf.solve(&target).expect("complete system reaches every target");
        let gx: Vec<BigInt> = (0..2)
            .map(|i| (0..3).map(|j| &g[(i, j)] * &x[j]).sum())
            .collect();
        assert_eq!(gx, target);
        let k = hf.u.col(2);
        for i in 0..2 {
            let dot: BigInt = (0..3).map(|j| &g[(i, j)] * &k[j]).sum();
            assert!(dot.is_zero());
        }
        let even = IntMat::from_rows(&[vec![2, 4]]);
        assert!(column_hermite(&even).solve(&[BigInt::one()]).is_none());
    }

    #[test]
    fn completeness() {
        assert!(is_complete(&IntMat::from_rows(&[vec![6, 10, 15]])).unwrap());
        assert!(!is_complete(&IntMat::from_rows(&[vec![4, 6]])).unwrap());
        let std = IntMat::from_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert!(is_complete(&std).unwrap());
        assert!(is_complete(&IntMat::zeros(3, 2)).is_err());
    }

    #[test]
    fn unimodular_inverse() {
        let a = IntMat::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(inverse_unimodular(&a).unwrap(), IntMat::from_rows(&[vec![1, -1], vec![0, 1]]));
        let b = IntMat::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(matches!(inverse_unimodular(&b), Err(AlgebraError::NotUnimodular(_))));
    }
}
