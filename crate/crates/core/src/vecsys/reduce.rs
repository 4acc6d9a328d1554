//! Reduction of complete vector systems to the standard system with a bounded
//! number of generalized elementary operations.
//!
//! Outline over Z: one operation turns k chosen vectors into a prime system
//! whose primes exceed the determinant of k independent reference vectors, so
//! those 2k vectors generate Z^k; two or three further operations then write
//! the standard basis into place and clear everything else. The 2k+1 variant
//! spends one extra operation on a single vector so that k+1 vectors suffice.
//! Over a field any basis plays the role of the generating set.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::primes::dirichlet_prime;
use super::system::{Ring, VectorSystem};
use super::VecSysError;
use crate::algebra::{
    column_hermite, inverse_unimodular, is_complete, smith_normal_form, GenTransvection, IntMat,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Policy {
    /// n ≥ 3k over Z, at most 4 operations.
    Z3k,
    /// n ≥ 2k+1 over Z, at most 5 operations.
    Z2k1,
    /// n ≥ 2k over F_p, at most 3 operations.
    Fp2k,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Z3k, Policy::Z2k1, Policy::Fp2k];

    pub fn max_ops(self) -> usize {
        match self {
            Policy::Z3k => 4,
            Policy::Z2k1 => 5,
            Policy::Fp2k => 3,
        }
    }

    /// Smallest admissible number of vectors for rank `k`.
    pub fn min_n(self, k: usize) -> usize {
        match self {
            Policy::Z3k => 3 * k,
            Policy::Z2k1 => 2 * k + 1,
            Policy::Fp2k => 2 * k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Policy::Z3k => "Z-3k",
            Policy::Z2k1 => "Z-2k1",
            Policy::Fp2k => "Fp-2k",
        }
    }

    fn check(self, v: &VectorSystem) -> Result<(), VecSysError> {
        let (k, n) = (v.k(), v.n());
        let ring_ok = match self {
            Policy::Fp2k => matches!(v.ring(), Ring::Prime(_)),
            _ => v.ring() == Ring::Integers,
        };
        if !ring_ok {
            return Err(VecSysError::Policy(format!("policy {self} does not apply over {}", v.ring())));
        }
        if n < self.min_n(k) {
            return Err(VecSysError::Policy(format!(
                "policy {self} needs n >= {} for k = {k}, got n = {n}",
                self.min_n(k)
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = VecSysError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "z-3k" | "3k" | "z3k" => Ok(Policy::Z3k),
            "z-2k1" | "2k1" | "z2k1" | "2k+1" => Ok(Policy::Z2k1),
            "fp-2k" | "fp2k" | "fp" | "2k" => Ok(Policy::Fp2k),
            _ => Err(VecSysError::Policy(format!("unknown policy {s:?}"))),
        }
    }
}

impl Serialize for Policy {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Ordered operations taking an input system to the standard one.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionTrace {
    pub policy: Policy,
    pub ops: Vec<GenTransvection>,
    pub op_count: usize,
    #[serde(rename = "final")]
    pub final_system: VectorSystem,
    #[serde(serialize_with = "ser_bigints")]
    pub primes: Vec<BigInt>,
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl ReductionTrace {
    /// Reapplies the operations to `input`, checking completeness after each.
    pub fn replay(&self, input: &VectorSystem) -> Result<VectorSystem, VecSysError> {
        let mut cur = input.clone();
        for op in &self.ops {
            cur = super::apply_generalized(&cur, op)?;
        }
        Ok(cur)
    }

    pub fn verify(&self, input: &VectorSystem) -> bool {
        self.op_count == self.ops.len()
            && self.replay(input).is_ok_and(|f| f == self.final_system && f.is_standard())
    }
}

/// Result of the prime-making step.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeSystem {
    pub op: GenTransvection,
    pub system: VectorSystem,
    /// Columns that now form the prime system.
    pub block: Vec<usize>,
    /// Independent columns whose determinant the primes exceed.
    pub reference: Vec<usize>,
    #[serde(serialize_with = "ser_bigints")]
    pub primes: Vec<BigInt>,
    #[serde(with = "crate::algebra::bigint_str")]
    pub reference_det: BigInt,
}

struct Reducer {
    sys: VectorSystem,
    ops: Vec<GenTransvection>,
    primes: Vec<BigInt>,
}

fn unit(k: usize, i: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); k];
    e[i] = BigInt::one();
    e
}

fn target(k: usize, j: usize) -> Vec<BigInt> {
    if j < k { unit(k, j) } else { vec![BigInt::zero(); k] }
}

impl Reducer {
    fn k(&self) -> usize {
        self.sys.k()
    }

    fn n(&self) -> usize {
        self.sys.n()
    }

    fn push(&mut self, mut t: GenTransvection) -> Result<(), VecSysError> {
        if let Ring::Prime(p) = self.sys.ring() {
            t.alpha = t.alpha.mod_floor(&BigInt::from(p));
        }
        if t.is_trivial() {
            return Ok(());
        }
        self.sys.apply_in_place(&t);
        if !self.sys.is_complete()? {
            return Err(VecSysError::Internal("operation broke completeness".into()));
        }
        self.ops.push(t);
        Ok(())
    }

    /// One operation with sources `from` that moves each listed column to
    /// its desired vector, or `None` if some difference is not reachable.
    fn setting_op(&self, from: &[usize], goals: &[(usize, Vec<BigInt>)]) -> Option<GenTransvection> {
        let mut into = Vec::new();
        let mut cols = Vec::new();
        for (j, want) in goals {
            let have = self.sys.vector(*j);
            if &have == want {
                continue;
            }
            let delta: Vec<BigInt> = want.iter().zip(&have).map(|(w, h)| w - h).collect();
            cols.push(self.sys.express(from, &delta)?);
            into.push(*j);
        }
        let mut alpha = IntMat::zeros(from.len(), into.len());
        for (b, c) in cols.iter().enumerate() {
            for (a, x) in c.iter().enumerate() {
                alpha[(a, b)] = x.clone();
            }
        }
        Some(GenTransvection { n: self.n(), rows_from: from.to_vec(), rows_into: into, alpha })
    }

    fn apply_setting(&mut self, from: &[usize], goals: &[(usize, Vec<BigInt>)]) -> Result<(), VecSysError> {
        let op = self
            .setting_op(from, goals)
            .ok_or_else(|| VecSysError::Internal(format!("columns {from:?} do not reach the goals")))?;
        self.push(op)
    }

    fn generates(&self, cols: &[usize]) -> bool {
        let k = self.k();
        match self.sys.ring() {
            Ring::Integers => is_complete(&self.sys.matrix().select_cols(cols)).unwrap_or(false),
            Ring::Prime(_) => self.sys.rank_of(cols) == k,
        }
    }

    fn try_single_op(&self) -> Option<GenTransvection> {
        let k = self.k();
        let (fixed, rest): (Vec<usize>, Vec<usize>) =
            (0..self.n()).partition(|&j| self.sys.vector(j) == target(k, j));
        let goals: Vec<_> = rest.iter().map(|&j| (j, target(k, j))).collect();
        self.setting_op(&fixed, &goals)
    }

    /// Given columns `s` generating the whole space, finish in two operations
    /// when `s` avoids the first k positions and three otherwise.
    fn finish(&mut self, s: &[usize]) -> Result<(), VecSysError> {
        let (k, n) = (self.k(), self.n());
        let inside: Vec<usize> = (0..k).collect();
        let placed: Vec<usize> = s.iter().copied().filter(|&j| j < k).collect();
        if placed.is_empty() {
            let goals: Vec<_> = inside.iter().map(|&j| (j, unit(k, j))).collect();
            self.apply_setting(s, &goals)?;
            let goals: Vec<_> = (k..n).map(|j| (j, target(k, j))).collect();
            return self.apply_setting(&inside, &goals);
        }
        let free: Vec<usize> = (k..n).filter(|j| !s.contains(j)).collect();
        if free.len() < placed.len() {
            return Err(VecSysError::Internal(format!(
                "{} spare columns for {} misplaced generators",
                free.len(),
                placed.len()
            )));
        }
        let spare = &free[..placed.len()];
        let missing: Vec<usize> = inside.iter().copied().filter(|j| !s.contains(j)).collect();
        // Step 1: write the whole standard basis outside of s.
        let mut goals: Vec<_> = missing.iter().map(|&j| (j, unit(k, j))).collect();
        goals.extend(spare.iter().zip(&placed).map(|(&x, &p)| (x, unit(k, p))));
        self.apply_setting(s, &goals)?;
        // Step 2: from that basis, fix the first k columns and clear the rest.
        let basis: Vec<usize> = missing.iter().chain(spare).copied().collect();
        let mut goals: Vec<_> = placed.iter().map(|&p| (p, unit(k, p))).collect();
        goals.extend((k..n).filter(|j| !spare.contains(j)).map(|j| (j, target(k, j))));
        self.apply_setting(&basis, &goals)?;
        // Step 3: clear the spare columns.
        let goals: Vec<_> = spare.iter().map(|&x| (x, target(k, x))).collect();
        self.apply_setting(&inside, &goals)
    }

    fn prime_make(&mut self, block: &[usize], reference: &[usize]) -> Result<(), VecSysError> {
        let ps = prime_make_op(&self.sys, block, reference)?;
        self.primes.extend(ps.primes.iter().cloned());
        self.push(ps.op)
    }

    /// Modifies column `c` so that it generates Z^k together with the prime
    /// block: Z^k / ⟨block⟩ is cyclic of order N, and `c` must map to a unit.
    fn cyclic_step(&mut self, block: &[usize], c: usize) -> Result<(), VecSysError> {
        let k = self.k();
        let w = self.sys.matrix().select_cols(block);
        let snf = smith_normal_form(&w);
        let modulus = snf.d[(k - 1, k - 1)].clone();
        let phi = |v: &[BigInt]| -> BigInt {
            let s: BigInt = (0..k).map(|l| &snf.u[(k - 1, l)] * &v[l]).sum();
            s.mod_floor(&modulus)
        };
        let sources: Vec<usize> = (0..self.n()).filter(|j| *j != c && !block.contains(j)).collect();
        let mut g = modulus.clone();
        let mut beta = vec![BigInt::zero(); sources.len()];
        for (idx, &o) in sources.iter().enumerate() {
            let e = g.extended_gcd(&phi(&self.sys.vector(o)));
            for b in beta.iter_mut().take(idx) {
                *b = (&*b * &e.x).mod_floor(&modulus);
            }
            beta[idx] = e.y.mod_floor(&modulus);
            g = e.gcd;
        }
        let base = phi(&self.sys.vector(c));
        let mut t = BigInt::zero();
        while !(&base + &t * &g).gcd(&modulus).is_one() {
            t += 1;
            if t > BigInt::from(10 * k + 10) {
                return Err(VecSysError::Internal("no unit found in the cyclic step".into()));
            }
        }
        let mut alpha = IntMat::zeros(sources.len(), 1);
        for (a, b) in beta.iter().enumerate() {
            alpha[(a, 0)] = b * &t;
        }
        self.push(GenTransvection { n: self.n(), rows_from: sources, rows_into: vec![c], alpha })
    }
}

/// Lexicographically first subset of `cols` that is a basis of their span.
fn lex_basis(sys: &VectorSystem, cols: &[usize]) -> Vec<usize> {
    let mut basis = Vec::new();
    for &c in cols {
        basis.push(c);
        if sys.rank_of(&basis) < basis.len() {
            basis.pop();
        }
        if basis.len() == sys.k() {
            break;
        }
    }
    basis
}

/// The k columns outside `reference` that become the prime block: indices
/// ≥ k first, in increasing order, then the rest.
fn default_block(k: usize, n: usize, reference: &[usize]) -> Vec<usize> {
    let candidates = (k..n).chain(0..k).filter(|j| !reference.contains(j));
    candidates.take(k).collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn prime_make_op(sys: &VectorSystem, block: &[usize], reference: &[usize]) -> Result<PrimeSystem, VecSysError> {
    let (k, n) = (sys.k(), sys.n());
    if sys.ring() != Ring::Integers {
        return Err(VecSysError::Policy("prime systems are only needed over Z".into()));
    }
    if block.len() != k || reference.len() != k {
        return Err(VecSysError::Policy(format!("block and reference must have {k} columns")));
    }
    if block.iter().any(|j| reference.contains(j) || *j >= n) || reference.iter().any(|j| *j >= n) {
        return Err(VecSysError::Policy("block and reference must be disjoint column sets".into()));
    }
    let reference_det = sys.matrix().select_cols(reference).det()?.abs();
    if reference_det.is_zero() {
        return Err(VecSysError::Policy("reference columns are dependent".into()));
    }
    let lower = &reference_det + 1;
    let others_of_block: Vec<usize> = (0..n).filter(|j| !block.contains(j)).collect();

    let mut cur = sys.matrix().clone();
    // current block column i = V_block · x[:, i] + V_others · y[:, i]
    let mut x = IntMat::identity(k);
    let mut y = IntMat::zeros(others_of_block.len(), k);
    let mut primes = Vec::with_capacity(k);
    let mut used = BTreeSet::new();

    for i in 0..k {
        let col = block[i];
        let others: Vec<usize> = (0..n).filter(|&j| j != col).collect();
        let hf = column_hermite(&cur.select_cols(&others));
        if hf.pivot_rows.iter().copied().ne(0..k) {
            return Err(VecSysError::Internal("remaining columns do not have full rank".into()));
        }
        let mut w = cur.col(col);
        let mut coef_h = vec![BigInt::zero(); others.len()];
        for t in 0..i {
            let (q, r) = w[t].div_rem(&hf.h[(t, t)]);
            if !r.is_zero() {
                return Err(VecSysError::Internal("prefix not clearable; primes too small".into()));
            }
            let q = -q;
            for r in t..k {
                w[r] += &hf.h[(r, t)] * &q;
            }
            coef_h[t] += q;
        }
        let d = hf.h[(i, i)].clone();
        let q = dirichlet_prime(&w[i], &d, &lower, &used)?;
        let c = (&q - &w[i]) / &d;
        for r in i..k {
            w[r] += &hf.h[(r, i)] * &c;
        }
        coef_h[i] += c;
        // coefficients over `others` are u · coef_h
        for (oi, &o) in others.iter().enumerate() {
            let coef: BigInt = (0..others.len()).map(|t| &hf.u[(oi, t)] * &coef_h[t]).sum();
            if coef.is_zero() {
                continue;
            }
            if let Some(bp) = block.iter().position(|&b| b == o) {
                for r in 0..k {
                    let v = &x[(r, bp)] * &coef;
                    x[(r, i)] += v;
                }
                for r in 0..y.rows() {
                    let v = &y[(r, bp)] * &coef;
                    y[(r, i)] += v;
                }
            } else {
                let op = others_of_block.iter().position(|&b| b == o).expect("non-block column");
                y[(op, i)] += coef;
            }
        }
        cur.set_col(col, &w);
        used.insert(q.clone());
        primes.push(q);
    }

    let alpha = &y * &inverse_unimodular(&x)?;
    let op = GenTransvection { n, rows_from: others_of_block, rows_into: block.to_vec(), alpha };
    let system = super::apply_generalized(sys, &op)?;
    let product: BigInt = primes.iter().product();
    let det = system.matrix().select_cols(block).det()?.abs();
    if det != product {
        return Err(VecSysError::Internal("prime block check failed".into()));
    }
    Ok(PrimeSystem { op, system, block: block.to_vec(), reference: reference.to_vec(), primes, reference_det })
}

/// One operation making k vectors a prime system, with the default choice of
/// reference (lexicographically first independent columns) and block.
pub fn make_prime_system(v: &VectorSystem) -> Result<PrimeSystem, VecSysError> {
    let (k, n) = (v.k(), v.n());
    if n < 2 * k {
        return Err(VecSysError::Policy(format!("prime-making needs n >= 2k, got n = {n}, k = {k}")));
    }
    if !v.is_complete()? {
        return Err(VecSysError::NotComplete);
    }
    let all: Vec<usize> = (0..n).collect();
    let reference = lex_basis(v, &all);
    let block = default_block(k, n, &reference);
    prime_make_op(v, &block, &reference)
}

/// Prime-making with an explicit block and reference.
pub fn make_prime_system_with(
    v: &VectorSystem,
    block: &[usize],
    reference: &[usize],
) -> Result<PrimeSystem, VecSysError> {
    if !v.is_complete()? {
        return Err(VecSysError::NotComplete);
    }
    prime_make_op(v, block, reference)
}

pub fn reduce_to_standard(v: &VectorSystem, policy: Policy) -> Result<ReductionTrace, VecSysError> {
    policy.check(v)?;
    if !v.is_complete()? {
        return Err(VecSysError::NotComplete);
    }
    let (k, n) = (v.k(), v.n());
    let mut r = Reducer { sys: v.clone(), ops: Vec::new(), primes: Vec::new() };
    let outside: Vec<usize> = (k..n).collect();
    let all: Vec<usize> = (0..n).collect();

    if r.sys.is_standard() {
    } else if let Some(op) = r.try_single_op() {
        r.push(op)?;
    } else if r.generates(&outside) {
        r.finish(&outside)?;
    } else if policy == Policy::Fp2k {
        let s = lex_basis(&r.sys, &all);
        r.finish(&s)?;
    } else if outside.len() >= 2 * k && r.sys.rank_of(&outside) == k {
        // Reference and block both outside the first k positions.
        let reference = lex_basis(&r.sys, &outside);
        let block: Vec<usize> = outside.iter().copied().filter(|j| !reference.contains(j)).take(k).collect();
        r.prime_make(&block, &reference)?;
        r.finish(&sorted([block, reference].concat()))?;
    } else {
        let reference = lex_basis(&r.sys, &all);
        let block = default_block(k, n, &reference);
        r.prime_make(&block, &reference)?;
        let s = match policy {
            Policy::Z2k1 => {
                let c = (k..n).chain(0..k).find(|j| !block.contains(j)).expect("n > k");
                r.cyclic_step(&block, c)?;
                sorted([block, vec![c]].concat())
            }
            _ => greedy_generators(&r, &block),
        };
        r.finish(&s)?;
    }

    if !r.sys.is_standard() {
        return Err(VecSysError::Internal("reduction did not reach the standard system".into()));
    }
    if r.ops.len() > policy.max_ops() {
        return Err(VecSysError::Internal(format!(
            "{} operations exceed the bound {} of policy {policy}",
            r.ops.len(),
            policy.max_ops()
        )));
    }
    Ok(ReductionTrace { policy, op_count: r.ops.len(), ops: r.ops, final_system: r.sys, primes: r.primes })
}

/// The block plus columns that each strictly enlarge the generated lattice,
/// scanning indices ≥ k first. A prime block admits at most k such steps.
fn greedy_generators(r: &Reducer, block: &[usize]) -> Vec<usize> {
    let (k, n) = (r.k(), r.n());
    let mut s = block.to_vec();
    let index = |cols: &[usize]| {
        column_hermite(&r.sys.matrix().select_cols(cols)).lattice_index().expect("full rank")
    };
    let mut current = index(&s);
    for c in (k..n).chain(0..k) {
        if current.is_one() {
            break;
        }
        if s.contains(&c) {
            continue;
        }
        s.push(c);
        let next = index(&s);
        if next < current {
            current = next;
        } else {
            s.pop();
        }
    }
    sorted(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zsys(rows: &[Vec<i64>]) -> VectorSystem {
        VectorSystem::new(IntMat::from_rows(rows), Ring::Integers).unwrap()
    }

    #[test]
    fn standard_needs_nothing() {
        let u = VectorSystem::standard(2, 6, Ring::Integers).unwrap();
        let t = reduce_to_standard(&u, Policy::Z3k).unwrap();
        assert_eq!(t.op_count, 0);
        assert!(t.verify(&u));
    }

    #[test]
    fn k1_in_three_operations() {
        let v = zsys(&[vec![6, 10, 15]]);
        let t = reduce_to_standard(&v, Policy::Z3k).unwrap();
        assert!(t.op_count <= 3, "{t:?}");
        assert!(t.verify(&v));
        assert_eq!(t.final_system.matrix(), &IntMat::from_rows(&[vec![1, 0, 0]]));
    }

    #[test]
    fn prime_block_on_first_vector() {
        let v = zsys(&[vec![6, 10, 15]]);
        let ps = make_prime_system_with(&v, &[0], &[1]).unwrap();
        assert_eq!(ps.primes, vec![BigInt::from(31)]);
        assert_eq!(ps.system.matrix(), &IntMat::from_rows(&[vec![31, 10, 15]]));
    }

    #[test]
    fn policy_preconditions() {
        let v = zsys(&[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]);
        assert!(matches!(reduce_to_standard(&v, Policy::Z3k), Err(VecSysError::Policy(_))));
        assert!(matches!(reduce_to_standard(&v, Policy::Fp2k), Err(VecSysError::Policy(_))));
        assert!("Z-2k1".parse::<Policy>().is_ok());
        assert!("bogus".parse::<Policy>().is_err());
    }
}
