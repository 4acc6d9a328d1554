//! Factorization of SL_n(Z) into generalized transvections.
//!
//! Each level treats the first `k` columns of the residual as a complete
//! system of `n` vectors in Z^k (vector `j` is row `j` of that block),
//! reduces it to the standard system by left multiplication, splits off the
//! top-right block with one right factor and recurses on the lower-right
//! corner. Dimension 3 is finished by Euclidean elimination.

mod base;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{
    bigint_str, reduce_mod_p, AlgebraError, ElemTransvection, GenTransvection, IntMat, ModMat,
};
use crate::vecsys::{reduce_to_standard, Policy, Ring, VecSysError, VectorSystem};

/// Longest elementary word `expand_to_elementary` will materialize by default.
pub const DEFAULT_EXPAND_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("determinant is {0}, not 1")]
    NotSpecial(BigInt),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("policy error: {0}")]
    Policy(String),
    #[error("expanded word has {0} letters, above the cap of {1}")]
    TooLong(BigInt, u64),
    #[error(transparent)]
    VecSys(#[from] VecSysError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "op", rename_all = "lowercase")]
pub enum FactorOp {
    Generalized(GenTransvection),
    Elementary(ElemTransvection),
}

impl FactorOp {
    pub fn to_matrix(&self) -> IntMat {
        match self {
            FactorOp::Generalized(t) => t.to_matrix(),
            FactorOp::Elementary(e) => e.to_matrix(),
        }
    }

    pub fn word_length(&self) -> BigInt {
        match self {
            FactorOp::Generalized(t) => t.word_length(),
            FactorOp::Elementary(e) => e.m.abs(),
        }
    }

    fn apply_right(&self, a: &mut IntMat) {
        match self {
            FactorOp::Generalized(t) => t.apply_right(a),
            FactorOp::Elementary(e) => e.apply_right(a),
        }
    }

    fn elementary(&self) -> Vec<ElemTransvection> {
        match self {
            FactorOp::Generalized(t) => t.elementary_factors(),
            FactorOp::Elementary(e) => vec![e.clone()],
        }
    }

    fn max_bits(&self) -> u64 {
        match self {
            FactorOp::Generalized(t) => t.alpha.max_bits(),
            FactorOp::Elementary(e) => e.m.bits(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    #[serde(flatten)]
    pub op: FactorOp,
    pub side: Side,
    pub level: usize,
}

/// Factors whose ordered product is the input matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCertificate {
    pub n: usize,
    pub policy: String,
    pub levels: usize,
    /// Block size peeled at each level.
    pub schedule: Vec<usize>,
    pub factors: Vec<Factor>,
    pub generalized_count: usize,
    pub base_count: usize,
    #[serde(with = "bigint_str")]
    pub elementary_word_length: BigInt,
    pub product_hash: String,
    pub max_bit_length: u64,
}

/// One peeling step: `g = lefts[0] ⋯ lefts[m-1] · residual · right`.
#[derive(Clone, Debug)]
pub struct Peel {
    pub k: usize,
    pub lefts: Vec<GenTransvection>,
    pub residual: IntMat,
    pub right: GenTransvection,
}

fn check_special(g: &IntMat) -> Result<(), FactorError> {
    if !g.is_square() {
        return Err(FactorError::Dimension(format!("{}x{} is not square", g.rows(), g.cols())));
    }
    let d = g.det()?;
    if !d.is_one() {
        return Err(FactorError::NotSpecial(d));
    }
    Ok(())
}

/// Peels a k-block off `g`; `residual` is `I_k ⊕ g'` with `g' ∈ SL_{n-k}(Z)`.
pub fn decompose_block(g: &IntMat, k: usize, policy: Policy) -> Result<Peel, FactorError> {
    check_special(g)?;
    let n = g.rows();
    if policy == Policy::Fp2k {
        return Err(FactorError::Policy("factorization works over Z".into()));
    }
    if k == 0 || n < policy.min_n(k) {
        return Err(FactorError::Policy(format!(
            "policy {policy} cannot peel k = {k} from dimension {n}"
        )));
    }
    let first: Vec<usize> = (0..k).collect();
    let v = VectorSystem::new(g.select_cols(&first).transpose(), Ring::Integers)?;
    let trace = reduce_to_standard(&v, policy)?;

    let mut cur = g.clone();
    for op in &trace.ops {
        op.apply_left(&mut cur);
    }
    for i in 0..n {
        for j in 0..k {
            let want = if i == j { BigInt::one() } else { BigInt::from(0) };
            if cur[(i, j)] != want {
                return Err(VecSysError::Internal("peeled block is not (I; 0)".into()).into());
            }
        }
    }

    // cur = [[I, X], [0, Y]] = (I ⊕ Y) · [[I, X], [0, I]]
    let top: Vec<usize> = (0..k).collect();
    let rest: Vec<usize> = (k..n).collect();
    let x = cur.select(&top, &rest);
    let right = GenTransvection::new(n, rest.clone(), top.clone(), x.transpose())?;
    right.inverse().apply_right(&mut cur);

    Ok(Peel {
        k,
        lefts: trace.ops.iter().map(GenTransvection::inverse).collect(),
        residual: cur,
        right,
    })
}

/// Block size used at dimension `n`.
pub fn block_size(n: usize, policy: Policy) -> usize {
    match policy {
        Policy::Z2k1 => (n - 1) / 2,
        _ => n / 3,
    }
}

/// Smallest `L` with `1.5^L ≥ n/3`, in exact integer arithmetic.
pub fn level_budget(n: usize) -> usize {
    let (mut l, mut num, mut den) = (0usize, BigInt::from(3), BigInt::from(1));
    while num < &den * n {
        num *= 3;
        den *= 2;
        l += 1;
    }
    l
}

struct Level {
    offset: usize,
    peel: Peel,
}

impl Level {
    fn cost(&self) -> usize {
        self.peel.lefts.len() + usize::from(!self.peel.right.is_trivial())
    }
}

struct Plan {
    levels: Vec<Level>,
    base: IntMat,
    cost: usize,
}

fn minor(a: &IntMat, k: usize) -> IntMat {
    let keep: Vec<usize> = (k..a.rows()).collect();
    a.select(&keep, &keep)
}

fn plan_fixed(g: &IntMat, policy: Policy) -> Result<Plan, FactorError> {
    let (mut cur, mut offset) = (g.clone(), 0);
    let mut levels = Vec::new();
    while cur.rows() > 3 {
        let peel = decompose_block(&cur, block_size(cur.rows(), policy), policy)?;
        cur = minor(&peel.residual, peel.k);
        let k = peel.k;
        levels.push(Level { offset, peel });
        offset += k;
    }
    let cost = levels.iter().map(Level::cost).sum();
    Ok(Plan { levels, base: cur, cost })
}

/// Cheapest plan of cost at most `limit`, choosing the policy level by level.
fn plan_search(cur: &IntMat, offset: usize, limit: usize) -> Result<Option<Plan>, FactorError> {
    if cur.rows() <= 3 {
        return Ok(Some(Plan { levels: Vec::new(), base: cur.clone(), cost: 0 }));
    }
    let d = cur.rows();
    let mut best: Option<Plan> = None;
    let mut tried = Vec::new();
    for policy in [Policy::Z2k1, Policy::Z3k] {
        let k = block_size(d, policy);
        if tried.contains(&k) {
            continue;
        }
        tried.push(k);
        let peel = decompose_block(cur, k, policy)?;
        let level = Level { offset, peel };
        let c = level.cost();
        let cap = best.as_ref().map_or(limit, |b| b.cost.saturating_sub(1)).min(limit);
        if c > cap {
            continue;
        }
        if let Some(mut sub) = plan_search(&minor(&level.peel.residual, k), offset + k, cap - c)? {
            sub.levels.insert(0, level);
            sub.cost += c;
            best = Some(sub);
        }
    }
    Ok(best)
}

/// Factors `g`. Blocks of size `⌊d/3⌋` (or `⌊(d-1)/2⌋` under `Z2k1`) are
/// peeled until dimension 3. If the generalized factors outside the base
/// case exceed `5 · level_budget(n)`, schedules mixing both block sizes are
/// searched and the cheapest is kept.
pub fn factor_full(g: &IntMat, policy: Policy) -> Result<FactorCertificate, FactorError> {
    check_special(g)?;
    let n = g.rows();
    if n < 3 {
        return Err(FactorError::Dimension(format!("SL_{n} is below the supported range")));
    }
    if policy == Policy::Fp2k {
        return Err(FactorError::Policy("factorization works over Z".into()));
    }
    let mut plan = plan_fixed(g, policy)?;
    let budget = 5 * level_budget(n);
    if plan.cost > budget {
        if let Some(p) = plan_search(g, 0, budget)? {
            plan = p;
        }
    }

    let mut lefts: Vec<Factor> = Vec::new();
    let mut rights: Vec<Factor> = Vec::new();
    let mut max_bits = g.max_bits();
    for (level, Level { offset, peel }) in plan.levels.iter().enumerate() {
        for t in &peel.lefts {
            lefts.push(Factor {
                op: FactorOp::Generalized(t.embed(n, *offset)),
                side: Side::Left,
                level,
            });
        }
        if !peel.right.is_trivial() {
            rights.push(Factor {
                op: FactorOp::Generalized(peel.right.embed(n, *offset)),
                side: Side::Right,
                level,
            });
        }
        max_bits = max_bits.max(peel.residual.max_bits());
    }

    let offset = n - plan.base.rows();
    let level = plan.levels.len();
    let base_ops = base::eliminate(&plan.base);
    let base_count = base_ops.len();
    for e in &base_ops {
        let inv = e.inverse();
        lefts.push(Factor {
            op: FactorOp::Elementary(ElemTransvection { n, i: inv.i + offset, j: inv.j + offset, m: inv.m }),
            side: Side::Left,
            level,
        });
    }

    lefts.extend(rights.into_iter().rev());
    let factors = lefts;
    for f in &factors {
        max_bits = max_bits.max(f.op.max_bits());
    }
    let product = product_of(n, &factors);
    Ok(FactorCertificate {
        n,
        policy: policy.name().to_string(),
        levels: level,
        schedule: plan.levels.iter().map(|l| l.peel.k).collect(),
        generalized_count: factors.len(),
        base_count,
        elementary_word_length: factors.iter().map(|f| f.op.word_length()).sum(),
        product_hash: matrix_hash(&product),
        max_bit_length: max_bits,
        factors,
    })
}

/// Base-case factorization of an SL_3(Z) matrix into elementary factors.
pub fn base_case_sl3(g: &IntMat) -> Result<Vec<ElemTransvection>, FactorError> {
    check_special(g)?;
    if g.rows() != 3 {
        return Err(FactorError::Dimension(format!("expected 3x3, got {}x{}", g.rows(), g.cols())));
    }
    Ok(base::eliminate(g).iter().map(ElemTransvection::inverse).collect())
}

fn product_of(n: usize, factors: &[Factor]) -> IntMat {
    let mut p = IntMat::identity(n);
    for f in factors {
        f.op.apply_right(&mut p);
    }
    p
}

/// SHA-256 of the matrix text format, hex encoded.
pub fn matrix_hash(a: &IntMat) -> String {
    hex::encode(Sha256::digest(a.to_text().as_bytes()))
}

pub fn certificate_product(cert: &FactorCertificate) -> IntMat {
    product_of(cert.n, &cert.factors)
}

pub fn verify_certificate(cert: &FactorCertificate, g: &IntMat) -> bool {
    if !g.is_square() || g.rows() != cert.n || cert.factors.iter().any(|f| !factor_fits(f, cert.n)) {
        return false;
    }
    let p = certificate_product(cert);
    &p == g && matrix_hash(&p) == cert.product_hash
}

fn factor_fits(f: &Factor, n: usize) -> bool {
    match &f.op {
        FactorOp::Generalized(t) => t.n == n && t.validate().is_ok(),
        FactorOp::Elementary(e) => e.n == n && e.i < n && e.j < n && e.i != e.j,
    }
}

/// Replays the certificate over F_p and compares with `g mod p`.
pub fn verify_certificate_mod_p(cert: &FactorCertificate, g: &IntMat, p: u64) -> Result<bool, FactorError> {
    if g.rows() != cert.n || cert.factors.iter().any(|f| !factor_fits(f, cert.n)) {
        return Ok(false);
    }
    let mut acc = ModMat::identity(cert.n, p)?;
    for f in &cert.factors {
        acc = acc.mul(&reduce_mod_p(&f.op.to_matrix(), p)?)?;
    }
    Ok(acc == reduce_mod_p(g, p)?)
}

/// One letter `I ± e_ij` of the generating set E_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

impl Letter {
    pub fn to_elem(self, n: usize) -> ElemTransvection {
        ElemTransvection { n, i: self.i, j: self.j, m: BigInt::from(self.sign) }
    }
}

/// The certificate as a word in E_n; fails when longer than `cap`.
pub fn expand_to_elementary(cert: &FactorCertificate, cap: u64) -> Result<Vec<Letter>, FactorError> {
    if cert.elementary_word_length > BigInt::from(cap) {
        return Err(FactorError::TooLong(cert.elementary_word_length.clone(), cap));
    }
    let mut word = Vec::new();
    for f in &cert.factors {
        for e in f.op.elementary() {
            let sign = if e.m.is_negative() { -1 } else { 1 };
            let reps: u64 = e.m.abs().try_into().expect("bounded by cap");
            word.extend((0..reps).map(|_| Letter { i: e.i, j: e.j, sign }));
        }
    }
    Ok(word)
}

/// Product of `word_length` generators of E_n drawn uniformly under `seed`.
pub fn random_sl(n: usize, word_length: usize, seed: u64) -> IntMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = IntMat::identity(n);
    if n < 2 {
        return a;
    }
    for _ in 0..word_length {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let m = if rng.gen_bool(0.5) { BigInt::one() } else { -BigInt::one() };
        a.add_col_multiple(j, i, &m);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_budget_values() {
        assert_eq!(level_budget(3), 0);
        assert_eq!(level_budget(4), 1);
        assert_eq!(level_budget(9), 3);
        assert_eq!(level_budget(10), 3);
        assert_eq!(level_budget(11), 4);
    }

    #[test]
    fn peel_identity_and_embedded() {
        let p = decompose_block(&IntMat::identity(6), 2, Policy::Z3k).unwrap();
        assert!(p.lefts.is_empty() && p.right.is_trivial() && p.residual.is_identity());

        let mut g = IntMat::identity(6);
        g[(3, 4)] = BigInt::from(7);
        g[(5, 2)] = BigInt::from(-2);
        let p = decompose_block(&g, 2, Policy::Z3k).unwrap();
        assert!(p.lefts.is_empty() && p.right.is_trivial());
        assert_eq!(p.residual, g);
    }

    #[test]
    fn peel_reassembles() {
        let g = random_sl(6, 20, 11);
        let p = decompose_block(&g, 2, Policy::Z3k).unwrap();
        let mut prod = p.residual.clone();
        p.right.apply_right(&mut prod);
        for t in p.lefts.iter().rev() {
            t.apply_left(&mut prod);
        }
        assert_eq!(prod, g);
        assert!(p.lefts.len() <= 4);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = IntMat::from_rows(&[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(matches!(factor_full(&g, Policy::Z3k), Err(FactorError::NotSpecial(_))));
        assert!(matches!(factor_full(&IntMat::identity(2), Policy::Z3k), Err(FactorError::Dimension(_))));
        assert!(matches!(decompose_block(&IntMat::identity(5), 2, Policy::Z3k), Err(FactorError::Policy(_))));
    }

    #[test]
    fn elementary_input() {
        let g = ElemTransvection::new(9, 1, 2, 5).unwrap().to_matrix();
        let cert = factor_full(&g, Policy::Z3k).unwrap();
        assert_eq!(cert.elementary_word_length, BigInt::from(5));
        assert!(verify_certificate(&cert, &g));
    }
}
