//! Cayley graphs of SL_n(F_p) over the elementary generators, their spectral
//! gaps and lazy-walk mixing times.

mod eigen;
mod walk;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::ModMat;
use crate::arith::{is_prime_u64, ln_big, sl_order};
use crate::constants::{kazhdan_lower_a_double_prime, kazhdan_upper};

pub use eigen::{spectral_gap, spectrum, GapMethod, SpectralGap, DENSE_CUTOFF};
pub use walk::{lazy_step, mixing_time, tv_to_uniform, MixingResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("group order {predicted} exceeds the cap {cap}")]
    Size { predicted: BigUint, cap: u64 },
    #[error("eigen-iteration did not converge after {iterations} steps (residual {residual:e})")]
    Convergence { iterations: u64, residual: f64 },
    #[error("{0}")]
    Domain(String),
}

/// Undirected regular graph stored as a flat neighbour list, `degree`
/// entries per vertex, with multi-edges kept.
#[derive(Clone, Debug)]
pub struct RegularGraph {
    pub vertices: usize,
    pub degree: usize,
    pub adj: Vec<u32>,
}

impl RegularGraph {
    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.adj[v * self.degree..(v + 1) * self.degree]
    }

    pub fn complete(m: usize) -> Self {
        let adj = (0..m).flat_map(|v| (0..m).filter(move |&u| u != v).map(|u| u as u32)).collect();
        RegularGraph { vertices: m, degree: m.saturating_sub(1), adj }
    }

    pub fn cycle(m: usize) -> Self {
        assert!(m >= 3);
        let adj = (0..m).flat_map(|v| [((v + m - 1) % m) as u32, ((v + 1) % m) as u32]).collect();
        RegularGraph { vertices: m, degree: 2, adj }
    }

    /// Every edge u→v has a matching v→u with the same multiplicity.
    pub fn is_symmetric(&self) -> bool {
        let mut count: HashMap<(u32, u32), i64> = HashMap::new();
        for v in 0..self.vertices {
            for &u in self.neighbours(v) {
                *count.entry((v as u32, u)).or_default() += 1;
                *count.entry((u, v as u32)).or_default() -= 1;
            }
        }
        count.values().all(|&c| c == 0)
    }
}

/// `I + sign·e_ij` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

/// The 2n(n−1) elementary generators E_n.
pub fn generators(n: usize) -> Vec<Generator> {
    let mut g = Vec::with_capacity(2 * n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                g.push(Generator { i, j, sign: 1 });
                g.push(Generator { i, j, sign: -1 });
            }
        }
    }
    g
}

/// Elements of SL_n(F_p) in breadth-first order from the identity.
/// Each element is encoded by its row-major entries mod p.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub n: usize,
    pub p: u64,
    codes: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, u32>,
}

impl GroupTable {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn id_of(&self, m: &ModMat) -> Option<usize> {
        let code: Vec<u8> = m.entries().iter().map(|&e| e as u8).collect();
        self.index.get(&code).map(|&i| i as usize)
    }

    pub fn element(&self, id: usize) -> ModMat {
        let e: Vec<i64> = self.codes[id].iter().map(|&c| c as i64).collect();
        ModMat::from_i64(self.n, self.n, self.p, &e).expect("valid modulus")
    }
}

// Left multiplication by I + s·e_ij: row i += s·row j.
fn apply(code: &[u8], n: usize, p: u64, g: Generator) -> Vec<u8> {
    let mut out = code.to_vec();
    let p = p as u16;
    let s = if g.sign > 0 { 1 } else { p - 1 };
    for c in 0..n {
        let v = (code[g.i * n + c] as u16 + s * code[g.j * n + c] as u16) % p;
        out[g.i * n + c] = v as u8;
    }
    out
}

fn check_domain(n: usize, p: u64) -> Result<(), SpectralError> {
    if n < 2 {
        return Err(SpectralError::Domain(format!("n must be at least 2, got {n}")));
    }
    if !is_prime_u64(p) || p > 251 {
        return Err(SpectralError::Domain(format!("p must be a prime below 256, got {p}")));
    }
    Ok(())
}

/// Breadth-first closure of the identity under E_n. Fails before allocating
/// when the predicted order exceeds `cap`.
pub fn enumerate_group(n: usize, p: u64, cap: u64) -> Result<GroupTable, SpectralError> {
    check_domain(n, p)?;
    let predicted = sl_order(n as u32, p);
    if predicted > BigUint::from(cap) {
        return Err(SpectralError::Size { predicted, cap });
    }
    let order = predicted.to_usize().expect("below cap");
    let gens = generators(n);
    let id: Vec<u8> = (0..n * n).map(|k| (k % (n + 1) == 0) as u8).collect();
    let mut codes = Vec::with_capacity(order);
    let mut index = HashMap::with_capacity(order);
    index.insert(id.clone(), 0u32);
    codes.push(id);
    let mut head = 0;
    while head < codes.len() {
        for &g in &gens {
            let next = apply(&codes[head], n, p, g);
            if !index.contains_key(&next) {
                index.insert(next.clone(), codes.len() as u32);
                codes.push(next);
            }
        }
        head += 1;
    }
    assert_eq!(codes.len(), order, "closure size disagrees with the order formula");
    Ok(GroupTable { n, p, codes, index })
}

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub group: GroupTable,
    pub generators: Vec<Generator>,
    pub graph: RegularGraph,
}

/// Edges g → s·g for s ∈ E_n.
pub fn cayley_graph(group: GroupTable) -> CayleyGraph {
    let gens = generators(group.n);
    let mut adj = Vec::with_capacity(group.len() * gens.len());
    for code in &group.codes {
        for &g in &gens {
            adj.push(group.index[&apply(code, group.n, group.p, g)]);
        }
    }
    let graph = RegularGraph { vertices: group.len(), degree: gens.len(), adj };
    CayleyGraph { group, generators: gens, graph }
}

/// max over g ∈ E_n of ‖g·v − v‖² for v the uniform unit vector on
/// {e_1, …, e_n} ⊂ F_p^n, exactly.
pub fn displacement_upper_bound(n: usize, p: u64) -> Result<Ratio<u64>, SpectralError> {
    check_domain(n, p)?;
    let basis: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|k| (k == i) as u64).collect()).collect();
    let mut best = Ratio::from_integer(0);
    for g in generators(n) {
        let moved: Vec<Vec<u64>> = basis
            .iter()
            .map(|e| {
                let mut v = e.clone();
                let s = if g.sign > 0 { 1 } else { p - 1 };
                v[g.i] = (v[g.i] + s * e[g.j]) % p;
                v
            })
            .collect();
        // ‖gv − v‖² = |S Δ gS| / n with S the support of v
        let sym_diff = moved.iter().filter(|m| !basis.contains(m)).count() * 2;
        best = best.max(Ratio::new(sym_diff as u64, n as u64));
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundChecks {
    /// n ≥ 3; below that no lower bound is claimed.
    pub applicable: bool,
    pub beta_lower: Option<f64>,
    pub lower_holds: Option<bool>,
    pub beta_upper: f64,
    /// Informational only: the upper bound is stated for SL_n(Z).
    pub below_upper: bool,
    pub mixing_envelope: Option<f64>,
    pub mixing_within_envelope: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub p: u64,
    pub order: u64,
    pub degree: usize,
    pub beta: f64,
    pub lambda2: f64,
    pub lambda_min: f64,
    pub method: GapMethod,
    pub residual: f64,
    pub mixing_steps: Option<u64>,
    pub displacement_sq: String,
    pub bound_checks: BoundChecks,
}

/// Largest group for which the mixing time is computed.
pub const MIXING_CAP: usize = 10_000;

/// Enumerates SL_n(F_p), measures β and the mixing time, and compares with
/// the stated bounds.
pub fn compare_bounds(n: usize, p: u64, cap: u64) -> Result<SpectralReport, SpectralError> {
    let cg = cayley_graph(enumerate_group(n, p, cap)?);
    let gap = spectral_gap(&cg.graph)?;
    let order = cg.group.len() as u64;
    let mixing = (cg.graph.vertices <= MIXING_CAP).then(|| mixing_time(&cg.graph, 0.25, 1_000_000));
    let mixing_steps = mixing.transpose()?.map(|m| m.steps);
    let applicable = n >= 3;
    let beta_lower = applicable.then(|| kazhdan_lower_a_double_prime(n as u64).powi(2) / 4.0);
    let beta_upper = 1.0 / n as f64;
    let envelope = (gap.beta > 0.0).then(|| 10.0 / gap.beta * ln_big(&BigUint::from(order)));
    debug_assert!((kazhdan_upper(n as u64).powi(2) / 2.0 - beta_upper).abs() < 1e-12);
    let d = displacement_upper_bound(n, p)?;
    Ok(SpectralReport {
        n,
        p,
        order,
        degree: cg.graph.degree,
        beta: gap.beta,
        lambda2: gap.lambda2,
        lambda_min: gap.lambda_min,
        method: gap.method,
        residual: gap.residual,
        mixing_steps,
        displacement_sq: format!("{}/{}", d.numer(), d.denom()),
        bound_checks: BoundChecks {
            applicable,
            beta_lower,
            lower_holds: beta_lower.map(|b| gap.beta >= b),
            beta_upper,
            below_upper: gap.beta <= beta_upper,
            mixing_envelope: envelope,
            mixing_within_envelope: envelope.zip(mixing_steps).map(|(e, s)| (s as f64) <= e),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(enumerate_group(2, 3, 100).unwrap().len(), 24);
        assert_eq!(enumerate_group(3, 2, 1000).unwrap().len(), 168);
        assert!(matches!(enumerate_group(3, 5, 1000), Err(SpectralError::Size { .. })));
        assert!(enumerate_group(3, 4, 1000).is_err());
    }

    #[test]
    fn identity_first_and_lookup() {
        let g = enumerate_group(2, 5, 200).unwrap();
        assert!(g.element(0).is_identity());
        for id in [0, 7, 119] {
            assert_eq!(g.id_of(&g.element(id)), Some(id));
            assert_eq!(g.element(id).det().unwrap(), 1);
        }
    }

    #[test]
    fn cayley_structure() {
        let cg = cayley_graph(enumerate_group(3, 2, 1000).unwrap());
        assert_eq!(cg.graph.degree, 12);
        assert!(cg.graph.is_symmetric());
        assert!(RegularGraph::cycle(6).is_symmetric());
    }

    #[test]
    fn displacement() {
        for n in 2..=12 {
            for p in [2, 3, 5, 7] {
                assert_eq!(displacement_upper_bound(n, p).unwrap(), Ratio::new(2, n as u64));
            }
        }
    }
}
