use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{RegularGraph, SpectralError};

/// Above this many vertices the gap is computed iteratively.
pub const DENSE_CUTOFF: usize = 4000;

const TOL: f64 = 1e-8;
const MAX_ITER: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMethod {
    Dense,
    Power,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralGap {
    pub beta: f64,
    pub lambda2: f64,
    pub lambda_min: f64,
    pub method: GapMethod,
    /// ‖Mv − λv‖ for the λ₂ eigenvector (0 for dense solves).
    pub residual: f64,
}

/// β = 1 − λ₂ of the degree-normalized adjacency.
pub fn spectral_gap(g: &RegularGraph) -> Result<SpectralGap, SpectralError> {
    if g.vertices < 2 {
        return Err(SpectralError::Domain("spectral gap needs at least two vertices".into()));
    }
    if g.vertices <= DENSE_CUTOFF {
        Ok(dense(g))
    } else {
        power(g)
    }
}

/// All eigenvalues of the normalized adjacency, largest first. Dense solve;
/// refuses graphs above `DENSE_CUTOFF`.
pub fn spectrum(g: &RegularGraph) -> Result<Vec<f64>, SpectralError> {
    if g.vertices > DENSE_CUTOFF {
        return Err(SpectralError::Domain(format!(
            "full spectrum needs a dense solve; {} vertices exceeds {DENSE_CUTOFF}",
            g.vertices
        )));
    }
    let n = g.vertices;
    let w = 1.0 / g.degree as f64;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        for &u in g.neighbours(v) {
            m[(v, u as usize)] += w;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

fn dense(g: &RegularGraph) -> SpectralGap {
    let n = g.vertices;
    let ev = spectrum(g).expect("below the dense cutoff");
    let lambda2 = ev[1];
    SpectralGap { beta: 1.0 - lambda2, lambda2, lambda_min: ev[n - 1], method: GapMethod::Dense, residual: 0.0 }
}

fn matvec(g: &RegularGraph, x: &[f64], out: &mut [f64]) {
    let w = 1.0 / g.degree as f64;
    out.par_iter_mut().enumerate().for_each(|(v, o)| {
        *o = g.neighbours(v).iter().map(|&u| x[u as usize]).sum::<f64>() * w;
    });
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

// Top eigenpair of (I + s·A)/2 restricted to the complement of the constant
// vector when `deflated`. Returns (eigenvalue of A, residual).
fn top_eigen(g: &RegularGraph, s: f64, deflated: bool) -> Result<(f64, f64), SpectralError> {
    let n = g.vertices;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut ax = vec![0.0; n];
    let mut theta_prev = f64::NAN;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITER {
        if deflated {
            deflate(&mut x);
        }
        normalize(&mut x);
        matvec(g, &x, &mut ax);
        // y = (x + s·Ax)/2, θ = ⟨x, Ax⟩ is the Rayleigh quotient of A
        let theta: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        if it % 16 == 0 {
            residual = x.iter().zip(&ax).map(|(a, b)| (b - theta * a).powi(2)).sum::<f64>().sqrt();
            if (theta - theta_prev).abs() <= TOL * TOL * theta.abs().max(1e-3) || residual <= TOL {
                return Ok((theta, residual));
            }
            theta_prev = theta;
        }
        x.iter_mut().zip(&ax).for_each(|(a, b)| *a = 0.5 * (*a + s * b));
    }
    Err(SpectralError::Convergence { iterations: MAX_ITER, residual })
}

fn power(g: &RegularGraph) -> Result<SpectralGap, SpectralError> {
    let (lambda2, residual) = top_eigen(g, 1.0, true)?;
    let (lambda_min, _) = top_eigen(g, -1.0, false)?;
    Ok(SpectralGap { beta: 1.0 - lambda2, lambda2, lambda_min, method: GapMethod::Power, residual })
}

#[cfg(test)]
pub(super) fn power_gap(g: &RegularGraph) -> Result<SpectralGap, SpectralError> {
    power(g)
}
