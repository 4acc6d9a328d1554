use rayon::prelude::*;
use serde::Serialize;

use super::{RegularGraph, SpectralError};

#[derive(Clone, Debug, Serialize)]
pub struct MixingResult {
    pub steps: u64,
    /// Total-variation distance to uniform after `steps`.
    pub distance: f64,
}

/// Total-variation distance to uniform.
pub fn tv_to_uniform(dist: &[f64]) -> f64 {
    let u = 1.0 / dist.len() as f64;
    0.5 * dist.iter().map(|d| (d - u).abs()).sum::<f64>()
}

/// One step of the lazy walk: stay with probability 1/2, otherwise move
/// along a uniformly chosen generator.
pub fn lazy_step(g: &RegularGraph, dist: &[f64], out: &mut [f64]) {
    let w = 0.5 / g.degree as f64;
    // the graph is symmetric, so mass arriving at v equals the sum over neighbours
    out.par_iter_mut().enumerate().for_each(|(v, o)| {
        *o = 0.5 * dist[v] + w * g.neighbours(v).iter().map(|&u| dist[u as usize]).sum::<f64>();
    });
}

/// Smallest t with TV(lazy walk from vertex 0 after t steps, uniform) ≤ threshold.
pub fn mixing_time(g: &RegularGraph, threshold: f64, max_steps: u64) -> Result<MixingResult, SpectralError> {
    if !(0.0..1.0).contains(&threshold) {
        return Err(SpectralError::Domain(format!("threshold must be in [0, 1), got {threshold}")));
    }
    if g.vertices <= 1 {
        return Ok(MixingResult { steps: 0, distance: 0.0 });
    }
    let mut dist = vec![0.0; g.vertices];
    dist[0] = 1.0;
    let mut next = vec![0.0; g.vertices];
    for t in 0..=max_steps {
        let d = tv_to_uniform(&dist);
        if d <= threshold {
            return Ok(MixingResult { steps: t, distance: d });
        }
        lazy_step(g, &dist, &mut next);
        std::mem::swap(&mut dist, &mut next);
    }
    Err(SpectralError::Convergence { iterations: max_steps, residual: tv_to_uniform(&dist) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_cycle() {
        let one = RegularGraph { vertices: 1, degree: 0, adj: vec![] };
        assert_eq!(mixing_time(&one, 0.25, 10).unwrap().steps, 0);
        let c6 = RegularGraph::cycle(6);
        let m = mixing_time(&c6, 0.25, 1000).unwrap();
        assert!(m.steps >= 1 && m.distance <= 0.25);
    }

    #[test]
    fn stays_a_distribution() {
        let g = RegularGraph::complete(5);
        let mut d = vec![1.0, 0.0, 0.0, 0.0, 0.0];
        let mut n = vec![0.0; 5];
        for _ in 0..50 {
            lazy_step(&g, &d, &mut n);
            std::mem::swap(&mut d, &mut n);
            assert!(d.iter().all(|&x| x >= 0.0));
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
