//! Seeded random complete systems, including shapes that defeat the shortcut
//! paths of the reduction (outside columns of low rank or sharing a factor).

use num_bigint::BigInt;
use rand::Rng;

use super::{Ring, VectorSystem};
use crate::algebra::IntMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Uniform,
    /// Columns k.. share a common factor, so they cannot generate alone.
    SharedFactor,
    /// Columns k.. span a proper subspace.
    DeficientOutside,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Uniform, Shape::SharedFactor, Shape::DeficientOutside];
}

/// Draws until the system is complete; unstructured entries lie in
/// [-bound, bound].
pub fn random_complete_system<R: Rng>(
    rng: &mut R,
    k: usize,
    n: usize,
    ring: Ring,
    shape: Shape,
    bound: i64,
) -> VectorSystem {
    let shape = if k == 1 && shape == Shape::DeficientOutside { Shape::SharedFactor } else { shape };
    for _ in 0..100_000 {
        let mut m = IntMat::zeros(k, n);
        let draw = |rng: &mut R| BigInt::from(rng.gen_range(-bound..=bound));
        match shape {
            Shape::Uniform => {
                for i in 0..k {
                    for j in 0..n {
                        m[(i, j)] = draw(rng);
                    }
                }
            }
            Shape::SharedFactor => {
                let f = BigInt::from(rng.gen_range(2..=6));
                for i in 0..k {
                    for j in 0..n {
                        let x = draw(rng);
                        m[(i, j)] = if j >= k { x * &f } else { x };
                    }
                }
            }
            Shape::DeficientOutside => {
                let r = rng.gen_range(k.div_ceil(2)..k);
                let small = (bound / 10).max(1);
                let basis: Vec<Vec<BigInt>> =
                    (0..r).map(|_| (0..k).map(|_| BigInt::from(rng.gen_range(-small..=small))).collect()).collect();
                for j in 0..n {
                    if j < k {
                        for i in 0..k {
                            m[(i, j)] = draw(rng);
                        }
                    } else {
                        for b in &basis {
                            let c = BigInt::from(rng.gen_range(-5..=5));
                            for i in 0..k {
                                m[(i, j)] += &b[i] * &c;
                            }
                        }
                    }
                }
            }
        }
        if let Ok(v) = VectorSystem::new(m, ring) {
            return v;
        }
    }
    panic!("could not draw a complete {k}x{n} system of shape {shape:?}");
}
