//! Complete vector systems and their reduction to the standard system.

mod primes;
mod reduce;
mod sample;
mod system;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use primes::{dirichlet_prime, SEARCH_BUDGET};
pub use reduce::{
    make_prime_system, make_prime_system_with, reduce_to_standard, Policy, PrimeSystem,
    ReductionTrace,
};
pub use sample::{random_complete_system, Shape};
pub use system::{apply_generalized, is_prime_system, Ring, VectorSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VecSysError {
    #[error("vector system is not complete")]
    NotComplete,
    #[error("policy error: {0}")]
    Policy(String),
    #[error("invalid operation: {0}")]
    InvalidOp(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
