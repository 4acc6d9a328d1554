//! Exact integer and mod-p linear algebra.

mod intmat;
mod modmat;
mod normal_form;
mod transvection;

use num_bigint::BigInt;
use thiserror::Error;

pub use intmat::IntMat;
pub use modmat::{inv_mod, reduce_mod_p, ModMat};
pub use normal_form::{
    column_hermite, inverse_unimodular, is_complete, rank, smith_normal_form, ColumnHermite,
    SmithForm,
};
pub(crate) use transvection::bigint_str;
pub use transvection::{ElemTransvection, GenTransvection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("invalid transvection: {0}")]
    InvalidOp(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
}

/// Exact determinant of a square matrix.
pub fn det_exact(a: &IntMat) -> Result<BigInt, AlgebraError> {
    a.det()
}
