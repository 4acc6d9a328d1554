//! Exact tools around bounded generation of SL_n(Z): generalized elementary
//! reduction of vector systems, recursive factorization with certificates,
//! Kazhdan-constant bounds, torus geometry checks and Cayley-graph spectra of
//! SL_n(F_p).
//!
//! Indices are 0-based everywhere.

pub mod acceptance;
pub mod algebra;
pub mod arith;
pub mod cli;
pub mod constants;
pub mod factor;
pub mod spectral;
pub mod torus;
pub mod vecsys;
