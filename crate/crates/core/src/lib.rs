//! Summation, transformation and recurrence identities for generalized
//! hypergeometric functions with integral parameter differences, checked
//! against independent series evaluation.

pub mod combinatorics;
pub mod error;
pub mod harness;
pub mod identities;
pub mod numerics;
pub mod polynomials;
pub mod series;

pub use error::{Error, Result};
