//! Scalar arithmetic: exact rationals, arbitrary-precision complex numbers,
//! the gamma function, Pochhammer symbols and pole-safe gamma ratios.

mod complex;
mod family;
mod gamma;
mod pochhammer;
mod precision;
mod rational;
mod scalar;

use thiserror::Error;

pub use complex::BigComplex;
#[allow(unused_imports)]
pub(crate) use complex::{float_to_f64, format_float};
pub use family::ShiftedFamily;
pub use gamma::{gamma, gamma_ratio, gamma_scalar};
pub use pochhammer::{factorial, pochhammer, pochhammer_multi, pochhammer_vec};
pub use precision::Precision;
pub use rational::ExactRational;
pub use scalar::Scalar;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("gamma pole at {0}")]
    Pole(String),
    #[error("length mismatch: {values} values but {shifts} shifts")]
    LengthMismatch { values: usize, shifts: usize },
    #[error("precision must be at least {min} digits, got {got}")]
    PrecisionTooLow { min: u32, got: u32 },
    #[error("invalid shifted family: {0}")]
    InvalidFamily(String),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}
