use serde::{Deserialize, Serialize};

use crate::numerics::{Precision, Scalar};
use crate::series::SeriesResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Both sides of one identity instance and their residual.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    /// `lhs - rhs`; exact in exact mode.
    pub residual: Scalar,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub mode: Mode,
    /// Relative error estimate of the residual; zero in exact mode.
    pub est_error: f64,
}

impl IdentityReport {
    /// Exact mode: residual exactly zero. Float mode: `rel_residual <= 10 est_error`.
    pub fn passes(&self) -> bool {
        match self.mode {
            Mode::Exact => self.residual.is_exact_zero(),
            Mode::Float => self.rel_residual <= 10.0 * self.est_error,
        }
    }

    pub(crate) fn new(name: &str, lhs: Side, rhs: Side, prec: Precision) -> Self {
        let residual = &lhs.value - &rhs.value;
        let mode = if residual.is_exact() { Mode::Exact } else { Mode::Float };
        let abs_residual = residual.abs_f64();
        let scale = lhs.value.abs_f64().max(rhs.value.abs_f64());
        let rel_residual = if residual.is_exact_zero() {
            0.0
        } else if scale > 0.0 {
            abs_residual / scale
        } else {
            abs_residual
        };
        let est_error = match mode {
            Mode::Exact => 0.0,
            Mode::Float => {
                let abs_err = lhs.err + rhs.err;
                let rel = if scale > 0.0 { abs_err / scale } else { abs_err };
                rel + ulp(prec)
            }
        };
        IdentityReport {
            name: name.to_string(),
            lhs: lhs.value,
            rhs: rhs.value,
            residual,
            abs_residual,
            rel_residual,
            mode,
            est_error,
        }
    }
}

/// Rounding unit assumed for a value carried at `prec` digits.
pub(crate) fn ulp(prec: Precision) -> f64 {
    prec.epsilon()
}

/// Rounding allowance, in units of [`ulp`], for one gamma evaluation.
pub(crate) const GAMMA_ULPS: f64 = 100.0;

/// A computed value with an absolute error bound.
#[derive(Clone, Debug)]
pub(crate) struct Side {
    pub value: Scalar,
    pub err: f64,
}

impl Side {
    /// A closed-form value whose computation cost about `ulps` roundings.
    pub fn closed(value: Scalar, ulps: f64) -> Side {
        let err = match value.precision() {
            None => 0.0,
            Some(p) => value.abs_f64() * ulps * ulp(p),
        };
        Side { value, err }
    }

    pub fn exact(value: Scalar) -> Side {
        Side::closed(value, 1.0)
    }

    pub fn series(r: SeriesResult) -> Side {
        Side::closed(r.value, 1.0).plus_err(r.est_error)
    }

    fn plus_err(mut self, e: f64) -> Side {
        self.err += e;
        self
    }

    fn rounding(value: &Scalar) -> f64 {
        value.precision().map_or(0.0, |p| value.abs_f64() * ulp(p))
    }

    pub fn add(&self, o: &Side) -> Side {
        let value = &self.value + &o.value;
        let err = self.err + o.err + Self::rounding(&value);
        Side { value, err }
    }

    pub fn sub(&self, o: &Side) -> Side {
        let value = &self.value - &o.value;
        let err = self.err + o.err + Self::rounding(&value);
        Side { value, err }
    }

    pub fn mul(&self, o: &Side) -> Side {
        let value = &self.value * &o.value;
        let err = self.value.abs_f64() * o.err
            + o.value.abs_f64() * self.err
            + self.err * o.err
            + Self::rounding(&value);
        Side { value, err }
    }

    pub fn scale(&self, k: &Scalar) -> Side {
        self.mul(&Side::exact(k.clone()))
    }
}
