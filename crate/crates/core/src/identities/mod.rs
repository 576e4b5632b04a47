//! The identity catalog. Every operation evaluates both sides independently
//! and returns them with their residual; judging the residual is left to the
//! caller (see [`IdentityReport::passes`]).

mod catalog;
mod counterexample;
mod report;
mod summation;
mod transformation;

pub use catalog::{Identity, IdentityInput};
pub use counterexample::{counterexample_point, karlsson_counterexample, karlsson_unchecked, Counterexample};
pub use report::{IdentityReport, Mode};
pub use summation::{
    contiguous_shift, contiguous_vanishing, degenerate_sum, extension_coincidence, gasper, karlsson,
    karlsson_multi, karlsson_multi_closed, minton, minton_extended, mp2012_sum, pochhammer_reflection_check,
};
pub use transformation::{
    g_identity, g_identity_with, mp_transform, mp_transform_with, product_identity, product_identity_with,
    q_summation, recurrence_chain, recurrence_step, ZetaRoute,
};

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::numerics::{Precision, Scalar, ShiftedFamily};
use crate::series::{eval_series, HypParams};
use report::Side;

/// Precision of the coarsest float input, or the default when all inputs are exact.
fn working_prec<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Precision {
    xs.into_iter().filter_map(Scalar::precision).min().unwrap_or(Precision::DEFAULT)
}

fn family_prec(family: &ShiftedFamily, extra: &[&Scalar]) -> Precision {
    working_prec(family.f().iter().chain(extra.iter().copied()))
}

/// `F(top, f+m; bottom, f; x)`.
fn with_family(top: Vec<Scalar>, bottom: Vec<Scalar>, family: &ShiftedFamily, x: Scalar) -> HypParams {
    let mut t = top;
    t.extend(family.f_plus_m());
    let mut b = bottom;
    b.extend(family.f().iter().cloned());
    HypParams::new(t, b, x)
}

thread_local! {
    static DRY_RUN: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with series evaluation replaced by a placeholder, so that only the
/// precondition and admissibility checks along the way take effect.
fn dry_run<T>(f: impl FnOnce() -> T) -> T {
    DRY_RUN.with(|d| d.set(true));
    let out = f();
    DRY_RUN.with(|d| d.set(false));
    out
}

fn series(params: &HypParams, prec: Precision) -> Result<Side> {
    if DRY_RUN.with(Cell::get) {
        params.classify()?;
        return Ok(Side::exact(Scalar::one()));
    }
    Ok(Side::series(eval_series(params, prec)?))
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

fn nonzero(v: &Scalar, what: &str) -> Result<()> {
    require(!v.is_numerically_zero(), || format!("{what} vanishes"))
}

/// Every series is admissible and convergent.
fn admissible(params: &[&HypParams]) -> Result<()> {
    for p in params {
        if let crate::series::Classification::Divergent = p.classify()? {
            return Err(Error::Divergent(p.describe()));
        }
    }
    Ok(())
}

impl Error {
    /// Errors meaning the input lies outside an identity's domain, as opposed
    /// to a failed evaluation.
    pub fn is_rejection(&self) -> bool {
        use crate::numerics::NumericsError;
        matches!(
            self,
            Error::Precondition(_)
                | Error::InadmissibleBottom(_)
                | Error::DegenerateQ
                | Error::DuplicateBeta(..)
                | Error::Divergent(_)
                | Error::OutOfRange { .. }
                | Error::DimensionMismatch(_)
                | Error::Numerics(NumericsError::Pole(_))
                | Error::Numerics(NumericsError::InvalidFamily(_))
        )
    }
}
