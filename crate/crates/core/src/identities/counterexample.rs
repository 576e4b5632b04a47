//! Karlsson's formula outside its validity range.
//!
//! For `a = -k` with `k < m` the series terminates, so it is finite even
//! though `Re(1-a-m) <= 0`. Such a point is an isolated summability point:
//! the closed form, continued analytically in `a`, no longer equals the
//! terminating sum, whose value is given instead by the extension of
//! Minton's formula to `0 <= k <= m-1`.

use serde::Serialize;

use super::summation::{karlsson_report, minton_extended_closed};
use super::IdentityReport;
use crate::error::Result;
use crate::numerics::{Precision, Scalar, ShiftedFamily};

/// `a = -4`, `b = 33/17`, `f = (21/5, -5/3)`, `m = (7, 8)`; `c = b + 1` is implied.
pub fn counterexample_point() -> (Scalar, Scalar, ShiftedFamily) {
    let family = ShiftedFamily::new(vec![Scalar::ratio(21, 5), Scalar::ratio(-5, 3)], vec![7, 8])
        .expect("valid family");
    (Scalar::int(-4), Scalar::ratio(33, 17), family)
}

/// Karlsson's closed form against the series with the validity condition
/// `Re(1-a-m) > 0` not enforced.
pub fn karlsson_unchecked(
    a: &Scalar,
    b: &Scalar,
    family: &ShiftedFamily,
    prec: Precision,
) -> Result<IdentityReport> {
    karlsson_report("karlsson_counterexample", a, b, family, prec)
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub family: ShiftedFamily,
    /// The terminating series.
    pub lhs: Scalar,
    /// Karlsson's closed form, continued to this point.
    pub karlsson_rhs: Scalar,
    /// `lhs - karlsson_rhs`.
    pub difference: Scalar,
    /// Right side of the extension of Minton's formula with `k = -a`.
    pub extension_rhs: Scalar,
    /// `lhs - extension_rhs`.
    pub extension_residual: Scalar,
}

pub fn karlsson_counterexample(prec: Precision) -> Result<Counterexample> {
    let (a, b, family) = counterexample_point();
    let report = karlsson_unchecked(&a, &b, &family, prec)?;
    let k = a.exact_i64().expect("integer a").unsigned_abs() as usize;
    let ext = minton_extended_closed(k, &b, &family)?.value;
    Ok(Counterexample {
        c: &b + 1,
        extension_residual: &report.lhs - &ext,
        extension_rhs: ext,
        lhs: report.lhs,
        karlsson_rhs: report.rhs,
        difference: report.residual,
        a,
        b,
        family,
    })
}
