use std::fmt;

use serde::{Deserialize, Serialize};

use super::NumericsError;

/// Working precision in decimal digits.
///
/// Every float value carries the precision it was computed at; binary
/// operations produce the smaller of the two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub const MIN_DIGITS: u32 = 16;
    pub const DEFAULT: Precision = Precision(50);

    /// Guard bits carried on top of the nominal digit count.
    const GUARD_BITS: usize = 64;

    pub fn new(digits: u32) -> Result<Self, NumericsError> {
        if digits < Self::MIN_DIGITS {
            return Err(NumericsError::PrecisionTooLow { min: Self::MIN_DIGITS, got: digits });
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    /// Binary mantissa size used by the float backend, rounded up to whole words.
    pub fn bits(self) -> usize {
        let raw = (self.0 as f64 * std::f64::consts::LOG2_10).ceil() as usize + Self::GUARD_BITS;
        raw.div_ceil(64) * 64
    }

    /// A precision `extra` digits finer than `self`.
    pub fn with_extra(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }

    /// `10^(-digits)`.
    pub fn epsilon(self) -> f64 {
        10f64.powi(-(self.0 as i32))
    }

    /// Distance below which a value is considered to coincide with an integer.
    pub fn pole_tolerance(self) -> f64 {
        10f64.powi(-((self.0 / 2) as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl TryFrom<u32> for Precision {
    type Error = NumericsError;

    fn try_from(value: u32) -> Result<Self, Self::Error> {
        Precision::new(value)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(Precision::new(15).is_err());
        assert_eq!(Precision::new(16).unwrap().digits(), 16);
    }

    #[test]
    fn bits_cover_digits() {
        let p = Precision::new(50).unwrap();
        assert!(p.bits() as f64 >= 50.0 * std::f64::consts::LOG2_10);
        assert_eq!(p.bits() % 64, 0);
    }
}
