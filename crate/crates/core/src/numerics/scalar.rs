use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{BigComplex, ExactRational, NumericsError, Precision};

/// The universal scalar: an exact rational, or an arbitrary-precision complex.
///
/// Arithmetic between two exact values stays exact; anything touching a
/// float is promoted to a float at the float operand's precision.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(ExactRational),
    Float(BigComplex),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(ExactRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(ExactRational::one())
    }

    pub fn int(v: i64) -> Self {
        Scalar::Exact(ExactRational::from(v))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Exact(ExactRational::new(n, d))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar::Exact(ExactRational::from_integer(v))
    }

    pub fn float_f64(re: f64, im: f64, prec: Precision) -> Self {
        Scalar::Float(BigComplex::from_f64(re, im, prec))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&ExactRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Precision of a float value; `None` for exact values.
    pub fn precision(&self) -> Option<Precision> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(z) => Some(z.prec()),
        }
    }

    pub fn to_complex(&self, prec: Precision) -> BigComplex {
        match self {
            Scalar::Exact(r) => BigComplex::from_rational(r, prec),
            Scalar::Float(z) => z.with_prec(prec),
        }
    }

    /// Forces float representation (no-op for floats already at `prec` or coarser).
    pub fn to_float(&self, prec: Precision) -> Scalar {
        Scalar::Float(self.to_complex(prec))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(z) => z.is_zero(),
        }
    }

    /// True when the value is zero, or a float within the pole tolerance of zero.
    pub fn is_numerically_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(z) => z.is_zero() || z.abs_f64() < z.prec().pole_tolerance(),
        }
    }

    /// The integer this scalar equals (exactly, or within the pole tolerance for floats).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Exact(r) => r.to_integer(),
            Scalar::Float(z) => z.near_integer(z.prec().pole_tolerance()),
        }
    }

    /// `Some(k)` when the scalar is the nonpositive integer `-k`.
    pub fn as_nonpositive_integer(&self) -> Option<u64> {
        let i = self.as_integer()?;
        if i.is_positive() {
            None
        } else {
            (-i).to_u64()
        }
    }

    /// `Some(n)` when the scalar is the positive integer `n`.
    pub fn as_positive_integer(&self) -> Option<u64> {
        let i = self.as_integer()?;
        if i.is_positive() {
            i.to_u64()
        } else {
            None
        }
    }

    pub fn is_nonpositive_integer(&self) -> bool {
        self.as_nonpositive_integer().is_some()
    }

    /// Sign of the real part.
    pub fn re_sign(&self) -> Ordering {
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    Ordering::Equal
                } else if r.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            Scalar::Float(z) => z.re_sign(),
        }
    }

    pub fn re_positive(&self) -> bool {
        self.re_sign() == Ordering::Greater
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(z) => z.re_f64(),
        }
    }

    pub fn im_f64(&self) -> f64 {
        match self {
            Scalar::Exact(_) => 0.0,
            Scalar::Float(z) => z.im_f64(),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().abs(),
            Scalar::Float(z) => z.abs_f64(),
        }
    }

    pub fn log10_abs(&self) -> f64 {
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    let n = BigComplex::from_rational(r, Precision::new(20).expect("valid"));
                    n.log10_abs()
                }
            }
            Scalar::Float(z) => z.log10_abs(),
        }
    }

    /// Real part as a scalar (exact values are already real).
    pub fn real_part(&self) -> Scalar {
        match self {
            Scalar::Exact(_) => self.clone(),
            Scalar::Float(z) => Scalar::Float(BigComplex::from_real(z.re().clone(), z.prec())),
        }
    }

    /// Reciprocal; `None` for an exact zero or a float zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip().expect("nonzero")),
            Scalar::Float(z) => Scalar::Float(z.recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn powi(&self, n: i64) -> Option<Scalar> {
        match self {
            Scalar::Exact(r) => {
                if n < 0 && r.is_zero() {
                    return None;
                }
                let base = if n < 0 { r.recip()? } else { r.clone() };
                let mut acc = ExactRational::one();
                for _ in 0..n.unsigned_abs() {
                    acc = &acc * &base;
                }
                Some(Scalar::Exact(acc))
            }
            Scalar::Float(z) => {
                if n < 0 && z.is_zero() {
                    return None;
                }
                Some(Scalar::Float(z.powi(n)))
            }
        }
    }

    /// Principal power `self^w`. Exact when `w` is an exact integer.
    pub fn pow(&self, w: &Scalar, prec: Precision) -> Option<Scalar> {
        if let Some(n) = w.as_rational().and_then(|r| r.to_integer()).and_then(|n| n.to_i64()) {
            return self.powi(n);
        }
        let base = self.to_complex(prec);
        let exp = w.to_complex(prec);
        base.powc(&exp).map(Scalar::Float)
    }

    /// Relative difference `|a-b| / max(|a|,|b|)` as f64; absolute when both vanish.
    pub fn rel_diff(&self, other: &Scalar) -> f64 {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if a == b {
                    return 0.0;
                }
                let d = (a - b).to_f64().abs();
                let s = a.to_f64().abs().max(b.to_f64().abs());
                if s == 0.0 {
                    d
                } else {
                    d / s
                }
            }
            _ => {
                let prec = self.precision().or(other.precision()).expect("one float operand");
                self.to_complex(prec).rel_diff(&other.to_complex(prec))
            }
        }
    }

    /// Renders exact values as `p/q`, floats with `digits` significant digits.
    pub fn render(&self, digits: usize) -> String {
        match self {
            Scalar::Exact(r) => r.to_string(),
            Scalar::Float(z) => z.to_string_digits(digits),
        }
    }

    fn binop(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&ExactRational, &ExactRational) -> ExactRational,
        float: impl FnOnce(&BigComplex, &BigComplex) -> BigComplex,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(float(a, b)),
            (Scalar::Exact(a), Scalar::Float(b)) => {
                Scalar::Float(float(&BigComplex::from_rational(a, b.prec()), b))
            }
            (Scalar::Float(a), Scalar::Exact(b)) => {
                Scalar::Float(float(a, &BigComplex::from_rational(b, a.prec())))
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<ExactRational> for Scalar {
    fn from(v: ExactRational) -> Self {
        Scalar::Exact(v)
    }
}

impl From<BigComplex> for Scalar {
    fn from(v: BigComplex) -> Self {
        Scalar::Float(v)
    }
}

impl PartialEq for Scalar {
    /// Exact equality for rationals; value equality for floats (no tolerance).
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            (Scalar::Exact(a), Scalar::Float(b)) | (Scalar::Float(b), Scalar::Exact(a)) => {
                BigComplex::from_rational(a, b.prec()) == *b
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(z) => write!(f, "{z}"),
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on exact division by zero; use [`Scalar::checked_div`] where the divisor may vanish.
    fn div(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a / b, |a, b| a / b)
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
        impl $trait<i64> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i64) -> Scalar {
                self.$method(&Scalar::int(rhs))
            }
        }
        impl $trait<i64> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i64) -> Scalar {
                (&self).$method(&Scalar::int(rhs))
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Sub<Scalar> for i64 {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar::int(self) - rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

impl Scalar {
    /// Parses a scalar at the given float precision.
    ///
    /// Accepted forms: `p/q`, decimals (kept exact), and complex pairs such as
    /// `1/2+3i`, `-0.25-1.5i`, `2i`.
    pub fn parse(s: &str, prec: Precision) -> Result<Scalar, NumericsError> {
        let t = s.trim();
        let bad = || NumericsError::Parse(s.to_string());
        if let Some(body) = t.strip_suffix('i') {
            // Split at the last sign that is not part of an exponent and not leading.
            let bytes = body.as_bytes();
            let mut split = None;
            for i in (1..bytes.len()).rev() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                    split = Some(i);
                    break;
                }
            }
            let (re, im) = match split {
                Some(i) => (&body[..i], &body[i..]),
                None => ("0", body),
            };
            let im = match im {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            let re: ExactRational = re.parse().map_err(|_| bad())?;
            let im: ExactRational = im.parse().map_err(|_| bad())?;
            if im.is_zero() {
                return Ok(Scalar::Exact(re));
            }
            return Ok(Scalar::Float(BigComplex::from_rationals(&re, &im, prec)));
        }
        ExactRational::from_str(t).map(Scalar::Exact).map_err(|_| bad())
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.collect_str(r),
            Scalar::Float(z) => serializer.collect_str(z),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Scalar::parse(&s, Precision::DEFAULT).map_err(serde::de::Error::custom)
    }
}

impl Scalar {
    /// True only for an exact rational zero.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(_) => false,
        }
    }

    /// Integer value as i64 when exact.
    pub fn exact_i64(&self) -> Option<i64> {
        self.as_rational()?.to_integer()?.to_i64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(40).unwrap()
    }

    #[test]
    fn exact_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        let s = &a + &b;
        assert_eq!(s, Scalar::ratio(1, 2));
        assert!(s.is_exact());
    }

    #[test]
    fn mixed_promotes_to_float() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::float_f64(0.5, 0.0, p());
        let s = &a + &b;
        assert!(!s.is_exact());
        assert!((s.re_f64() - (1.0 / 3.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(Scalar::int(-4).as_nonpositive_integer(), Some(4));
        assert_eq!(Scalar::int(0).as_nonpositive_integer(), Some(0));
        assert_eq!(Scalar::int(3).as_nonpositive_integer(), None);
        assert_eq!(Scalar::ratio(-7, 2).as_nonpositive_integer(), None);
        let f = Scalar::float_f64(-2.0, 0.0, p());
        assert_eq!(f.as_nonpositive_integer(), Some(2));
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(Scalar::parse("33/17", p()).unwrap(), Scalar::ratio(33, 17));
        assert_eq!(Scalar::parse("4.2", p()).unwrap(), Scalar::ratio(21, 5));
        assert_eq!(Scalar::parse("-5/3", p()).unwrap(), Scalar::ratio(-5, 3));
        let z = Scalar::parse("1/2-3i", p()).unwrap();
        assert!((z.re_f64() - 0.5).abs() < 1e-15 && (z.im_f64() + 3.0).abs() < 1e-15);
        let z = Scalar::parse("2i", p()).unwrap();
        assert!((z.im_f64() - 2.0).abs() < 1e-15);
        let z = Scalar::parse("-1.5e-1+2.5i", p()).unwrap();
        assert!((z.re_f64() + 0.15).abs() < 1e-15);
        let z = Scalar::parse("3+0i", p()).unwrap();
        assert_eq!(z, Scalar::int(3));
        assert!(Scalar::parse("x", p()).is_err());
    }

    #[test]
    fn exact_powers() {
        assert_eq!(Scalar::ratio(2, 3).powi(3).unwrap(), Scalar::ratio(8, 27));
        assert_eq!(Scalar::ratio(2, 3).powi(-2).unwrap(), Scalar::ratio(9, 4));
        assert!(Scalar::zero().powi(-1).is_none());
    }
}
