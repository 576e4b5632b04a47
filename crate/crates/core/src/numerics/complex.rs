use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{ToPrimitive, Zero};

use super::{ExactRational, Precision};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache allocation"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Converts an arbitrary-size integer to a float rounded to `bits`.
pub(crate) fn bigint_to_float(n: &BigInt, bits: usize) -> BigFloat {
    let (sign, words) = n.to_u64_digits();
    if sign == BigSign::NoSign || words.is_empty() {
        return BigFloat::from_word(0, bits);
    }
    let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
    let exact = BigFloat::from_words(&words, s, (words.len() * 64) as i32);
    let mut out = exact;
    if out.precision().unwrap_or(0) > bits {
        out.set_precision(bits, RM).expect("valid precision");
    }
    out
}

pub(crate) fn rational_to_float(r: &ExactRational, bits: usize) -> BigFloat {
    let n = bigint_to_float(r.numer(), bits + 64);
    if r.is_integer() {
        let mut n = n;
        if n.precision().unwrap_or(0) > bits {
            n.set_precision(bits, RM).expect("valid precision");
        }
        return n;
    }
    let d = bigint_to_float(r.denom(), bits + 64);
    n.div(&d, bits, RM)
}

/// Nearest f64 to an arbitrary-precision float (saturating to 0 / infinity).
pub(crate) fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((m, _n, s, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let Some(&top) = m.last() else {
        return 0.0;
    };
    if top == 0 {
        return 0.0;
    }
    let frac = top as f64 / 18446744073709551616.0;
    let v = frac * 2f64.powf(e as f64);
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Rounds a float to the nearest integer (ties away from zero).
pub(crate) fn float_round(x: &BigFloat, bits: usize) -> BigFloat {
    let half = BigFloat::from_f64(0.5, bits);
    if x.is_negative() {
        x.sub(&half, bits, RM).ceil()
    } else {
        x.add(&half, bits, RM).floor()
    }
}

pub(crate) fn float_to_bigint(x: &BigFloat) -> Option<BigInt> {
    let Some((m, _n, s, e, _)) = x.as_raw_parts() else {
        return None;
    };
    if x.is_zero() {
        return Some(BigInt::zero());
    }
    let words = m.to_vec();
    let mant = BigInt::from_slice(
        BigSign::Plus,
        &words.iter().flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32]).collect::<Vec<u32>>(),
    );
    // value = mant * 2^(e - 64*len)
    let shift = e as i64 - (m.len() * 64) as i64;
    let v = if shift >= 0 { mant << shift as usize } else { mant >> (-shift) as usize };
    Some(if s == Sign::Neg { -v } else { v })
}

/// Arbitrary-precision complex number.
#[derive(Clone)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    prec: Precision,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: Precision) -> Self {
        let bits = prec.bits();
        let fit = |mut x: BigFloat| {
            if x.precision().unwrap_or(0) > bits {
                x.set_precision(bits, RM).expect("valid precision");
            }
            x
        };
        BigComplex { re: fit(re), im: fit(im), prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        let bits = prec.bits();
        BigComplex { re: BigFloat::from_i64(v, bits), im: BigFloat::from_word(0, bits), prec }
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        let bits = prec.bits();
        BigComplex { re: BigFloat::from_f64(re, bits), im: BigFloat::from_f64(im, bits), prec }
    }

    pub fn from_rational(r: &ExactRational, prec: Precision) -> Self {
        let bits = prec.bits();
        BigComplex { re: rational_to_float(r, bits), im: BigFloat::from_word(0, bits), prec }
    }

    pub fn from_rationals(re: &ExactRational, im: &ExactRational, prec: Precision) -> Self {
        let bits = prec.bits();
        BigComplex { re: rational_to_float(re, bits), im: rational_to_float(im, bits), prec }
    }

    pub fn from_real(re: BigFloat, prec: Precision) -> Self {
        let bits = prec.bits();
        Self::new(re, BigFloat::from_word(0, bits), prec)
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    /// Re-rounds to a different precision (widening keeps the current value).
    pub fn with_prec(&self, prec: Precision) -> Self {
        Self::new(self.re.clone(), self.im.clone(), prec)
    }

    pub fn re_f64(&self) -> f64 {
        float_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        float_to_f64(&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.clone().neg(), prec: self.prec }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let bits = self.prec.bits();
        let r2 = self.re.mul(&self.re, bits, RM);
        let i2 = self.im.mul(&self.im, bits, RM);
        r2.add(&i2, bits, RM)
    }

    pub fn abs(&self) -> BigFloat {
        let bits = self.prec.bits();
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.norm_sqr().sqrt(bits, RM)
    }

    /// |z| as f64, computed without overflow for large exponents.
    pub fn abs_f64(&self) -> f64 {
        float_to_f64(&self.abs())
    }

    /// log10 |z|, finite for any nonzero value regardless of magnitude.
    pub fn log10_abs(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        let Some((m, _, _, e, _)) = a.as_raw_parts() else {
            return f64::NAN;
        };
        let top = *m.last().unwrap_or(&0) as f64 / 18446744073709551616.0;
        (top.log2() + e as f64) * std::f64::consts::LOG10_2
    }

    pub fn recip(&self) -> Self {
        BigComplex::one(self.prec) / self.clone()
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let bits = self.prec.bits();
        let kf = BigFloat::from_i64(k, bits);
        BigComplex { re: self.re.mul(&kf, bits, RM), im: self.im.mul(&kf, bits, RM), prec: self.prec }
    }

    pub fn pi(prec: Precision) -> Self {
        let bits = prec.bits();
        let pi = with_consts(|cc| cc.pi(bits, RM));
        Self::from_real(pi, prec)
    }

    pub fn exp(&self) -> Self {
        let bits = self.prec.bits();
        with_consts(|cc| {
            let mag = self.re.exp(bits, RM, cc);
            if self.im.is_zero() {
                return Self::from_real(mag, self.prec);
            }
            let c = self.im.cos(bits, RM, cc);
            let s = self.im.sin(bits, RM, cc);
            BigComplex { re: mag.mul(&c, bits, RM), im: mag.mul(&s, bits, RM), prec: self.prec }
        })
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> BigFloat {
        let bits = self.prec.bits();
        with_consts(|cc| {
            let pi = cc.pi(bits, RM);
            if self.re.is_zero() {
                if self.im.is_zero() {
                    return BigFloat::from_word(0, bits);
                }
                let half = pi.div(&BigFloat::from_i64(2, bits), bits, RM);
                return if self.im.is_negative() { half.neg() } else { half };
            }
            let base = self.im.div(&self.re, bits, RM).atan(bits, RM, cc);
            if self.re.is_positive() {
                base
            } else if self.im.is_negative() {
                base.sub(&pi, bits, RM)
            } else {
                base.add(&pi, bits, RM)
            }
        })
    }

    /// Principal natural logarithm; `None` at zero.
    pub fn ln(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let bits = self.prec.bits();
        let arg = self.arg();
        let half = BigFloat::from_f64(0.5, bits);
        let re = with_consts(|cc| {
            if self.im.is_zero() {
                self.re.abs().ln(bits, RM, cc)
            } else {
                self.norm_sqr().ln(bits, RM, cc).mul(&half, bits, RM)
            }
        });
        Some(BigComplex { re, im: arg, prec: self.prec })
    }

    /// Principal power `self^w = exp(w ln self)`; `0^w` is 0 for Re w > 0 and `None` otherwise.
    pub fn powc(&self, w: &BigComplex) -> Option<Self> {
        if self.is_zero() {
            return w.re.is_positive().then(|| BigComplex::zero(self.prec.min(w.prec)));
        }
        let ln = self.ln()?;
        Some((ln * w.clone()).exp())
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = BigComplex::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        if self.im.is_zero() && self.re.is_positive() {
            let bits = self.prec.bits();
            return Self::from_real(self.re.sqrt(bits, RM), self.prec);
        }
        let half = BigComplex::from_f64(0.5, 0.0, self.prec);
        self.powc(&half).expect("nonzero base")
    }

    pub fn sin(&self) -> Self {
        let bits = self.prec.bits();
        with_consts(|cc| {
            let sx = self.re.sin(bits, RM, cc);
            if self.im.is_zero() {
                return Self::from_real(sx, self.prec);
            }
            let cx = self.re.cos(bits, RM, cc);
            let ey = self.im.exp(bits, RM, cc);
            let emy = BigFloat::from_word(1, bits).div(&ey, bits, RM);
            let half = BigFloat::from_f64(0.5, bits);
            let cosh = ey.add(&emy, bits, RM).mul(&half, bits, RM);
            let sinh = ey.sub(&emy, bits, RM).mul(&half, bits, RM);
            BigComplex { re: sx.mul(&cosh, bits, RM), im: cx.mul(&sinh, bits, RM), prec: self.prec }
        })
    }

    /// Integer nearest to the real part, when `self` lies within `tol` of it.
    pub fn near_integer(&self, tol: f64) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        if float_to_f64(&self.im).abs() > tol {
            return None;
        }
        let bits = self.prec.bits();
        let r = float_round(&self.re, bits);
        let d = self.re.sub(&r, bits, RM);
        if float_to_f64(&d).abs() > tol {
            return None;
        }
        float_to_bigint(&r)
    }

    /// Sign of the real part.
    pub fn re_sign(&self) -> Ordering {
        if self.re.is_zero() {
            Ordering::Equal
        } else if self.re.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = format_float(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = format_float(&self.im.abs(), digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{re}{sign}{im}i")
    }
}

/// Formats a float as `d.ddd…e±x` with exactly `digits` significant digits.
pub(crate) fn format_float(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let bits = ((digits as f64 + 2.0) * std::f64::consts::LOG2_10).ceil() as usize + 64;
    let mut y = x.clone();
    if y.precision().unwrap_or(0) > bits {
        y.set_precision(bits, RM).expect("valid precision");
    }
    let raw = with_consts(|cc| y.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw.as_str()),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let mut ds: Vec<u8> = mant.bytes().filter(|b| b.is_ascii_digit()).collect();
    let dot = mant.find('.').unwrap_or(mant.len()) as i64;
    // Normalize leading zeros into the exponent.
    let lead = ds.iter().take_while(|&&d| d == b'0').count();
    if lead == ds.len() {
        return "0".to_string();
    }
    ds.drain(..lead);
    let mut exp10 = exp + dot - 1 - lead as i64;
    // Round to `digits` significant digits, half up.
    if ds.len() > digits {
        let round_up = ds[digits] >= b'5';
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, b'1');
                    ds.truncate(digits);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == b'9' {
                    ds[i] = b'0';
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() < digits {
        ds.push(b'0');
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push(ds[0] as char);
    if digits > 1 {
        s.push('.');
        s.extend(ds[1..].iter().map(|&b| b as char));
    }
    s.push_str(&format!("e{exp10}"));
    s
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigComplex({}, {})", self.to_string_digits(self.prec.digits() as usize), self.prec)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_digits(self.prec.digits() as usize))
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: BigComplex) -> BigComplex {
        &self + &rhs
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec.min(rhs.prec);
        let bits = prec.bits();
        BigComplex { re: self.re.add(&rhs.re, bits, RM), im: self.im.add(&rhs.im, bits, RM), prec }
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: BigComplex) -> BigComplex {
        &self - &rhs
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec.min(rhs.prec);
        let bits = prec.bits();
        BigComplex { re: self.re.sub(&rhs.re, bits, RM), im: self.im.sub(&rhs.im, bits, RM), prec }
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: BigComplex) -> BigComplex {
        &self * &rhs
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec.min(rhs.prec);
        let bits = prec.bits();
        if self.im.is_zero() && rhs.im.is_zero() {
            return BigComplex { re: self.re.mul(&rhs.re, bits, RM), im: BigFloat::from_word(0, bits), prec };
        }
        let ac = self.re.mul(&rhs.re, bits, RM);
        let bd = self.im.mul(&rhs.im, bits, RM);
        let ad = self.re.mul(&rhs.im, bits, RM);
        let bc = self.im.mul(&rhs.re, bits, RM);
        BigComplex { re: ac.sub(&bd, bits, RM), im: ad.add(&bc, bits, RM), prec }
    }
}

impl Div for BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: BigComplex) -> BigComplex {
        &self / &rhs
    }
}

impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec.min(rhs.prec);
        let bits = prec.bits();
        if rhs.im.is_zero() {
            return BigComplex {
                re: self.re.div(&rhs.re, bits, RM),
                im: self.im.div(&rhs.re, bits, RM),
                prec,
            };
        }
        let den = rhs.norm_sqr();
        let ac = self.re.mul(&rhs.re, bits, RM);
        let bd = self.im.mul(&rhs.im, bits, RM);
        let bc = self.im.mul(&rhs.re, bits, RM);
        let ad = self.re.mul(&rhs.im, bits, RM);
        BigComplex {
            re: ac.add(&bd, bits, RM).div(&den, bits, RM),
            im: bc.sub(&ad, bits, RM).div(&den, bits, RM),
            prec,
        }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        self.clone().neg()
    }
}

impl PartialEq for BigComplex {
    /// Bitwise value equality at the stored mantissas (precision labels ignored).
    fn eq(&self, other: &Self) -> bool {
        self.re.cmp(&other.re) == Some(0) && self.im.cmp(&other.im) == Some(0)
    }
}

impl BigComplex {
    /// Relative distance `|a - b| / max(|a|, |b|)`, or the absolute distance when both vanish.
    pub fn rel_diff(&self, other: &BigComplex) -> f64 {
        let d = (self - other).abs_f64();
        let scale = self.abs_f64().max(other.abs_f64());
        if scale == 0.0 {
            d
        } else {
            d / scale
        }
    }

    /// Integer part of the real component as i64 (saturating), for bookkeeping.
    pub fn re_floor_i64(&self) -> Option<i64> {
        float_to_bigint(&self.re.floor()).and_then(|b| b.to_i64())
    }
}
