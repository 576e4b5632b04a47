//! Gamma function by Spouge's approximation, plus pole-safe gamma ratios.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use astro_float::{BigFloat, RoundingMode};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::complex::with_consts;
use super::{factorial, pochhammer, BigComplex, NumericsError, Precision, Scalar};

const RM: RoundingMode = RoundingMode::ToEven;

/// Largest integer offset reduced through a Pochhammer product instead of two gamma calls.
const MAX_PAIR_SHIFT: u64 = 4096;

struct SpougeTable {
    a: u64,
    prec: Precision,
    /// c_0 = sqrt(2 pi), then c_1 .. c_{a-1}.
    coeffs: Vec<BigFloat>,
}

fn spouge_table(prec: Precision) -> Arc<SpougeTable> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<SpougeTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("gamma cache").get(&prec.digits()) {
        return t.clone();
    }
    let table = Arc::new(build_table(prec));
    cache.lock().expect("gamma cache").entry(prec.digits()).or_insert(table).clone()
}

fn build_table(prec: Precision) -> SpougeTable {
    // Relative truncation error is below a^(-1/2) (2 pi)^(-(a+1/2)); each unit of `a`
    // buys log10(2 pi) ~ 0.798 digits. The coefficient sum cancels about as many digits
    // as it keeps, hence the doubled internal precision.
    let d = prec.digits() as f64;
    let a = (1.2531 * d).ceil() as u64 + 1;
    let work = prec.with_extra(prec.digits() + 10);
    let bits = work.bits();
    let coeffs = with_consts(|cc| {
        let two_pi = cc.pi(bits, RM).mul(&BigFloat::from_word(2, bits), bits, RM);
        let mut out = Vec::with_capacity(a as usize);
        out.push(two_pi.sqrt(bits, RM));
        let mut fact = BigFloat::from_word(1, bits); // (k-1)!
        let half = BigFloat::from_f64(0.5, bits);
        for k in 1..a {
            if k > 1 {
                fact = fact.mul(&BigFloat::from_u64(k - 1, bits), bits, RM);
            }
            let base = BigFloat::from_u64(a - k, bits);
            let expo = BigFloat::from_u64(k, bits).sub(&half, bits, RM);
            let pow = base.pow(&expo, bits, RM, cc);
            let e = BigFloat::from_u64(a - k, bits).exp(bits, RM, cc);
            let mut c = pow.mul(&e, bits, RM).div(&fact, bits, RM);
            if k % 2 == 0 {
                c = c.neg();
            }
            out.push(c);
        }
        out
    });
    SpougeTable { a, prec: work, coeffs }
}

/// Gamma(z+1) for Re z >= -1/2, at the table's working precision.
fn spouge_shifted(z: &BigComplex, table: &SpougeTable) -> BigComplex {
    let wp = table.prec;
    let z = z.with_prec(wp);
    let mut sum = BigComplex::from_real(table.coeffs[0].clone(), wp);
    for (k, c) in table.coeffs.iter().enumerate().skip(1) {
        let denom = &z + &BigComplex::from_i64(k as i64, wp);
        let term = BigComplex::from_real(c.clone(), wp) / denom;
        sum = sum + term;
    }
    let za = &z + &BigComplex::from_i64(table.a as i64, wp);
    let expo = &z + &BigComplex::from_f64(0.5, 0.0, wp);
    let ln_za = za.ln().expect("Re(z+a) > 0");
    let power = (ln_za * expo - za).exp();
    power * sum
}

/// Gamma(z) to the precision of `z`.
pub fn gamma(z: &BigComplex) -> Result<BigComplex, NumericsError> {
    let prec = z.prec();
    if let Some(n) = z.near_integer(prec.pole_tolerance()) {
        if !n.is_positive() {
            return Err(NumericsError::Pole(z.to_string_digits(20)));
        }
    }
    let table = spouge_table(prec);
    let wp = table.prec;
    let zw = z.with_prec(wp);
    let half = BigComplex::from_f64(0.5, 0.0, wp);
    let value = if zw.rel_lt_real(&half) {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z)), with Gamma(1-z) = Gamma((-z)+1).
        let pi = BigComplex::pi(wp);
        let s = (&pi * &zw).sin();
        let g = spouge_shifted(&(-&zw), &table);
        pi / (s * g)
    } else {
        let one = BigComplex::one(wp);
        spouge_shifted(&(&zw - &one), &table)
    };
    Ok(value.with_prec(prec))
}

/// Gamma of a scalar; exact for positive integers, a float at `prec` otherwise.
pub fn gamma_scalar(z: &Scalar, prec: Precision) -> Result<Scalar, NumericsError> {
    if let Scalar::Exact(r) = z {
        if let Some(n) = r.to_integer() {
            if !n.is_positive() {
                return Err(NumericsError::Pole(r.to_string()));
            }
            if let Some(n) = n.to_usize() {
                return Ok(factorial(n - 1));
            }
        }
    }
    let work = z.precision().map_or(prec, |p| p.min(prec));
    gamma(&z.to_complex(work)).map(Scalar::Float)
}

/// Integer `k` with `x - y = k`, exactly or within the pole tolerance for floats.
fn integer_offset(x: &Scalar, y: &Scalar) -> Option<i64> {
    let d = x - y;
    let k: BigInt = d.as_integer()?;
    let k = k.to_i64()?;
    (k.unsigned_abs() <= MAX_PAIR_SHIFT).then_some(k)
}

/// `prod Gamma(num_i) / prod Gamma(den_j)`.
///
/// Numerator/denominator pairs differing by an integer are reduced to
/// Pochhammer products before anything else, so `Gamma(x+k)/Gamma(x)` is
/// finite (and exact for rational `x`) even when `x` is a pole.
pub fn gamma_ratio(num: &[Scalar], den: &[Scalar], prec: Precision) -> Result<Scalar, NumericsError> {
    let mut num_used = vec![false; num.len()];
    let mut acc = Scalar::one();
    let mut rest_den = Vec::new();
    for d in den {
        let best = num
            .iter()
            .enumerate()
            .filter(|(i, _)| !num_used[*i])
            .filter_map(|(i, n)| integer_offset(n, d).map(|k| (i, k)))
            .min_by_key(|&(_, k)| k.unsigned_abs());
        match best {
            Some((i, k)) => {
                num_used[i] = true;
                if k >= 0 {
                    // Gamma(d + k) / Gamma(d) = (d)_k
                    acc = acc * pochhammer(d, k as usize);
                } else {
                    // Gamma(n) / Gamma(n + |k|) = 1 / (n)_|k|
                    let p = pochhammer(&num[i], k.unsigned_abs() as usize);
                    if p.is_numerically_zero() {
                        return Err(NumericsError::Pole(format!("{} in a denominator", num[i].render(20))));
                    }
                    acc = &acc / &p;
                }
            }
            None => rest_den.push(d),
        }
    }
    for (i, n) in num.iter().enumerate() {
        if !num_used[i] {
            acc = acc * gamma_scalar(n, prec)?;
        }
    }
    for d in rest_den {
        let g = gamma_scalar(d, prec)?;
        acc = &acc / &g;
    }
    Ok(acc)
}

impl BigComplex {
    /// `Re(self) < Re(other)`.
    fn rel_lt_real(&self, other: &BigComplex) -> bool {
        (self - other).re().is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p50() -> Precision {
        Precision::new(50).unwrap()
    }

    /// sqrt(pi) from Machin's arctangent series and Newton's square root, in exact rationals.
    fn sqrt_pi_reference(digits: u32) -> BigComplex {
        use num_rational::BigRational;
        let scale = BigInt::from(10).pow(digits + 10);
        let atan_inv = |x: i64| {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let mut power = scale.clone() / &x;
            let mut sum = BigInt::from(0);
            let mut n = 0u32;
            while power != BigInt::from(0) {
                let term = &power / BigInt::from(2 * n + 1);
                if n.is_multiple_of(2) {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &x2;
                n += 1;
            }
            sum
        };
        let pi_scaled = BigInt::from(4) * (BigInt::from(4) * atan_inv(5) - atan_inv(239));
        let target = pi_scaled * &scale;
        let mut x: BigInt = &scale * 2;
        loop {
            let next: BigInt = (&x + &target / &x) / 2;
            if next >= x {
                break;
            }
            x = next;
        }
        let r = BigRational::new(x, scale);
        BigComplex::from_rational(&r.into(), Precision::new(digits).unwrap())
    }

    #[test]
    fn integer_points() {
        let p = p50();
        let g1 = gamma(&BigComplex::from_i64(1, p)).unwrap();
        assert!(g1.rel_diff(&BigComplex::one(p)) < 1e-48);
        let g5 = gamma(&BigComplex::from_i64(5, p)).unwrap();
        assert!(g5.rel_diff(&BigComplex::from_i64(24, p)) < 1e-48);
        assert_eq!(gamma_scalar(&Scalar::int(5), p).unwrap(), Scalar::int(24));
    }

    #[test]
    fn half_is_sqrt_pi() {
        for digits in [30, 50, 100] {
            let p = Precision::new(digits).unwrap();
            let g = gamma(&BigComplex::from_f64(0.5, 0.0, p)).unwrap();
            let reference = sqrt_pi_reference(digits);
            let err = g.rel_diff(&reference);
            assert!(err < 10f64.powi(1 - digits as i32), "digits {digits}: {err:e}");
        }
    }

    #[test]
    fn negative_half_uses_reflection() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let p = p50();
        let g = gamma(&BigComplex::from_f64(-0.5, 0.0, p)).unwrap();
        let expect = sqrt_pi_reference(50).scale_i64(-2);
        assert!(g.rel_diff(&expect) < 1e-48);
    }

    #[test]
    fn poles() {
        let p = p50();
        assert!(gamma(&BigComplex::from_i64(0, p)).is_err());
        assert!(gamma(&BigComplex::from_i64(-3, p)).is_err());
        assert!(gamma(&BigComplex::from_f64(-3.0 + 1e-40, 0.0, p)).is_err());
        assert!(gamma(&BigComplex::from_f64(-3.0 + 1e-10, 0.0, p)).is_ok());
        assert!(gamma_scalar(&Scalar::int(0), p).is_err());
    }

    #[test]
    fn ratio_examples() {
        let p = p50();
        // 1/(2)_3
        let r = gamma_ratio(&[Scalar::int(2)], &[Scalar::int(5)], p).unwrap();
        assert_eq!(r, Scalar::ratio(1, 24));
        let r = gamma_ratio(&[Scalar::int(4), Scalar::int(3)], &[Scalar::int(5), Scalar::int(2)], p).unwrap();
        assert_eq!(r, Scalar::ratio(1, 2));
        assert!(gamma_ratio(&[Scalar::int(0)], &[], p).is_err());
        // Gamma(-2 + 3)/Gamma(-2) = (-2)_3 = 0, although Gamma(-2) is a pole.
        let r = gamma_ratio(&[Scalar::int(1)], &[Scalar::int(-2)], p).unwrap();
        assert_eq!(r, Scalar::zero());
        // Gamma(-3)/Gamma(-1) = 1/(-3)_2 stays finite; Gamma(-1)/Gamma(2) = 1/(-1)_3 does not.
        assert_eq!(gamma_ratio(&[Scalar::int(-3)], &[Scalar::int(-1)], p).unwrap(), Scalar::ratio(1, 6));
        assert!(gamma_ratio(&[Scalar::int(-1)], &[Scalar::int(2)], p).is_err());
        // Rational pair: Gamma(7/3)/Gamma(1/3) = (1/3)(4/3)
        let r = gamma_ratio(&[Scalar::ratio(7, 3)], &[Scalar::ratio(1, 3)], p).unwrap();
        assert_eq!(r, Scalar::ratio(4, 9));
    }

    #[test]
    fn complex_argument_recurrence() {
        let p = p50();
        let z = BigComplex::from_f64(0.75, 2.5, p);
        let lhs = gamma(&(&z + &BigComplex::one(p))).unwrap();
        let rhs = &z * &gamma(&z).unwrap();
        assert!(lhs.rel_diff(&rhs) < 1e-48);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn recurrence(x in 0.01f64..10.0, y in -3.0f64..3.0) {
            let p = p50();
            let z = BigComplex::from_f64(x, y, p);
            let lhs = gamma(&(&z + &BigComplex::one(p))).unwrap();
            let rhs = &z * &gamma(&z).unwrap();
            prop_assert!(lhs.rel_diff(&rhs) < 1e-48);
        }

        #[test]
        fn reflection(x in 0.001f64..0.999) {
            let p = p50();
            let z = BigComplex::from_f64(x, 0.0, p);
            let one = BigComplex::one(p);
            let pi = BigComplex::pi(p);
            let v = gamma(&z).unwrap() * gamma(&(&one - &z)).unwrap() * (&pi * &z).sin() / pi;
            prop_assert!(v.rel_diff(&one) < 1e-48);
        }

        #[test]
        fn paired_ratio_matches_naive(num in 1i64..60, den in 1i64..9, k in 0usize..6) {
            let p = p50();
            let x = Scalar::ratio(num, den);
            let y = &x + k as i64;
            let paired = gamma_ratio(std::slice::from_ref(&y), std::slice::from_ref(&x), p).unwrap();
            let naive = &gamma_scalar(&y.to_float(p), p).unwrap() / &gamma_scalar(&x.to_float(p), p).unwrap();
            prop_assert!(paired.rel_diff(&naive) < 1e-46);
        }
    }
}
