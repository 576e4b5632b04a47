use num_bigint::BigInt;

use super::{NumericsError, Scalar};

/// Rising factorial `a(a+1)...(a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &Scalar, n: usize) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..n {
        let factor = a + i as i64;
        if factor.is_exact_zero() {
            return Scalar::zero();
        }
        acc = acc * factor;
    }
    acc
}

/// `(v_1)_n (v_2)_n ... (v_p)_n`.
pub fn pochhammer_vec(v: &[Scalar], n: usize) -> Scalar {
    v.iter().map(|a| pochhammer(a, n)).product()
}

/// `(v_1)_{n_1} ... (v_r)_{n_r}`.
pub fn pochhammer_multi(v: &[Scalar], n: &[usize]) -> Result<Scalar, NumericsError> {
    if v.len() != n.len() {
        return Err(NumericsError::LengthMismatch { values: v.len(), shifts: n.len() });
    }
    Ok(v.iter().zip(n).map(|(a, &k)| pochhammer(a, k)).product())
}

pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::from(1);
    for i in 2..=n {
        acc *= i;
    }
    Scalar::from_bigint(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        assert_eq!(pochhammer(&Scalar::ratio(7, 3), 0), Scalar::one());
        assert_eq!(pochhammer(&Scalar::int(3), 4), Scalar::int(360));
        assert_eq!(pochhammer(&Scalar::int(-2), 4), Scalar::zero());
        assert_eq!(pochhammer_vec(&[Scalar::int(2), Scalar::int(3)], 1), Scalar::int(6));
        assert_eq!(pochhammer_multi(&[Scalar::int(2)], &[2]).unwrap(), Scalar::int(6));
        assert_eq!(factorial(5), Scalar::int(120));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let err = pochhammer_multi(&[Scalar::int(2), Scalar::int(3)], &[1]).unwrap_err();
        assert_eq!(err, NumericsError::LengthMismatch { values: 2, shifts: 1 });
    }

    #[test]
    fn counterexample_family_product_is_finite_and_nonzero() {
        let f = [Scalar::ratio(21, 5), Scalar::ratio(-5, 3)];
        let v = pochhammer_multi(&f, &[7, 8]).unwrap();
        // Independent check: explicit double loop over the factors.
        let mut expect = Scalar::one();
        for (fi, mi) in f.iter().zip([7usize, 8]) {
            for j in 0..mi {
                expect = expect * (fi + j as i64);
            }
        }
        assert_eq!(v, expect);
        assert!(!v.is_zero());
    }

    proptest! {
        #[test]
        fn step_recurrence(num in -40i64..40, den in 1i64..12, n in 0usize..20) {
            let a = Scalar::ratio(num, den);
            prop_assert_eq!(pochhammer(&a, n + 1), pochhammer(&a, n) * (&a + n as i64));
        }
    }
}
