use super::ComplexPoly;
use crate::combinatorics::{c_coeff, terminating_unit};
use crate::error::{Error, Result};
use crate::numerics::{factorial, pochhammer, NumericsError, Precision, Scalar, ShiftedFamily};

/// `(c - b - m)_m`, the normalizer of Q; zero exactly when `c - b` is one of `1..=m`.
pub fn q_prefactor(b: &Scalar, c: &Scalar, family: &ShiftedFamily) -> Scalar {
    let m = family.m_total();
    pochhammer(&(&(c - b) - m as i64), m)
}

fn check_q(b: &Scalar, c: &Scalar, family: &ShiftedFamily) -> Result<Scalar> {
    let norm = q_prefactor(b, c, family);
    if norm.is_numerically_zero() {
        return Err(Error::DegenerateQ);
    }
    Ok(norm)
}

/// `Q(t) = (1/(c-b-m)_m) sum_k (b)_k C_{k,r} (t)_k (c-b-m-t)_{m-k}`, expanded in t.
pub fn build_q(b: &Scalar, c: &Scalar, family: &ShiftedFamily, prec: Precision) -> Result<ComplexPoly> {
    let norm = check_q(b, c, family)?;
    let m = family.m_total();
    let s0 = &(c - b) - m as i64;
    let mut q = ComplexPoly::constant(Scalar::zero(), prec);
    // rising[k] = (t)_k
    let mut rising = ComplexPoly::constant(Scalar::one(), prec);
    for k in 0..=m {
        if k > 0 {
            rising = rising.mul(&ComplexPoly::linear(Scalar::int(k as i64 - 1), prec));
        }
        let mut falling = ComplexPoly::constant(Scalar::one(), prec);
        for i in 0..m - k {
            falling = falling.mul(&ComplexPoly::new(vec![&s0 + i as i64, Scalar::int(-1)], prec));
        }
        let weight = pochhammer(b, k) * c_coeff(family, k)?;
        if weight.is_exact_zero() {
            continue;
        }
        q = q.add(&rising.mul(&falling).scale(&weight));
    }
    let inv = norm.recip().expect("nonzero normalizer");
    Ok(q.scale(&inv))
}

/// Pointwise value of Q through
/// `(c-b-t-m)_m/(c-b-m)_m sum_k F(-k, f+m; f) (t)_k (b)_k / ((1+t+b-c)_k k!)`.
pub fn build_q_alt(b: &Scalar, c: &Scalar, family: &ShiftedFamily, t: &Scalar) -> Result<Scalar> {
    let norm = check_q(b, c, family)?;
    let m = family.m_total();
    let d0 = &(&(b - c) + t) + 1;
    let mut sum = Scalar::zero();
    for k in 0..=m {
        let den = pochhammer(&d0, k) * factorial(k);
        if den.is_numerically_zero() {
            return Err(NumericsError::Pole(format!("(1+t+b-c)_{k} vanishes at t = {}", t.render(20))).into());
        }
        let num = terminating_unit(family, k) * pochhammer(t, k) * pochhammer(b, k);
        sum = sum + &num / &den;
    }
    let lead = pochhammer(&(&(&(c - b) - t) - m as i64), m);
    Ok(&(lead * sum) / &norm)
}

/// `R_{p-1}(a) = sum_k F(-k, f+m; f) (b)_k (a-k)_{p-1} / k!` as a polynomial in a.
pub fn build_r(b: &Scalar, p: usize, family: &ShiftedFamily, prec: Precision) -> Result<ComplexPoly> {
    if p == 0 {
        return Err(Error::pre("p must be positive"));
    }
    let m = family.m_total();
    let mut r = ComplexPoly::constant(Scalar::zero(), prec);
    for k in 0..=m {
        let weight = &(terminating_unit(family, k) * pochhammer(b, k)) / &factorial(k);
        if weight.is_exact_zero() {
            continue;
        }
        let mut poly = ComplexPoly::constant(Scalar::one(), prec);
        for i in 0..p - 1 {
            poly = poly.mul(&ComplexPoly::linear(Scalar::int(i as i64 - k as i64), prec));
        }
        r = r.add(&poly.scale(&weight));
    }
    Ok(r)
}
