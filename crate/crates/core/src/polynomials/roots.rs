use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::ComplexPoly;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, ExactRational, Precision, Scalar};

pub const MAX_ITERATIONS: usize = 500;
/// Largest denominator tried when snapping a numerical root to a rational.
const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaSource {
    /// Every root is rational and was confirmed by exact deflation.
    Rational,
    /// At least one root is only known numerically.
    Numerical,
}

/// Roots of a characteristic polynomial, with multiplicity.
#[derive(Clone, Debug)]
pub struct ZetaVector {
    roots: Vec<Scalar>,
    source: ZetaSource,
    residual: f64,
}

impl ZetaVector {
    pub fn roots(&self) -> &[Scalar] {
        &self.roots
    }

    pub fn source(&self) -> ZetaSource {
        self.source
    }

    /// Largest backward residual `|P(z)| / sum |c_j| |z|^j` over the numerical roots.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// All finite roots of `poly`.
///
/// A float polynomial whose leading coefficients are negligible relative to
/// the rest is treated as having lower degree (roots escaping to infinity).
/// Rational roots of exact polynomials are recovered exactly; the rest are
/// found with the Aberth–Ehrlich iteration at `prec + 20` digits.
pub fn roots(poly: &ComplexPoly, prec: Precision) -> Result<ZetaVector> {
    let mut work = effective(poly);
    let mut found = Vec::new();
    if work.is_exact() {
        loop {
            if work.degree() == 0 {
                break;
            }
            let approx = aberth(&work, prec)?;
            let mut progressed = false;
            for z in &approx.0 {
                let Some(r) = snap(z) else { continue };
                let r = Scalar::Exact(r);
                if let Some(q) = work.divide_root(&r) {
                    work = q;
                    found.push(r);
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                break;
            }
        }
    }
    let mut residual: f64 = 0.0;
    let source = if work.degree() == 0 {
        ZetaSource::Rational
    } else {
        let (zs, res) = aberth(&work, prec)?;
        residual = res;
        found.extend(zs.into_iter().map(|z| Scalar::Float(z.with_prec(prec))));
        ZetaSource::Numerical
    };
    found.sort_by(|a, b| a.re_f64().total_cmp(&b.re_f64()).then(a.im_f64().total_cmp(&b.im_f64())));
    Ok(ZetaVector { roots: found, source, residual })
}

fn effective(poly: &ComplexPoly) -> ComplexPoly {
    if poly.is_exact() {
        return poly.clone();
    }
    let tol = poly.prec().pole_tolerance();
    let scale = poly.coeffs().iter().map(Scalar::abs_f64).fold(0.0, f64::max);
    let mut c = poly.coeffs().to_vec();
    while c.len() > 1 && c.last().expect("nonempty").abs_f64() <= tol * scale {
        c.pop();
    }
    ComplexPoly::new(c, poly.prec())
}

fn snap(z: &BigComplex) -> Option<ExactRational> {
    let (re, im) = (z.re_f64(), z.im_f64());
    if !re.is_finite() || im.abs() > 1e-9 * re.abs().max(1.0) || re.abs() > 1e12 {
        return None;
    }
    // Continued-fraction convergents of re.
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut x = re;
    for _ in 0..40 {
        let a = x.floor();
        let ai = a.to_i64()?;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - re).abs() <= 1e-12 * re.abs().max(1.0) {
            return Some(ExactRational::new(h1, k1));
        }
        let frac = x - a;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    None
}

/// Simultaneous Aberth–Ehrlich iteration; returns the roots and the backward residual.
fn aberth(poly: &ComplexPoly, prec: Precision) -> Result<(Vec<BigComplex>, f64)> {
    let d = poly.degree();
    if d == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let wp = prec.with_extra(20);
    let lead = poly.leading().to_complex(wp);
    let c: Vec<BigComplex> = poly.coeffs().iter().map(|x| &x.to_complex(wp) / &lead).collect();
    let dc: Vec<BigComplex> = (1..=d).map(|j| c[j].scale_i64(j as i64)).collect();
    let horner = |cs: &[BigComplex], z: &BigComplex| {
        cs.iter().rev().fold(BigComplex::zero(wp), |acc, x| &(&acc * z) + x)
    };

    let a0 = c[0].abs_f64();
    let radius = if a0 > 0.0 { a0.powf(1.0 / d as f64) } else { 1.0 };
    let mut z: Vec<BigComplex> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            BigComplex::from_f64(radius * theta.cos(), radius * theta.sin(), wp)
        })
        .collect();

    let stop = 10f64.powi(-(wp.digits() as i32) + 2);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut largest: f64 = 0.0;
        for k in 0..d {
            let p = horner(&c, &z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = &p / &horner(&dc, &z[k]);
            let mut s = BigComplex::zero(wp);
            for j in 0..d {
                if j != k {
                    s = s + (&z[k] - &z[j]).recip();
                }
            }
            let w = &ratio / &(BigComplex::one(wp) - &ratio * &s);
            if !w.is_finite() {
                continue;
            }
            largest = largest.max(w.abs_f64() / z[k].abs_f64().max(1e-300));
            z[k] = &z[k] - &w;
        }
        if largest <= stop {
            break;
        }
    }

    let mut residual: f64 = 0.0;
    for zk in &z {
        let p = horner(&c, zk).abs_f64();
        let scale: f64 = c.iter().enumerate().map(|(j, cj)| cj.abs_f64() * zk.abs_f64().powi(j as i32)).sum();
        residual = residual.max(p / scale);
    }
    let bound = 10f64.powi(-((prec.digits() / 2) as i32));
    if !(residual <= bound) {
        return Err(Error::RootFindingFailure { residual, iterations });
    }
    Ok((z, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Precision {
        Precision::new(40).unwrap()
    }

    #[test]
    fn rational_roots_recovered_exactly() {
        let rs = [Scalar::ratio(4, 1), Scalar::ratio(-3, 7), Scalar::ratio(-3, 7), Scalar::ratio(11, 5)];
        let poly = ComplexPoly::from_roots(&rs, Scalar::ratio(2, 3), p());
        let z = roots(&poly, p()).unwrap();
        assert_eq!(z.source(), ZetaSource::Rational);
        let mut expect = rs.to_vec();
        expect.sort_by(|a, b| a.re_f64().total_cmp(&b.re_f64()));
        assert_eq!(z.roots(), expect.as_slice());
    }

    #[test]
    fn irrational_roots_numerical() {
        // t^2 - 2 and t^2 + 1 times (t - 1/2)
        let poly = ComplexPoly::new(vec![Scalar::int(-2), Scalar::zero(), Scalar::one()], p())
            .mul(&ComplexPoly::new(vec![Scalar::one(), Scalar::zero(), Scalar::one()], p()))
            .mul(&ComplexPoly::new(vec![Scalar::ratio(-1, 2), Scalar::one()], p()));
        let z = roots(&poly, p()).unwrap();
        assert_eq!(z.source(), ZetaSource::Numerical);
        assert_eq!(z.len(), 5);
        assert!(z.roots().contains(&Scalar::ratio(1, 2)));
        for r in z.roots() {
            assert!(poly.eval(r).abs_f64() < 1e-35, "{}", r.render(20));
        }
    }

    #[test]
    fn negligible_leading_coefficient_lowers_degree() {
        let prec = p();
        let tiny = Scalar::float_f64(1e-60, 0.0, prec);
        let poly =
            ComplexPoly::new(vec![Scalar::int(-3).to_float(prec), Scalar::one().to_float(prec), tiny], prec);
        let z = roots(&poly, prec).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z.roots()[0].rel_diff(&Scalar::int(3)) < 1e-35);
    }

    #[test]
    fn constant_has_no_roots() {
        let z = roots(&ComplexPoly::constant(Scalar::int(5), p()), p()).unwrap();
        assert!(z.is_empty());
        assert_eq!(z.source(), ZetaSource::Rational);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn re_expansion_reproduces_coefficients(
            coeffs in prop::collection::vec((-30i64..30, 1i64..8), 2..=7)
        ) {
            let mut c: Vec<Scalar> = coeffs.iter().map(|&(a, b)| Scalar::ratio(a, b)).collect();
            c[0] = Scalar::one();
            let poly = ComplexPoly::new(c, p());
            prop_assume!(poly.degree() >= 1);
            let z = roots(&poly, p()).unwrap();
            prop_assert_eq!(z.len(), poly.degree());
            let back = ComplexPoly::from_roots(z.roots(), poly.leading().clone(), p());
            for (x, y) in back.coeffs().iter().zip(poly.coeffs()) {
                prop_assert!((x - y).abs_f64() < 1e-30 * (1.0 + y.abs_f64()), "{} vs {}", x.render(20), y.render(20));
            }
        }
    }
}
