//! Transformations built on the characteristic polynomial Q, and the
//! recurrence in the negative integer difference.

use serde::{Deserialize, Serialize};

use super::report::{Side, GAMMA_ULPS};
use super::summation::{abc_series, karlsson_closed, multi_closed_for_chain};
use super::{admissible, nonzero, require, series, with_family, IdentityReport};
use crate::error::{Error, Result};
use crate::numerics::{gamma_ratio, pochhammer, Precision, Scalar, ShiftedFamily};
use crate::polynomials::{build_q, roots, ComplexPoly};
use crate::series::{HypParams, PairFactor};

/// How the parameter pairs `(x_i + 1; x_i)` built from the zeros of Q enter a series.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaRoute {
    /// Pair factor for exact Q, individual roots otherwise.
    #[default]
    Auto,
    /// Roots found numerically (or exactly when rational); the product is rebuilt from them.
    Roots,
    /// The symmetric product `prod (x_i + n)/x_i` read off Q without root finding.
    PairFactor,
}

impl ZetaRoute {
    fn resolve(self, q: &ComplexPoly) -> ZetaRoute {
        match self {
            ZetaRoute::Auto if q.is_exact() => ZetaRoute::PairFactor,
            ZetaRoute::Auto => ZetaRoute::Roots,
            other => other,
        }
    }
}

/// Attaches the pairs `(x_i + 1; x_i)` to `params` as one pair factor, where `x_i = zeta_i - t0`
/// (`sign = -1`) or `x_i = t0 - zeta_i` (`sign = +1`); in both cases
/// `prod (x_i + n)/x_i = Q(t0 + sign n)/Q(t0)`.
fn attach_pairs(
    params: HypParams,
    q: &ComplexPoly,
    t0: &Scalar,
    sign: i64,
    route: ZetaRoute,
    prec: Precision,
) -> Result<HypParams> {
    nonzero(&q.eval(t0), "a parameter built from the zeros of Q")?;
    match route.resolve(q) {
        ZetaRoute::PairFactor => {
            let p = q.compose_linear(t0, sign);
            Ok(params.with_pair_factor(PairFactor::new(p.coeffs().to_vec())?))
        }
        _ => {
            // Pairs (x+1; x) contribute prod (x + n) / x, rebuilt from the zeros.
            let neg_x: Vec<Scalar> =
                roots(q, prec)?.roots().iter().map(|z| if sign < 0 { t0 - z } else { z - t0 }).collect();
            let p = ComplexPoly::from_roots(&neg_x, Scalar::one(), prec);
            Ok(params.with_pair_factor(PairFactor::new(p.coeffs().to_vec())?))
        }
    }
}

/// `prod (zeta_i - t0) / zeta_i` by the chosen route; equals `Q(t0)`.
fn zeta_ratio(q: &ComplexPoly, t0: &Scalar, route: ZetaRoute, prec: Precision) -> Result<Side> {
    match route.resolve(q) {
        ZetaRoute::PairFactor => Ok(Side::closed(q.eval(t0), (2 * q.degree() + 1) as f64)),
        _ => {
            let z = roots(q, prec)?;
            let mut v = Scalar::one();
            for r in z.roots() {
                v = &(v * (r - t0)) / r;
            }
            Ok(Side::closed(v, (4 * z.len() + 1) as f64 + z.residual() / prec.epsilon()))
        }
    }
}

fn c_minus_b_minus_m(b: &Scalar, c: &Scalar, family: &ShiftedFamily) -> Scalar {
    &(c - b) - family.m_total() as i64
}

/// The first Miller–Paris transformation at argument `x`.
pub fn mp_transform(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    family: &ShiftedFamily,
    x: &Scalar,
    prec: Precision,
) -> Result<IdentityReport> {
    mp_transform_with(a, b, c, family, x, prec, ZetaRoute::Auto)
}

pub fn mp_transform_with(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    family: &ShiftedFamily,
    x: &Scalar,
    prec: Precision,
    route: ZetaRoute,
) -> Result<IdentityReport> {
    require(x.abs_f64() < 0.5, || format!("|x| = {} is not below 1/2", x.abs_f64()))?;
    require(!c.is_nonpositive_integer(), || "c is a nonpositive integer".into())?;
    let q = build_q(b, c, family, prec)?;
    let lhs_params = with_family(vec![a.clone(), b.clone()], vec![c.clone()], family, x.clone());
    let y = &(x / &(x - 1));
    let base = HypParams::new(vec![a.clone(), c_minus_b_minus_m(b, c, family)], vec![c.clone()], y.clone());
    let rhs_params = attach_pairs(base, &q, &Scalar::zero(), -1, route, prec)?;
    admissible(&[&lhs_params, &rhs_params])?;
    let power = (1 - x.clone()).pow(&-a, prec).ok_or_else(|| Error::pre("(1-x)^(-a) undefined"))?;
    let rhs = series(&rhs_params, prec)?.mul(&Side::closed(power, GAMMA_ULPS));
    let lhs = series(&lhs_params, prec)?;
    Ok(IdentityReport::new("mp_transform", lhs, rhs, prec))
}

/// `F(a,b,f+m;c,f) = Gamma(c)Gamma(c-a-b-m)/(Gamma(c-a)Gamma(c-b-m)) Q(a)`.
pub fn q_summation(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    family: &ShiftedFamily,
    prec: Precision,
) -> Result<IdentityReport> {
    let s0 = c_minus_b_minus_m(b, c, family);
    let excess = &s0 - a;
    require(excess.re_positive(), || format!("Re(c-a-b-m) = {} is not positive", excess.render(12)))?;
    let q = build_q(b, c, family, prec)?;
    let params = abc_series(a, b, c, family);
    admissible(&[&params])?;
    let g = gamma_ratio(&[c.clone(), excess.clone()], &[c - a, s0], prec)?;
    let rhs = Side::closed(g, 4.0 * GAMMA_ULPS).mul(&Side::closed(q.eval(a), (2 * q.degree() + 1) as f64));
    let lhs = series(&params, prec)?;
    Ok(IdentityReport::new("q_summation", lhs, rhs, prec))
}

/// `z^b F(1-c+b, 1-f+b; 1-f-m+b; z) = K (1-z)^(c-b-m-1) F(-b-m, 1-zeta*+c-b-m; -zeta*+c-b-m; 1-z)`,
/// with `zeta*` the zeros of `Q(b+1, c+1, f+1, m; t)`.
pub fn g_identity(
    b: &Scalar,
    c: &Scalar,
    family: &ShiftedFamily,
    z: &Scalar,
    prec: Precision,
) -> Result<IdentityReport> {
    g_identity_with(b, c, family, z, prec, ZetaRoute::Auto)
}

pub fn g_identity_with(
    b: &Scalar,
    c: &Scalar,
    family: &ShiftedFamily,
    z: &Scalar,
    prec: Precision,
    route: ZetaRoute,
) -> Result<IdentityReport> {
    require(z.im_f64() == 0.0 && z.re_f64() > 0.0 && z.re_f64() < 1.0, || {
        format!("z = {} is not in (0, 1)", z.render(12))
    })?;
    for fj in family.f() {
        nonzero(&(b - fj), "b - f_j")?;
    }
    let m = family.m_total();
    let s0 = c_minus_b_minus_m(b, c, family);
    let norm = pochhammer(&s0, m);
    if norm.is_numerically_zero() {
        return Err(Error::DegenerateQ);
    }
    let qs = build_q(&(b + 1), &(c + 1), &family.shifted(&Scalar::one())?, prec)?;

    let mut lhs_top = vec![&(b - c) + 1];
    lhs_top.extend(family.f().iter().map(|fi| &(b - fi) + 1));
    let lhs_bottom: Vec<Scalar> = family.f_plus_m().iter().map(|fm| &(b - fm) + 1).collect();
    for v in &lhs_bottom {
        require(!v.is_nonpositive_integer(), || {
            format!("bottom parameter {} is a nonpositive integer", v.render(12))
        })?;
    }
    let lhs_params = HypParams::new(lhs_top, lhs_bottom, z.clone());
    let base = HypParams::new(vec![-(b + m as i64)], vec![], 1 - z.clone());
    let rhs_params = attach_pairs(base, &qs, &s0, 1, route, prec)?;
    admissible(&[&lhs_params, &rhs_params])?;

    let zb = z.pow(b, prec).ok_or_else(|| Error::pre("z^b undefined"))?;
    let lhs = series(&lhs_params, prec)?.mul(&Side::closed(zb, GAMMA_ULPS));

    let f1 = family.poch_shifted(&Scalar::one());
    let k_rest = &(norm * f1) / &(pochhammer(&(b + 1), m) * family.poch_shifted(&-b));
    let k = zeta_ratio(&qs, &s0, route, prec)?.mul(&Side::closed(k_rest, (8 * m + 4) as f64));
    let power =
        (1 - z.clone()).pow(&(&s0 - 1), prec).ok_or_else(|| Error::pre("(1-z)^(c-b-m-1) undefined"))?;
    let rhs = series(&rhs_params, prec)?.mul(&k).mul(&Side::closed(power, GAMMA_ULPS));
    Ok(IdentityReport::new("g_identity", lhs, rhs, prec))
}

/// `F(d, b+a, f+m+a; c+a, f+a) = Gamma(c+a)Gamma(b)(f)_m/(Gamma(c)Gamma(b+a)(f+a)_m)
///  F(d, b, f+m; c, f) F(-a, c-b-m-d, zeta-d+1; c-d, zeta-d)`.
pub fn product_identity(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    d: &Scalar,
    family: &ShiftedFamily,
    prec: Precision,
) -> Result<IdentityReport> {
    product_identity_with(a, b, c, d, family, prec, ZetaRoute::Auto)
}

pub fn product_identity_with(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    d: &Scalar,
    family: &ShiftedFamily,
    prec: Precision,
    route: ZetaRoute,
) -> Result<IdentityReport> {
    let s0 = c_minus_b_minus_m(b, c, family);
    let excess = &s0 - d;
    require(excess.re_positive(), || format!("Re(c-d-b-m) = {} is not positive", excess.render(12)))?;
    require((a + b).re_positive(), || format!("Re(a+b) = {} is not positive", (a + b).render(12)))?;
    let q = build_q(b, c, family, prec)?;
    let shifted = family.shifted(a)?;
    let lhs_params = abc_series(d, &(b + a), &(c + a), &shifted);
    let mid_params = abc_series(d, b, c, family);
    let base = HypParams::unit(vec![-a, excess.clone()], vec![c - d]);
    let third_params = attach_pairs(base, &q, d, -1, route, prec)?;
    admissible(&[&lhs_params, &mid_params, &third_params])?;

    let g = gamma_ratio(&[c + a, b.clone()], &[c.clone(), b + a], prec)?;
    let pre = &(g * family.poch_f()) / &shifted.poch_f();
    let pre = Side::closed(pre, 4.0 * GAMMA_ULPS + (4 * family.m_total()) as f64);
    let rhs = pre.mul(&series(&mid_params, prec)?).mul(&series(&third_params, prec)?);
    let lhs = series(&lhs_params, prec)?;
    Ok(IdentityReport::new("product_identity", lhs, rhs, prec))
}

/// Coefficients `(b+p-1)(p-a-1)/((p-1)(b+p-a-1))` and `ab/((p-1)(b+p-a-1))`.
fn recurrence_coeffs(a: &Scalar, b: &Scalar, p: usize) -> Result<(Scalar, Scalar)> {
    let den = &(&(b - a) + (p as i64 - 1)) * (p as i64 - 1);
    nonzero(&den, "(p-1)(b+p-a-1)")?;
    let c1 = &((b + (p as i64 - 1)) * (p as i64 - 1 - a.clone())) / &den;
    let c2 = &(a * b) / &den;
    Ok((c1, c2))
}

fn level_series(a: &Scalar, b: &Scalar, p: usize, family: &ShiftedFamily) -> HypParams {
    abc_series(a, b, &(b + p as i64), family)
}

/// One step of the recurrence from `F(a, b, f+m; b+p, f)` to level `p - 1`.
pub fn recurrence_step(
    a: &Scalar,
    b: &Scalar,
    p: usize,
    family: &ShiftedFamily,
    prec: Precision,
) -> Result<IdentityReport> {
    require(p >= 2, || "p must be at least 2".into())?;
    let excess = &(p as i64 - 2 - a.clone()) - family.m_total() as i64;
    require(excess.re_positive(), || format!("Re(p-a-m-2) = {} is not positive", excess.render(12)))?;
    let (c1, c2) = recurrence_coeffs(a, b, p)?;
    let shifted = family.shifted(&Scalar::one())?;
    let (a1, b1) = (a + 1, b + 1);
    let lhs_params = level_series(a, b, p, family);
    let f1 = abc_series(a, b, &(b + (p as i64 - 1)), family);
    let f2 = level_series(&a1, &b1, p - 1, family);
    let f3 = level_series(&a1, &b1, p - 1, &shifted);
    admissible(&[&lhs_params, &f1, &f2, &f3])?;
    let s1 = series(&f1, prec)?;
    let s2 = series(&f2, prec)?;
    let s3 = series(&f3, prec)?;
    let rhs = s1.scale(&c1).add(&s2.sub(&s3.scale(&family.unit_ratio())).scale(&c2));
    let lhs = series(&lhs_params, prec)?;
    Ok(IdentityReport::new("recurrence_step", lhs, rhs, prec))
}

fn chain(a: &Scalar, b: &Scalar, p: usize, family: &ShiftedFamily, prec: Precision) -> Result<Side> {
    if p == 1 {
        return karlsson_closed(a, b, family, prec);
    }
    let (c1, c2) = recurrence_coeffs(a, b, p)?;
    let (a1, b1) = (a + 1, b + 1);
    let shifted = family.shifted(&Scalar::one())?;
    let t1 = chain(a, b, p - 1, family, prec)?;
    let t2 = chain(&a1, &b1, p - 1, family, prec)?;
    let t3 = chain(&a1, &b1, p - 1, &shifted, prec)?;
    Ok(t1.scale(&c1).add(&t2.sub(&t3.scale(&family.unit_ratio())).scale(&c2)))
}

/// The recurrence applied from level `p` down to 1, closed by Karlsson's
/// formula, against the closed form of the multi-parameter extension.
pub fn recurrence_chain(
    a: &Scalar,
    b: &Scalar,
    p: usize,
    family: &ShiftedFamily,
    prec: Precision,
) -> Result<IdentityReport> {
    require(p >= 1, || "p must be positive".into())?;
    let rhs = multi_closed_for_chain(a, b, p, family, prec)?;
    let lhs = chain(a, b, p, family, prec)?;
    Ok(IdentityReport::new("recurrence_chain", lhs, rhs, prec))
}
