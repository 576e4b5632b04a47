//! Unit-argument acceleration.
//!
//! The partial sums of a pFq series at x = 1 converge like `n^{-s}`, which
//! the epsilon algorithm cannot speed up when applied to consecutive partial
//! sums. Levin's u-transform handles this logarithmic convergence; epsilon
//! is applied instead to the geometric subsequence `S_{N 2^j}`, on which the
//! error behaves like a sum of geometric sequences.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{eval_series_with, HypParams, Method, SeriesResult, TermStream, MAX_COLUMNS, MAX_TERMS};
use crate::combinatorics::stirling2_row;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, ExactRational, Precision, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accelerator {
    LevinU,
    WynnGeometric,
}

/// Minimum number of Levin columns before stabilization is trusted.
const MIN_COLUMNS: usize = 6;
/// Extra digits carried by the pieces of a pair-factor series.
const PAIR_GUARD: u32 = 10;
/// Separation of the two Levin starting points.
const OFFSET_STEP: usize = 8;
/// Largest transient skipped before extrapolating.
const MAX_OFFSET: usize = 192;
/// Offset of the geometric subsequence.
const GEOMETRIC_BASE: usize = 8;

pub(crate) fn eval_unit(params: &HypParams, prec: Precision, accel: Accelerator) -> Result<SeriesResult> {
    if !params.pair_factors.is_empty() {
        return eval_unit_pairs(params, prec, accel);
    }
    let r = match accel {
        Accelerator::LevinU => levin_u_series(params, prec)?,
        Accelerator::WynnGeometric => wynn_geometric_series(params, prec)?,
    };
    Ok(r)
}

/// Unit-argument series with pair factors, summed as
/// `sum_j e_j prod (a)_j / prod (b)_j F(a + j; b + j; 1)`, where `e_j` are the
/// coefficients of `P(n)/P(0)` in the falling factorials `n (n-1) ... (n-j+1)`.
///
/// Summing `P(n) u_n` term by term fails when a zero of `P` lies far out: the
/// terms only settle into their asymptotic form beyond it. The pieces have no
/// such transient and their excesses are at least that of the whole series.
fn eval_unit_pairs(params: &HypParams, prec: Precision, accel: Accelerator) -> Result<SeriesResult> {
    let wp = prec.with_extra(PAIR_GUARD);
    let mut poly = vec![Scalar::one()];
    for pf in &params.pair_factors {
        let c0 = pf.coeffs()[0].to_float(wp);
        let c: Vec<Scalar> = pf.coeffs().iter().map(|c| &c.to_float(wp) / &c0).collect();
        let mut next = vec![Scalar::zero(); poly.len() + c.len() - 1];
        for (i, p) in poly.iter().enumerate() {
            for (j, q) in c.iter().enumerate() {
                next[i + j] = &next[i + j] + &(p * q);
            }
        }
        poly = next;
    }
    let d = poly.len() - 1;
    let rows: Vec<Vec<BigInt>> = (0..=d).map(stirling2_row).collect();
    let top: Vec<Scalar> = params.top.iter().map(|a| a.to_float(wp)).collect();
    let bottom: Vec<Scalar> = params.bottom.iter().map(|b| b.to_float(wp)).collect();
    let x = params.x.to_float(wp);

    let mut value = Scalar::zero().to_float(wp);
    let mut err = 0.0;
    let mut magnitude = 0.0;
    let mut ratio = Scalar::one().to_float(wp);
    let mut terms_used = 0;
    for j in 0..=d {
        if j > 0 {
            for a in &top {
                ratio = ratio * (a + (j as i64 - 1));
            }
            for b in &bottom {
                ratio = &ratio / &(b + (j as i64 - 1));
            }
            ratio = ratio * &x;
        }
        let e: Scalar = (j..=d).map(|i| &poly[i] * &Scalar::from_bigint(rows[i][j].clone())).sum();
        let coef = &e * &ratio;
        if coef.is_zero() {
            continue;
        }
        let piece = HypParams::new(
            params.top.iter().map(|a| a + j as i64).collect(),
            params.bottom.iter().map(|b| b + j as i64).collect(),
            params.x.clone(),
        );
        let r = eval_series_with(&piece, prec.with_extra(PAIR_GUARD), accel)?;
        let term = &coef * &r.value;
        err += coef.abs_f64() * r.est_error;
        magnitude += term.abs_f64();
        value = value + term;
        terms_used += r.terms_used;
    }
    err += magnitude * wp.epsilon() * (d as f64 + 2.0);
    Ok(SeriesResult {
        value: value.to_float(prec),
        est_error: err,
        terms_used,
        method: Method::AcceleratedUnit,
    })
}

fn levin_u_series(params: &HypParams, prec: Precision) -> Result<SeriesResult> {
    let d = prec.digits();
    let tol = 10f64.powi(-(d as i32) - 5);
    let n0 = transient_offset(params);
    // High-order columns cancel many digits; large parameters need many
    // columns, so the working precision is raised when extrapolation stalls.
    let mut last_err = None;
    for extra in [d + 30, 2 * d + 100, 4 * d + 200] {
        let wp = prec.with_extra(extra);
        // Two starting points past the transient; a false stabilization
        // shows up as a disagreement between them.
        let run = |start| levin_u_from(TermStream::new(params, wp), start, tol, MAX_COLUMNS.min(MAX_TERMS));
        let (first, second) = match (run(n0), run(n0 + OFFSET_STEP)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                last_err = Some(e);
                continue;
            }
        };
        let gap = (&first.value - &second.value).abs_f64();
        return Ok(SeriesResult {
            value: Scalar::Float(first.value.with_prec(prec)),
            est_error: first.est_error.max(second.est_error).max(gap),
            terms_used: first.terms_used.max(second.terms_used),
            method: Method::AcceleratedUnit,
        });
    }
    Err(last_err.expect("at least one attempt"))
}

/// Index past which no parameter `p + n` changes sign, so that the terms
/// follow their asymptotic pattern.
fn transient_offset(params: &HypParams) -> usize {
    let mut reach: f64 = 0.0;
    for p in params.top.iter().chain(&params.bottom) {
        reach = reach.max(-p.re_f64());
    }
    if reach <= 0.0 {
        0
    } else {
        (reach.ceil() as usize + 1).min(MAX_OFFSET)
    }
}

fn wynn_geometric_series(params: &HypParams, prec: Precision) -> Result<SeriesResult> {
    let wp = prec.with_extra(prec.digits() + 30);
    let mut stream = TermStream::new(params, wp);
    let mut sum = BigComplex::zero(wp);
    let mut seq = Vec::new();
    let mut next = GEOMETRIC_BASE;
    for n in 0..MAX_TERMS {
        sum = sum + stream.next().expect("infinite stream");
        if n + 1 == next {
            seq.push(sum.clone());
            next *= 2;
        }
    }
    let out = wynn_epsilon(&seq);
    Ok(SeriesResult {
        value: Scalar::Float(out.value.with_prec(prec)),
        est_error: out.est_error,
        terms_used: MAX_TERMS,
        method: Method::AcceleratedUnit,
    })
}

#[derive(Clone, Debug)]
pub struct Extrapolation {
    pub value: BigComplex,
    /// Absolute spread of the final estimates.
    pub est_error: f64,
    pub terms_used: usize,
}

fn spread(v: &[BigComplex]) -> f64 {
    let mut s: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            s = s.max((&v[i] - &v[j]).abs_f64());
        }
    }
    s
}

/// Levin's u-transform `L_k^{(0)}` of the series with the given terms, for
/// increasing `k` until the last three values agree to `tol` (relative).
///
/// With `beta = 1`, remainder estimates `omega_j = (j+1) t_j`; the common
/// factor `(k+1)^{1-k}` of the weights cancels, leaving integer weights
/// `(-1)^j C(k,j) (j+1)^{k-1}`.
pub fn levin_u(terms: impl Iterator<Item = BigComplex>, tol: f64, max_terms: usize) -> Result<Extrapolation> {
    levin_u_from(terms, 0, tol, max_terms)
}

/// `L_k^{(n0)}`: the transform applied to the partial sums `S_{n0}, S_{n0+1}, ...`.
pub fn levin_u_from(
    terms: impl Iterator<Item = BigComplex>,
    n0: usize,
    tol: f64,
    max_terms: usize,
) -> Result<Extrapolation> {
    let mut partial = Vec::new();
    let mut inv_omega = Vec::new();
    let mut history: Vec<BigComplex> = Vec::new();
    let mut best: Option<(f64, BigComplex, usize)> = None;
    let mut sum: Option<BigComplex> = None;
    for (n, t) in terms.take(max_terms).enumerate() {
        let prec = t.prec();
        let s = match sum.take() {
            Some(s) => s + t.clone(),
            None => t.clone(),
        };
        sum = Some(s.clone());
        if t.is_zero() {
            // An exactly vanishing term leaves a finite sum.
            return Ok(Extrapolation { value: s, est_error: 0.0, terms_used: n + 1 });
        }
        if n < n0 {
            continue;
        }
        let j = n - n0;
        let w = t.scale_i64(n as i64 + 1).recip();
        partial.push(&s * &w);
        inv_omega.push(w);
        let k = j;
        if k == 0 {
            continue;
        }
        let mut num = BigComplex::zero(prec);
        let mut den = BigComplex::zero(prec);
        let mut binom = BigInt::from(1);
        for i in 0..=k {
            let weight = &binom * BigInt::from((n0 + i) as u64 + 1).pow(k as u32 - 1);
            let wc = BigComplex::from_rational(&ExactRational::from_integer(weight), prec);
            let (a, b) = (&wc * &partial[i], &wc * &inv_omega[i]);
            if i % 2 == 0 {
                num = num + a;
                den = den + b;
            } else {
                num = num - a;
                den = den - b;
            }
            binom = binom * (k - i) / (i + 1);
        }
        if den.is_zero() {
            continue;
        }
        let value = num / den;
        history.push(value);
        if history.len() >= 3 {
            let last = &history[history.len() - 3..];
            let sp = spread(last);
            let scale = last[2].abs_f64().max(f64::MIN_POSITIVE);
            if best.as_ref().is_none_or(|(b, _, _)| sp < *b) {
                best = Some((sp, last[2].clone(), n + 1));
            }
            if history.len() >= MIN_COLUMNS && sp <= tol * scale {
                return Ok(Extrapolation { value: last[2].clone(), est_error: sp, terms_used: n + 1 });
            }
        }
    }
    Err(Error::NoConvergence { terms: max_terms, spread: best.map_or(f64::INFINITY, |(s, _, _)| s) })
}

/// Wynn's epsilon algorithm; returns the highest even-column estimate.
pub fn wynn_epsilon(seq: &[BigComplex]) -> Extrapolation {
    assert!(!seq.is_empty(), "epsilon needs at least one element");
    let prec = seq[0].prec();
    // columns[c][i] = eps_c^{(i)}; eps_{-1} = 0, eps_0 = S.
    let mut prev: Vec<BigComplex> = vec![BigComplex::zero(prec); seq.len() + 1];
    let mut cur: Vec<BigComplex> = seq.to_vec();
    let mut evens: Vec<Vec<BigComplex>> = vec![cur.clone()];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut broke = false;
        for i in 0..cur.len() - 1 {
            let d = &cur[i + 1] - &cur[i];
            if d.is_zero() {
                broke = true;
                break;
            }
            next.push(&prev[i + 1] + &d.recip());
        }
        if broke {
            break;
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            evens.push(cur.clone());
        }
    }
    // Best estimate: last entry of the deepest even column; error from its
    // neighbour in the same column and the previous column's last entry.
    let last = evens.last().expect("column 0 present");
    let value = last.last().expect("nonempty column").clone();
    let mut est: f64 = 0.0;
    if last.len() >= 2 {
        est = est.max((&last[last.len() - 1] - &last[last.len() - 2]).abs_f64());
    }
    if evens.len() >= 2 {
        let before = &evens[evens.len() - 2];
        est = est.max((&value - before.last().expect("nonempty")).abs_f64());
    }
    Extrapolation { value, est_error: est, terms_used: seq.len() }
}
