//! Direct evaluation of pFq series: exact terminating sums, truncated sums
//! inside the unit disk, and accelerated sums at unit argument.

pub mod accel;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{BigComplex, Precision, Scalar};

pub use accel::Accelerator;

/// Iteration budget for truncated and accelerated sums.
pub const MAX_TERMS: usize = 4096;
/// Extrapolation budget for the unit-argument accelerator.
pub const MAX_COLUMNS: usize = 512;

/// A polynomial `P(n)` contributing the factor `P(n)/P(0)` to the n-th term.
///
/// This encodes parameter pairs `(z_i + 1; z_i)` through their symmetric
/// function `prod (z_i + n) / z_i` without knowing the individual `z_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairFactor {
    coeffs: Vec<Scalar>,
}

impl PairFactor {
    /// `coeffs` ascending in `n`; `P(0)` must be nonzero.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        if coeffs.first().is_none_or(|c| c.is_numerically_zero()) {
            return Err(Error::pre("pair factor must not vanish at n = 0"));
        }
        Ok(PairFactor { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn eval(&self, n: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * n + c)
    }

    fn eval_complex(&self, n: &BigComplex, prec: Precision) -> BigComplex {
        self.coeffs.iter().rev().fold(BigComplex::zero(prec), |acc, c| acc * n.clone() + c.to_complex(prec))
    }

    fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }
}

/// Parameters of `pFq(top; bottom; x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypParams {
    pub top: Vec<Scalar>,
    pub bottom: Vec<Scalar>,
    pub x: Scalar,
    pub pair_factors: Vec<PairFactor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    Terminating(u64),
    ConvergentUnit(f64),
    ConvergentDisk,
    Divergent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactTerminating,
    FloatTerminating,
    TruncatedDisk,
    AcceleratedUnit,
}

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: Scalar,
    /// Absolute error estimate.
    pub est_error: f64,
    pub terms_used: usize,
    pub method: Method,
}

impl HypParams {
    pub fn new(top: Vec<Scalar>, bottom: Vec<Scalar>, x: Scalar) -> Self {
        HypParams { top, bottom, x, pair_factors: Vec::new() }
    }

    /// Series at `x = 1`.
    pub fn unit(top: Vec<Scalar>, bottom: Vec<Scalar>) -> Self {
        Self::new(top, bottom, Scalar::one())
    }

    pub fn with_pair_factor(mut self, factor: PairFactor) -> Self {
        self.pair_factors.push(factor);
        self
    }

    fn pair_degree(&self) -> usize {
        self.pair_factors.iter().map(PairFactor::degree).sum()
    }

    /// `Re(sum bottom - sum top)`, with each pair factor of degree d lowering it by d.
    pub fn excess(&self) -> f64 {
        let s: f64 = self.bottom.iter().map(Scalar::re_f64).sum::<f64>()
            - self.top.iter().map(Scalar::re_f64).sum::<f64>();
        s - self.pair_degree() as f64
    }

    /// Smallest `k` with `-k` among the top parameters.
    pub fn terminating_index(&self) -> Option<u64> {
        self.top.iter().filter_map(Scalar::as_nonpositive_integer).min()
    }

    pub fn is_exact(&self) -> bool {
        self.top.iter().all(Scalar::is_exact)
            && self.bottom.iter().all(Scalar::is_exact)
            && self.x.is_exact()
            && self.pair_factors.iter().all(PairFactor::is_exact)
    }

    pub fn classify(&self) -> Result<Classification> {
        let k = self.terminating_index();
        for b in &self.bottom {
            if let Some(n) = b.as_nonpositive_integer() {
                if !k.is_some_and(|k| k <= n) {
                    return Err(Error::InadmissibleBottom(b.render(20)));
                }
            }
        }
        if let Some(k) = k {
            return Ok(Classification::Terminating(k));
        }
        let p = self.top.len() + self.pair_degree();
        let q = self.bottom.len() + self.pair_degree();
        if p <= q {
            return Ok(Classification::ConvergentDisk);
        }
        if p > q + 1 {
            return Ok(Classification::Divergent);
        }
        let ax = self.x.abs_f64();
        if self.x == Scalar::one() {
            let s = self.excess();
            return Ok(if s > 0.0 { Classification::ConvergentUnit(s) } else { Classification::Divergent });
        }
        Ok(if ax < 1.0 { Classification::ConvergentDisk } else { Classification::Divergent })
    }

    pub fn describe(&self) -> String {
        let join = |v: &[Scalar]| v.iter().map(|s| s.render(12)).collect::<Vec<_>>().join(", ");
        format!("F({}; {}; {})", join(&self.top), join(&self.bottom), self.x.render(12))
    }
}

/// Evaluates the series according to its classification.
pub fn eval_series(params: &HypParams, prec: Precision) -> Result<SeriesResult> {
    eval_series_with(params, prec, Accelerator::LevinU)
}

/// As [`eval_series`], choosing the unit-argument accelerator.
pub fn eval_series_with(params: &HypParams, prec: Precision, accel: Accelerator) -> Result<SeriesResult> {
    match params.classify()? {
        Classification::Terminating(k) => eval_terminating(params, k as usize, prec),
        Classification::ConvergentDisk => eval_disk(params, prec),
        Classification::ConvergentUnit(_) => accel::eval_unit(params, prec, accel),
        Classification::Divergent => Err(Error::Divergent(params.describe())),
    }
}

/// Terminating evaluation that tolerates nonpositive-integer bottom parameters
/// dominated by a terminating top parameter.
pub fn eval_regularized(params: &HypParams, prec: Precision) -> Result<SeriesResult> {
    match params.classify()? {
        Classification::Terminating(k) => eval_terminating(params, k as usize, prec),
        _ => Err(Error::pre(format!("{} does not terminate", params.describe()))),
    }
}

/// Finite sum of terms `0..=k`, each term's Pochhammer products built factor by factor.
fn eval_terminating(params: &HypParams, k: usize, prec: Precision) -> Result<SeriesResult> {
    let exact = params.is_exact();
    let guard = prec.with_extra(10);
    let lift = |s: &Scalar| if exact { s.clone() } else { s.to_float(guard) };
    let top: Vec<Scalar> = params.top.iter().map(lift).collect();
    let bottom: Vec<Scalar> = params.bottom.iter().map(lift).collect();
    let x = lift(&params.x);
    let pair0: Vec<Scalar> = params.pair_factors.iter().map(|p| lift(&p.eval(&Scalar::zero()))).collect();

    let mut term = Scalar::one();
    let mut sum = Scalar::one();
    let mut abs_sum = 1.0f64;
    let mut used = 1;
    for n in 0..k {
        let mut num = &x * &Scalar::one();
        for a in &top {
            num = num * (a + n as i64);
        }
        if num.is_exact_zero() {
            break;
        }
        let mut den = Scalar::int(n as i64 + 1);
        for b in &bottom {
            den = den * (b + n as i64);
        }
        if den.is_exact_zero() || (!exact && den.is_numerically_zero()) {
            return Err(Error::InadmissibleBottom(format!("zero denominator factor at n = {n}")));
        }
        term = &(term * num) / &den;
        let mut full = term.clone();
        for (p, p0) in params.pair_factors.iter().zip(&pair0) {
            full = &(full * lift(&p.eval(&Scalar::int(n as i64 + 1)))) / p0;
        }
        abs_sum += full.abs_f64();
        sum = sum + full;
        used += 1;
    }
    let (value, est_error, method) = if exact {
        (sum, 0.0, Method::ExactTerminating)
    } else {
        let err = abs_sum * guard.epsilon() * (used as f64 + 1.0);
        (sum.to_float(prec), err, Method::FloatTerminating)
    };
    Ok(SeriesResult { value, est_error, terms_used: used, method })
}

/// Float parameters of a non-terminating series at working precision `wp`.
pub(crate) struct TermStream {
    top: Vec<BigComplex>,
    bottom: Vec<BigComplex>,
    x: BigComplex,
    pairs: Vec<(PairFactor, BigComplex)>,
    wp: Precision,
    n: usize,
    base: BigComplex,
}

impl TermStream {
    pub(crate) fn new(params: &HypParams, wp: Precision) -> Self {
        let pairs = params
            .pair_factors
            .iter()
            .map(|p| {
                let p0 = p.eval_complex(&BigComplex::zero(wp), wp);
                (p.clone(), p0)
            })
            .collect();
        TermStream {
            top: params.top.iter().map(|a| a.to_complex(wp)).collect(),
            bottom: params.bottom.iter().map(|b| b.to_complex(wp)).collect(),
            x: params.x.to_complex(wp),
            pairs,
            wp,
            n: 0,
            base: BigComplex::one(wp),
        }
    }
}

impl Iterator for TermStream {
    type Item = BigComplex;

    /// Yields `t_0, t_1, ...`.
    fn next(&mut self) -> Option<BigComplex> {
        let wp = self.wp;
        let n = self.n;
        if n > 0 {
            let m = BigComplex::from_i64(n as i64 - 1, wp);
            let mut num = self.x.clone();
            for a in &self.top {
                num = num * (a + &m);
            }
            let mut den = BigComplex::from_i64(n as i64, wp);
            for b in &self.bottom {
                den = den * (b + &m);
            }
            self.base = &(&self.base * &num) / &den;
        }
        let mut t = self.base.clone();
        if !self.pairs.is_empty() {
            let nn = BigComplex::from_i64(n as i64, wp);
            for (p, p0) in &self.pairs {
                t = &(t * p.eval_complex(&nn, wp)) / p0;
            }
        }
        self.n += 1;
        Some(t)
    }
}

fn eval_disk(params: &HypParams, prec: Precision) -> Result<SeriesResult> {
    let wp = prec.with_extra(15);
    let tol = 10f64.powi(-(prec.digits() as i32) - 5);
    let ax = params.x.abs_f64();
    let mut stream = TermStream::new(params, wp);
    let mut sum = BigComplex::zero(wp);
    let mut prev_abs = f64::NAN;
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let t = stream.next().expect("infinite stream");
        let ta = t.abs_f64();
        sum = sum + t;
        let scale = sum.abs_f64().max(f64::MIN_POSITIVE);
        let ratio = if prev_abs > 0.0 { ta / prev_abs } else { f64::NAN };
        prev_abs = ta;
        if n < 2 {
            continue;
        }
        if ta == 0.0 {
            quiet += 1;
        } else {
            let rho = ratio.max(ax);
            if rho < 1.0 && ta * rho / (1.0 - rho) <= tol * scale {
                quiet += 1;
            } else {
                quiet = 0;
            }
        }
        if quiet >= 3 {
            let rho = if ratio.is_finite() { ratio.max(ax) } else { ax };
            let tail = if rho < 1.0 { ta * rho / (1.0 - rho) } else { ta };
            let est = tail + scale * wp.epsilon() * (n as f64 + 1.0);
            return Ok(SeriesResult {
                value: Scalar::Float(sum.with_prec(prec)),
                est_error: est,
                terms_used: n + 1,
                method: Method::TruncatedDisk,
            });
        }
    }
    Err(Error::NoConvergence { terms: MAX_TERMS, spread: prev_abs })
}
