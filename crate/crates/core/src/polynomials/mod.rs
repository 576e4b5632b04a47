//! Dense polynomials, the characteristic polynomial Q of the first
//! Miller–Paris transformation, its degenerate form R, and root extraction.

mod characteristic;
mod roots;

use std::fmt;

use crate::numerics::{Precision, Scalar};

pub use characteristic::{build_q, build_q_alt, build_r, q_prefactor};
pub use roots::{roots, ZetaSource, ZetaVector, MAX_ITERATIONS};

/// Polynomial with scalar coefficients in ascending degree, trimmed so the
/// leading coefficient is nonzero (the zero polynomial keeps one coefficient).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Scalar>,
    prec: Precision,
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<Scalar>, prec: Precision) -> Self {
        let mut coeffs = coeffs;
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        ComplexPoly { coeffs, prec }
    }

    pub fn constant(c: Scalar, prec: Precision) -> Self {
        Self::new(vec![c], prec)
    }

    /// `c + t`.
    pub fn linear(c: Scalar, prec: Precision) -> Self {
        Self::new(vec![c, Scalar::one()], prec)
    }

    /// `prod (t - r_i)` times `leading`.
    pub fn from_roots(roots: &[Scalar], leading: Scalar, prec: Precision) -> Self {
        let mut p = Self::constant(leading, prec);
        for r in roots {
            p = p.mul(&Self::new(vec![-r, Scalar::one()], prec));
        }
        p
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Scalar {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as i64).collect();
        Self::new(c, self.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Scalar::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Self::new(c, self.prec.min(other.prec))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Self::new(c, self.prec.min(other.prec))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), self.prec)
    }

    /// The polynomial `n -> self(shift + sign * n)`, `sign` being +1 or -1.
    pub fn compose_linear(&self, shift: &Scalar, sign: i64) -> Self {
        let lin = Self::new(vec![shift.clone(), Scalar::int(sign)], self.prec);
        let mut acc = Self::constant(Scalar::zero(), self.prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone(), self.prec));
        }
        acc
    }

    /// Exact division by `t - r`; returns the quotient when the remainder vanishes.
    pub fn divide_root(&self, r: &Scalar) -> Option<Self> {
        let d = self.degree();
        if d == 0 {
            return None;
        }
        let mut q = vec![Scalar::zero(); d];
        let mut carry = Scalar::zero();
        for i in (0..=d).rev() {
            let v = &self.coeffs[i] + &(&carry * r);
            if i == 0 {
                return v.is_zero().then(|| Self::new(q, self.prec));
            }
            q[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(i, c)| match i {
                0 => format!("({})", c.render(12)),
                1 => format!("({})t", c.render(12)),
                _ => format!("({})t^{i}", c.render(12)),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
