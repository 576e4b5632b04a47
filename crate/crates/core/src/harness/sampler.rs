use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::{counterexample_point, Identity, IdentityInput};
use crate::numerics::{Precision, Scalar, ShiftedFamily};

/// Name of the generator recorded in reports.
pub const GENERATOR: &str = "ChaCha8 (seed_from_u64, one stream per case index)";

/// Rejected draws allowed per case before giving up.
pub const MAX_RETRIES: usize = 1000;

const LATTICE_NUM: i64 = 40;
const LATTICE_DEN: i64 = 12;
/// Float draws are decimals on this grid, so that a recorded input re-parses
/// to the value that was used.
const FLOAT_GRID: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    /// Rational lattice parameters, terminating instances where needed.
    Exact,
    /// Decimal parameters carried as floats, non-terminating instances.
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub identity: Identity,
    pub mode: SampleMode,
    pub r_max: usize,
    pub m_max: usize,
    pub k_max: usize,
    pub p_max: usize,
    /// Free scalars are drawn from `[-param_box, param_box]`.
    pub param_box: f64,
    /// Minimum real convergence excess for unit-argument series in float mode.
    pub convergence_margin: f64,
    pub count: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn exact(identity: Identity, seed: u64) -> Self {
        SamplerSpec {
            identity,
            mode: SampleMode::Exact,
            r_max: 3,
            m_max: 4,
            k_max: 8,
            p_max: 4,
            param_box: 20.0,
            convergence_margin: 1.0,
            count: 200,
            seed,
        }
    }

    pub fn float(identity: Identity, seed: u64) -> Self {
        SamplerSpec {
            mode: SampleMode::Float,
            param_box: 4.0,
            count: 100,
            ..SamplerSpec::exact(identity, seed)
        }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = self.r_max >= 1
            && self.m_max >= 1
            && self.p_max >= 1
            && self.param_box.is_finite()
            && self.param_box >= 1.0
            && self.convergence_margin.is_finite()
            && self.convergence_margin > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("invalid sampler spec {self:?}")))
        }
    }
}

/// One sampled input and the number of draws rejected before it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledCase {
    pub index: usize,
    pub input: IdentityInput,
    pub rejected: usize,
}

/// Draws `spec.count` admissible inputs. Case `i` depends only on
/// `(seed, i)`, so any case can be regenerated alone.
pub fn sample(spec: &SamplerSpec, prec: Precision) -> Result<Vec<SampledCase>> {
    spec.validate()?;
    (0..spec.count).map(|i| sample_case(spec, i, prec)).collect()
}

pub fn sample_case(spec: &SamplerSpec, index: usize, prec: Precision) -> Result<SampledCase> {
    sample_case_with(spec, index, prec, |input| input.check(prec))
}

/// As [`sample_case`], with `accept` deciding admissibility. Rejection-class
/// errors from `accept` trigger a redraw; other errors abort.
pub(crate) fn sample_case_with(
    spec: &SamplerSpec,
    index: usize,
    prec: Precision,
    accept: impl Fn(&IdentityInput) -> Result<()>,
) -> Result<SampledCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let mut d = Draw { rng, spec, prec };
    for rejected in 0..=MAX_RETRIES {
        let Some(input) = d.input() else { continue };
        match accept(&input) {
            Ok(()) => return Ok(SampledCase { index, input, rejected }),
            Err(e) if e.is_rejection() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted(MAX_RETRIES))
}

struct Draw<'a> {
    rng: ChaCha8Rng,
    spec: &'a SamplerSpec,
    prec: Precision,
}

impl Draw<'_> {
    fn exact(&self) -> bool {
        self.spec.mode == SampleMode::Exact
    }

    fn int(&mut self, lo: usize, hi: usize) -> Option<usize> {
        (lo <= hi).then(|| self.rng.gen_range(lo..=hi))
    }

    /// A lattice rational `n/d` in `[lo, hi]`.
    fn rational_in(&mut self, lo: f64, hi: f64) -> Option<Scalar> {
        let d = self.rng.gen_range(1..=LATTICE_DEN);
        let n_lo = ((lo * d as f64).ceil() as i64).max(-LATTICE_NUM);
        let n_hi = ((hi * d as f64).floor() as i64).min(LATTICE_NUM);
        (n_lo <= n_hi).then(|| Scalar::ratio(self.rng.gen_range(n_lo..=n_hi), d))
    }

    fn float_in(&mut self, lo: f64, hi: f64) -> Option<Scalar> {
        let n_lo = (lo * FLOAT_GRID).ceil() as i64;
        let n_hi = (hi * FLOAT_GRID).floor() as i64;
        (n_lo <= n_hi).then(|| {
            let n = self.rng.gen_range(n_lo..=n_hi);
            Scalar::ratio(n, FLOAT_GRID as i64).to_float(self.prec)
        })
    }

    fn scalar_in(&mut self, lo: f64, hi: f64) -> Option<Scalar> {
        if self.exact() {
            self.rational_in(lo, hi)
        } else {
            self.float_in(lo, hi)
        }
    }

    /// A free parameter from the box.
    fn free(&mut self) -> Option<Scalar> {
        let w = self.spec.param_box;
        self.scalar_in(-w, w)
    }

    /// A convergence excess in `[margin, margin + 2]`.
    fn excess(&mut self) -> Option<Scalar> {
        let s = self.spec.convergence_margin;
        self.float_in(s, s + 2.0)
    }

    /// A family with at most `m_cap` total shift.
    fn family(&mut self, m_cap: usize) -> Option<ShiftedFamily> {
        let r = self.rng.gen_range(1..=self.spec.r_max);
        let mut f = Vec::with_capacity(r);
        let mut m = Vec::with_capacity(r);
        for _ in 0..r {
            f.push(self.free()?);
            m.push(self.rng.gen_range(1..=self.spec.m_max));
        }
        if m.iter().sum::<usize>() > m_cap {
            return None;
        }
        ShiftedFamily::new(f, m).ok()
    }

    fn any_family(&mut self) -> Option<ShiftedFamily> {
        self.family(usize::MAX)
    }

    fn neg_int(k: usize) -> Scalar {
        Scalar::int(-(k as i64))
    }

    /// `None` is a rejected draw.
    fn input(&mut self) -> Option<IdentityInput> {
        use IdentityInput as I;
        let k_max = self.spec.k_max;
        let p_max = self.spec.p_max;
        let exact = self.exact();
        Some(match self.spec.identity {
            Identity::Minton => {
                let family = self.family(k_max)?;
                let k = self.int(family.m_total(), k_max)?;
                I::Minton { k, b: self.free()?, family }
            }
            Identity::MintonExtended => {
                let family = self.any_family()?;
                let k = self.int(0, family.m_total() - 1)?;
                I::MintonExtended { k, b: self.free()?, family }
            }
            Identity::Karlsson => {
                if exact {
                    let family = self.family(k_max)?;
                    let k = self.int(family.m_total(), k_max)?;
                    I::Karlsson { a: Self::neg_int(k), b: self.free()?, family }
                } else {
                    let family = self.any_family()?;
                    let a = Scalar::int(1 - family.m_total() as i64) - self.excess()?;
                    I::Karlsson { a, b: self.free()?, family }
                }
            }
            Identity::KarlssonMulti => {
                let l = self.int(1, 2.min(p_max))?;
                let mut b = Vec::with_capacity(l);
                let mut p = Vec::with_capacity(l);
                for _ in 0..l {
                    b.push(self.free()?);
                    p.push(self.int(1, p_max)?);
                }
                let p_total: usize = p.iter().sum();
                if p_total > p_max {
                    return None;
                }
                let family = self.any_family()?;
                let m = family.m_total();
                let a = if exact {
                    Self::neg_int(self.int((m + 1).saturating_sub(p_total), k_max)?)
                } else {
                    Scalar::int(p_total as i64 - m as i64) - self.excess()?
                };
                I::KarlssonMulti { a, b, p, family }
            }
            Identity::Gasper => {
                let family = self.any_family()?;
                let m = family.m_total();
                let b = self.free()?;
                if exact {
                    let k = self.int(0, k_max)?;
                    let j = self.int((m + 1).saturating_sub(k + 1), k_max)?;
                    let c = &b + Scalar::int(1 + j as i64);
                    I::Gasper { a: Self::neg_int(k), b, c, family }
                } else {
                    let a = self.free()?;
                    let c = &a + &b + Scalar::int(m as i64) + self.excess()?;
                    I::Gasper { a, b, c, family }
                }
            }
            Identity::DegenerateSum => {
                let family = self.any_family()?;
                let p = self.int(1, p_max)?;
                let lo = family.m_total() as f64 + 1.0 - p as f64;
                let a = if exact {
                    self.rational_in(lo, lo + self.spec.param_box)?
                } else {
                    Scalar::int(lo as i64) + self.excess()?
                };
                I::DegenerateSum { a, b: self.free()?, p, family }
            }
            Identity::Mp2012Sum | Identity::QSummation => {
                let family = self.any_family()?;
                let m = Scalar::int(family.m_total() as i64);
                let b = self.free()?;
                let (a, c) = if exact {
                    let k = self.int(0, k_max)?;
                    let a = Self::neg_int(k);
                    let w = self.spec.param_box;
                    let c = &b + &m + &a + self.rational_in(0.0, w)?;
                    (a, c)
                } else {
                    let a = self.free()?;
                    let c = &a + &b + &m + self.excess()?;
                    (a, c)
                };
                if self.spec.identity == Identity::Mp2012Sum {
                    I::Mp2012Sum { a, b, c, family }
                } else {
                    I::QSummation { a, b, c, family }
                }
            }
            Identity::MpTransform => {
                let family = self.any_family()?;
                let a = if exact { Self::neg_int(self.int(0, k_max)?) } else { self.free()? };
                I::MpTransform { a, b: self.free()?, c: self.free()?, family, x: Scalar::ratio(1, 3) }
            }
            Identity::GIdentity => {
                let family = self.any_family()?;
                I::GIdentity { b: self.free()?, c: self.free()?, family, z: Scalar::ratio(2, 5) }
            }
            Identity::ProductIdentity => {
                let family = self.any_family()?;
                let m = Scalar::int(family.m_total() as i64);
                let w = self.spec.param_box;
                let (a, b, d) = if exact {
                    let k = self.int(1, k_max)?;
                    let a = Scalar::int(k as i64);
                    let b = self.rational_in(-(k as f64), w)?;
                    (a, b, Self::neg_int(self.int(0, k_max)?))
                } else {
                    let b = self.free()?;
                    let a = self.excess()? - &b;
                    (a, b, self.free()?)
                };
                let gap = if exact { self.rational_in(0.0, w)? } else { self.excess()? };
                let c = &d + &b + &m + gap;
                I::ProductIdentity { a, b, c, d, family }
            }
            Identity::RecurrenceStep => {
                let p = self.int(2, p_max)?;
                let family = self.any_family()?;
                let m = family.m_total();
                let a = if exact {
                    Self::neg_int(self.int((m + 3).saturating_sub(p).max(1), k_max)?)
                } else {
                    Scalar::int(p as i64 - m as i64 - 2) - self.excess()?
                };
                I::RecurrenceStep { a, b: self.free()?, p, family }
            }
            Identity::RecurrenceChain => {
                let p = self.int(1, p_max)?;
                let family = self.any_family()?;
                let a = if exact { Self::neg_int(self.int(p - 1, k_max)?) } else { self.free()? };
                I::RecurrenceChain { a, b: self.free()?, p, family }
            }
            Identity::ContiguousShift => {
                let family = self.any_family()?;
                I::ContiguousShift { k: self.int(0, k_max)?, family }
            }
            Identity::ContiguousVanishing => I::ContiguousVanishing { family: self.any_family()? },
            Identity::PochhammerReflectionCheck => {
                let family = self.any_family()?;
                I::PochhammerReflectionCheck { b: self.free()?, family }
            }
            Identity::KarlssonCounterexample => {
                let (a, b, family) = counterexample_point();
                I::KarlssonCounterexample { a, b, family }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use num_traits::Signed;

    use super::*;

    fn prec() -> Precision {
        Precision::DEFAULT
    }

    #[test]
    fn streams_are_reproducible() {
        let spec = SamplerSpec::exact(Identity::Gasper, 7).with_count(20);
        assert_eq!(sample(&spec, prec()).unwrap(), sample(&spec, prec()).unwrap());
        let other = SamplerSpec { seed: 8, ..spec.clone() };
        assert_ne!(sample(&spec, prec()).unwrap(), sample(&other, prec()).unwrap());
        let alone = sample_case(&spec, 13, prec()).unwrap();
        assert_eq!(alone, sample(&spec, prec()).unwrap()[13]);
    }

    #[test]
    fn minton_cases_have_k_at_least_m() {
        let spec = SamplerSpec::exact(Identity::Minton, 1).with_count(100);
        for case in sample(&spec, prec()).unwrap() {
            let IdentityInput::Minton { k, family, .. } = case.input else { panic!() };
            assert!(k >= family.m_total() && k <= 8);
            assert!(family.r() <= 3 && family.m().iter().all(|&m| m <= 4));
        }
    }

    #[test]
    fn lattice_bounds() {
        let spec = SamplerSpec::exact(Identity::PochhammerReflectionCheck, 2).with_count(100);
        for case in sample(&spec, prec()).unwrap() {
            let IdentityInput::PochhammerReflectionCheck { b, family } = case.input else { panic!() };
            for v in std::iter::once(&b).chain(family.f()) {
                let r = v.as_rational().unwrap();
                assert!(r.numer().abs() <= 40.into() && *r.denom() <= 12.into());
            }
        }
    }

    #[test]
    fn float_cases_respect_the_margin() {
        let spec = SamplerSpec::float(Identity::Karlsson, 3).with_count(50);
        for case in sample(&spec, prec()).unwrap() {
            let IdentityInput::Karlsson { a, family, .. } = case.input else { panic!() };
            assert!(!a.is_exact());
            let excess = 1.0 - a.re_f64() - family.m_total() as f64;
            assert!(excess >= 1.0, "excess {excess}");
        }
        let spec = SamplerSpec::float(Identity::Gasper, 3).with_count(50);
        for case in sample(&spec, prec()).unwrap() {
            let IdentityInput::Gasper { a, b, c, family } = case.input else { panic!() };
            let excess = c.re_f64() - a.re_f64() - b.re_f64() - family.m_total() as f64;
            assert!(excess >= 1.0 - 1e-12, "excess {excess}");
        }
    }

    #[test]
    fn every_identity_samples() {
        for id in Identity::ALL {
            for spec in [SamplerSpec::exact(id, 5), SamplerSpec::float(id, 5)] {
                let cases = sample(&spec.with_count(5), prec()).unwrap();
                assert_eq!(cases.len(), 5);
                assert!(cases.iter().all(|c| c.input.identity() == id));
            }
        }
    }
}
