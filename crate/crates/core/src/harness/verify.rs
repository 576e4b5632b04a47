use rayon::prelude::*;
use serde::Serialize;

use super::sampler::{sample_case_with, SampleMode, SamplerSpec, GENERATOR};
use crate::error::Result;
use crate::identities::{Identity, IdentityInput, IdentityReport, Mode};
use crate::numerics::{Precision, Scalar};

/// Outcome of one case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub index: usize,
    pub input: Option<IdentityInput>,
    /// Draws rejected before `input` was accepted.
    pub rejected: usize,
    pub passed: bool,
    pub mode: Option<Mode>,
    pub lhs: Option<Scalar>,
    pub rhs: Option<Scalar>,
    pub residual: Option<Scalar>,
    pub rel_residual: Option<f64>,
    pub est_error: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub cases_run: usize,
    pub cases_exact_pass: usize,
    pub cases_float_pass: usize,
    pub cases_failed: usize,
    pub cases_resampled: usize,
    pub worst_rel_residual: f64,
    /// Failures where a pass was expected, plus passes where a failure was.
    pub unexpected: usize,
}

/// One suite's results. Carries no timings, so equal inputs give equal JSON.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub identity: String,
    pub mode: SampleMode,
    pub generator: String,
    pub seed: u64,
    pub precision: u32,
    /// Every case is expected to fail (the counterexample suite).
    pub expect_failure: bool,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.passed)
    }

    pub fn ok(&self) -> bool {
        self.summary.unexpected == 0
    }
}

struct Comparison {
    lhs: Scalar,
    rhs: Scalar,
    residual: Scalar,
    mode: Mode,
    rel_residual: f64,
    est_error: f64,
    passed: bool,
}

impl From<IdentityReport> for Comparison {
    fn from(r: IdentityReport) -> Self {
        let passed = r.passes();
        Comparison {
            lhs: r.lhs,
            rhs: r.rhs,
            residual: r.residual,
            mode: r.mode,
            rel_residual: r.rel_residual,
            est_error: r.est_error,
            passed,
        }
    }
}

impl Comparison {
    /// Two values computed by different routes, each with its relative error estimate.
    fn between(x: Scalar, ex: f64, y: Scalar, ey: f64, prec: Precision) -> Self {
        let residual = &x - &y;
        if residual.is_exact() {
            let passed = residual.is_exact_zero();
            let rel_residual = if passed { 0.0 } else { x.rel_diff(&y) };
            return Comparison {
                lhs: x,
                rhs: y,
                residual,
                mode: Mode::Exact,
                rel_residual,
                est_error: 0.0,
                passed,
            };
        }
        let rel_residual = x.rel_diff(&y);
        let est_error = ex + ey + prec.epsilon();
        let passed = rel_residual <= 10.0 * est_error;
        Comparison { lhs: x, rhs: y, residual, mode: Mode::Float, rel_residual, est_error, passed }
    }
}

fn run(
    name: String,
    spec: &SamplerSpec,
    prec: Precision,
    expect_failure: bool,
    accept: impl Fn(&IdentityInput) -> Result<()> + Sync,
    evaluate: impl Fn(&IdentityInput) -> Result<Comparison> + Sync,
) -> VerifyReport {
    let cases: Vec<CaseRecord> = (0..spec.count)
        .into_par_iter()
        .map(|index| {
            let mut record = CaseRecord {
                index,
                input: None,
                rejected: 0,
                passed: false,
                mode: None,
                lhs: None,
                rhs: None,
                residual: None,
                rel_residual: None,
                est_error: None,
                error: None,
            };
            let case = match sample_case_with(spec, index, prec, &accept) {
                Ok(c) => c,
                Err(e) => {
                    record.error = Some(e.to_string());
                    return record;
                }
            };
            record.rejected = case.rejected;
            match evaluate(&case.input) {
                Ok(c) => {
                    record.passed = c.passed;
                    record.mode = Some(c.mode);
                    record.rel_residual = Some(c.rel_residual);
                    record.est_error = Some(c.est_error);
                    record.lhs = Some(c.lhs);
                    record.rhs = Some(c.rhs);
                    record.residual = Some(c.residual);
                }
                Err(e) => record.error = Some(e.to_string()),
            }
            record.input = Some(case.input);
            record
        })
        .collect();

    let mut summary = Summary { cases_run: cases.len(), ..Summary::default() };
    for c in &cases {
        summary.cases_resampled += c.rejected;
        match (c.passed, c.mode) {
            (true, Some(Mode::Exact)) => summary.cases_exact_pass += 1,
            (true, _) => summary.cases_float_pass += 1,
            (false, _) => summary.cases_failed += 1,
        }
        if let Some(r) = c.rel_residual {
            summary.worst_rel_residual = summary.worst_rel_residual.max(r);
        }
    }
    summary.unexpected =
        if expect_failure { summary.cases_run - summary.cases_failed } else { summary.cases_failed };
    VerifyReport {
        identity: name,
        mode: spec.mode,
        generator: GENERATOR.to_string(),
        seed: spec.seed,
        precision: prec.digits(),
        expect_failure,
        cases,
        summary,
    }
}

/// Runs `spec.identity` over its sampled stream. Exact cases pass iff the
/// residual is exactly zero, float cases iff `rel_residual <= 10 est_error`.
pub fn verify(spec: &SamplerSpec, prec: Precision) -> VerifyReport {
    let expect_failure = spec.identity == Identity::KarlssonCounterexample;
    run(
        spec.identity.name().to_string(),
        spec,
        prec,
        expect_failure,
        |input| input.check(prec),
        |input| input.evaluate(prec).map(Comparison::from),
    )
}

/// The default suites for one identity: an exact suite where terminating
/// instances exist, a float suite where non-terminating ones are meaningful.
pub fn default_specs(identity: Identity, seed: u64) -> Vec<SamplerSpec> {
    use Identity::*;
    match identity {
        Minton
        | MintonExtended
        | DegenerateSum
        | ContiguousShift
        | ContiguousVanishing
        | PochhammerReflectionCheck
        | KarlssonMulti
        | RecurrenceStep
        | RecurrenceChain => {
            vec![SamplerSpec::exact(identity, seed)]
        }
        Karlsson | Gasper | Mp2012Sum | QSummation | ProductIdentity | MpTransform => {
            vec![SamplerSpec::exact(identity, seed), SamplerSpec::float(identity, seed)]
        }
        GIdentity => vec![SamplerSpec::float(identity, seed)],
        KarlssonCounterexample => vec![SamplerSpec::exact(identity, seed).with_count(1)],
    }
}

/// A registered specialization between two identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossPair {
    /// Gasper's sum at `c = b + 1` against Karlsson's formula.
    GasperKarlsson,
    /// Karlsson's formula at `a = -k` against Minton's.
    KarlssonMinton,
    /// The multi-parameter formula with a single `b` and `p = 1` against Karlsson's.
    MultiKarlsson,
    /// The two evaluations of the shifted-family sum.
    QSummationMp2012,
    /// The contiguity recurrence unwound down to Karlsson's formula, against
    /// the multi-parameter series.
    ChainMulti,
}

impl CrossPair {
    pub const ALL: [CrossPair; 5] = [
        CrossPair::GasperKarlsson,
        CrossPair::KarlssonMinton,
        CrossPair::MultiKarlsson,
        CrossPair::QSummationMp2012,
        CrossPair::ChainMulti,
    ];

    pub fn members(self) -> (Identity, Identity) {
        match self {
            CrossPair::GasperKarlsson => (Identity::Gasper, Identity::Karlsson),
            CrossPair::KarlssonMinton => (Identity::Karlsson, Identity::Minton),
            CrossPair::MultiKarlsson => (Identity::KarlssonMulti, Identity::Karlsson),
            CrossPair::QSummationMp2012 => (Identity::QSummation, Identity::Mp2012Sum),
            CrossPair::ChainMulti => (Identity::RecurrenceChain, Identity::KarlssonMulti),
        }
    }

    pub fn name(self) -> String {
        let (a, b) = self.members();
        format!("{a}->{b}")
    }

    /// Looks up a pair in either order.
    pub fn find(a: Identity, b: Identity) -> Result<CrossPair> {
        CrossPair::ALL
            .into_iter()
            .find(|p| p.members() == (a, b) || p.members() == (b, a))
            .ok_or_else(|| crate::Error::UnregisteredPair(format!("{a} and {b}")))
    }

    /// The identity whose sampler generates the shared parameters.
    pub fn base(self) -> Identity {
        match self {
            CrossPair::GasperKarlsson | CrossPair::KarlssonMinton | CrossPair::MultiKarlsson => {
                Identity::Karlsson
            }
            CrossPair::QSummationMp2012 => Identity::QSummation,
            CrossPair::ChainMulti => Identity::RecurrenceChain,
        }
    }

    /// The sampling mode used by the default cross-check.
    pub fn default_mode(self) -> SampleMode {
        match self {
            CrossPair::KarlssonMinton | CrossPair::ChainMulti => SampleMode::Exact,
            _ => SampleMode::Float,
        }
    }

    pub fn default_spec(self, seed: u64) -> SamplerSpec {
        let spec = match self.default_mode() {
            SampleMode::Exact => SamplerSpec::exact(self.base(), seed),
            SampleMode::Float => SamplerSpec::float(self.base(), seed),
        };
        spec.with_count(100)
    }

    /// Both members' inputs on the slice described by a base input.
    fn project(self, input: &IdentityInput) -> Result<(IdentityInput, IdentityInput)> {
        use IdentityInput as I;
        let mismatch =
            || crate::Error::pre(format!("{} cannot be projected for {}", input.describe(), self.name()));
        Ok(match (self, input) {
            (CrossPair::GasperKarlsson, I::Karlsson { a, b, family }) => {
                (I::Gasper { a: a.clone(), b: b.clone(), c: b + 1, family: family.clone() }, input.clone())
            }
            (CrossPair::KarlssonMinton, I::Karlsson { a, b, family }) => {
                let k = a.as_nonpositive_integer().ok_or_else(mismatch)?;
                (input.clone(), I::Minton { k: k as usize, b: b.clone(), family: family.clone() })
            }
            (CrossPair::MultiKarlsson, I::Karlsson { a, b, family }) => (
                I::KarlssonMulti { a: a.clone(), b: vec![b.clone()], p: vec![1], family: family.clone() },
                input.clone(),
            ),
            (CrossPair::QSummationMp2012, I::QSummation { a, b, c, family }) => (
                input.clone(),
                I::Mp2012Sum { a: a.clone(), b: b.clone(), c: c.clone(), family: family.clone() },
            ),
            (CrossPair::ChainMulti, I::RecurrenceChain { a, b, p, family }) => (
                input.clone(),
                I::KarlssonMulti { a: a.clone(), b: vec![b.clone()], p: vec![*p], family: family.clone() },
            ),
            _ => return Err(mismatch()),
        })
    }

    fn compare(self, first: IdentityReport, second: IdentityReport, prec: Precision) -> Comparison {
        let (x, y) = match self {
            // The chain's value is its left side; the other member's left side
            // is the series itself.
            CrossPair::ChainMulti => (first.lhs, second.lhs),
            _ => (first.rhs, second.rhs),
        };
        Comparison::between(x, first.est_error, y, second.est_error, prec)
    }
}

/// Evaluates both members of `pair` on parameters drawn by `spec` (whose
/// identity must be the pair's base) and counts disagreements as failures.
pub fn cross_check(pair: CrossPair, spec: &SamplerSpec, prec: Precision) -> Result<VerifyReport> {
    if spec.identity != pair.base() {
        return Err(crate::Error::pre(format!(
            "cross-check {} samples {}, not {}",
            pair.name(),
            pair.base(),
            spec.identity
        )));
    }
    Ok(run(
        pair.name(),
        spec,
        prec,
        false,
        |input| {
            let (x, y) = pair.project(input)?;
            x.check(prec)?;
            y.check(prec)
        },
        |input| {
            let (x, y) = pair.project(input)?;
            Ok(pair.compare(x.evaluate(prec)?, y.evaluate(prec)?, prec))
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minton_suite_passes() {
        let r = verify(&SamplerSpec::exact(Identity::Minton, 11).with_count(40), Precision::DEFAULT);
        assert_eq!(r.summary.cases_run, 40);
        assert_eq!(r.summary.cases_exact_pass, 40, "{:?}", r.failures().next());
        assert!(r.ok());
    }

    #[test]
    fn counterexample_is_an_expected_failure() {
        let spec = default_specs(Identity::KarlssonCounterexample, 42).remove(0);
        let r = verify(&spec, Precision::DEFAULT);
        assert_eq!(r.summary.cases_failed, 1);
        assert!(r.ok());
        let case = &r.cases[0];
        assert_eq!(case.mode, Some(Mode::Exact));
        assert!(!case.residual.as_ref().unwrap().is_exact_zero());
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = SamplerSpec::float(Identity::MpTransform, 3).with_count(6);
        let a = serde_json::to_string(&verify(&spec, Precision::DEFAULT)).unwrap();
        let b = serde_json::to_string(&verify(&spec, Precision::DEFAULT)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pairs_resolve_in_either_order() {
        assert_eq!(
            CrossPair::find(Identity::Mp2012Sum, Identity::QSummation).unwrap(),
            CrossPair::QSummationMp2012
        );
        assert!(CrossPair::find(Identity::Minton, Identity::GIdentity).is_err());
    }

    #[test]
    fn cross_checks_agree() {
        for pair in CrossPair::ALL {
            let spec = pair.default_spec(9).with_count(5);
            let r = cross_check(pair, &spec, Precision::DEFAULT).unwrap();
            assert_eq!(r.summary.cases_failed, 0, "{}: {:?}", pair.name(), r.failures().next());
        }
    }
}
