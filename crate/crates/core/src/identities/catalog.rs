use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::*;
use crate::error::{Error, Result};
use crate::numerics::{Precision, Scalar, ShiftedFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Minton,
    Karlsson,
    MintonExtended,
    KarlssonMulti,
    Gasper,
    DegenerateSum,
    Mp2012Sum,
    MpTransform,
    QSummation,
    GIdentity,
    ProductIdentity,
    RecurrenceStep,
    RecurrenceChain,
    ContiguousShift,
    ContiguousVanishing,
    PochhammerReflectionCheck,
    KarlssonCounterexample,
}

impl Identity {
    pub const ALL: [Identity; 17] = [
        Identity::Minton,
        Identity::Karlsson,
        Identity::MintonExtended,
        Identity::KarlssonMulti,
        Identity::Gasper,
        Identity::DegenerateSum,
        Identity::Mp2012Sum,
        Identity::MpTransform,
        Identity::QSummation,
        Identity::GIdentity,
        Identity::ProductIdentity,
        Identity::RecurrenceStep,
        Identity::RecurrenceChain,
        Identity::ContiguousShift,
        Identity::ContiguousVanishing,
        Identity::PochhammerReflectionCheck,
        Identity::KarlssonCounterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Minton => "minton",
            Identity::Karlsson => "karlsson",
            Identity::MintonExtended => "minton_extended",
            Identity::KarlssonMulti => "karlsson_multi",
            Identity::Gasper => "gasper",
            Identity::DegenerateSum => "degenerate_sum",
            Identity::Mp2012Sum => "mp2012_sum",
            Identity::MpTransform => "mp_transform",
            Identity::QSummation => "q_summation",
            Identity::GIdentity => "g_identity",
            Identity::ProductIdentity => "product_identity",
            Identity::RecurrenceStep => "recurrence_step",
            Identity::RecurrenceChain => "recurrence_chain",
            Identity::ContiguousShift => "contiguous_shift",
            Identity::ContiguousVanishing => "contiguous_vanishing",
            Identity::PochhammerReflectionCheck => "pochhammer_reflection_check",
            Identity::KarlssonCounterexample => "karlsson_counterexample",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        let key = match key.as_str() {
            "counterexample" => "karlsson_counterexample",
            "pochhammer_reflection" => "pochhammer_reflection_check",
            other => other,
        };
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == key)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// The arguments of one identity evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum IdentityInput {
    Minton { k: usize, b: Scalar, family: ShiftedFamily },
    Karlsson { a: Scalar, b: Scalar, family: ShiftedFamily },
    MintonExtended { k: usize, b: Scalar, family: ShiftedFamily },
    KarlssonMulti { a: Scalar, b: Vec<Scalar>, p: Vec<usize>, family: ShiftedFamily },
    Gasper { a: Scalar, b: Scalar, c: Scalar, family: ShiftedFamily },
    DegenerateSum { a: Scalar, b: Scalar, p: usize, family: ShiftedFamily },
    Mp2012Sum { a: Scalar, b: Scalar, c: Scalar, family: ShiftedFamily },
    MpTransform { a: Scalar, b: Scalar, c: Scalar, family: ShiftedFamily, x: Scalar },
    QSummation { a: Scalar, b: Scalar, c: Scalar, family: ShiftedFamily },
    GIdentity { b: Scalar, c: Scalar, family: ShiftedFamily, z: Scalar },
    ProductIdentity { a: Scalar, b: Scalar, c: Scalar, d: Scalar, family: ShiftedFamily },
    RecurrenceStep { a: Scalar, b: Scalar, p: usize, family: ShiftedFamily },
    RecurrenceChain { a: Scalar, b: Scalar, p: usize, family: ShiftedFamily },
    ContiguousShift { k: usize, family: ShiftedFamily },
    ContiguousVanishing { family: ShiftedFamily },
    PochhammerReflectionCheck { b: Scalar, family: ShiftedFamily },
    KarlssonCounterexample { a: Scalar, b: Scalar, family: ShiftedFamily },
}

impl IdentityInput {
    pub fn identity(&self) -> Identity {
        match self {
            IdentityInput::Minton { .. } => Identity::Minton,
            IdentityInput::Karlsson { .. } => Identity::Karlsson,
            IdentityInput::MintonExtended { .. } => Identity::MintonExtended,
            IdentityInput::KarlssonMulti { .. } => Identity::KarlssonMulti,
            IdentityInput::Gasper { .. } => Identity::Gasper,
            IdentityInput::DegenerateSum { .. } => Identity::DegenerateSum,
            IdentityInput::Mp2012Sum { .. } => Identity::Mp2012Sum,
            IdentityInput::MpTransform { .. } => Identity::MpTransform,
            IdentityInput::QSummation { .. } => Identity::QSummation,
            IdentityInput::GIdentity { .. } => Identity::GIdentity,
            IdentityInput::ProductIdentity { .. } => Identity::ProductIdentity,
            IdentityInput::RecurrenceStep { .. } => Identity::RecurrenceStep,
            IdentityInput::RecurrenceChain { .. } => Identity::RecurrenceChain,
            IdentityInput::ContiguousShift { .. } => Identity::ContiguousShift,
            IdentityInput::ContiguousVanishing { .. } => Identity::ContiguousVanishing,
            IdentityInput::PochhammerReflectionCheck { .. } => Identity::PochhammerReflectionCheck,
            IdentityInput::KarlssonCounterexample { .. } => Identity::KarlssonCounterexample,
        }
    }

    /// Whether every scalar argument is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.scalars().iter().all(|s| s.is_exact())
    }

    fn scalars(&self) -> Vec<&Scalar> {
        fn fam(f: &ShiftedFamily) -> Vec<&Scalar> {
            f.f().iter().collect()
        }
        use IdentityInput::*;
        let mut v: Vec<&Scalar> = Vec::new();
        match self {
            Minton { b, family, .. }
            | MintonExtended { b, family, .. }
            | PochhammerReflectionCheck { b, family } => {
                v.push(b);
                v.extend(fam(family));
            }
            Karlsson { a, b, family } | KarlssonCounterexample { a, b, family } => {
                v.extend([a, b]);
                v.extend(fam(family));
            }
            KarlssonMulti { a, b, family, .. } => {
                v.push(a);
                v.extend(b.iter());
                v.extend(fam(family));
            }
            Gasper { a, b, c, family } | Mp2012Sum { a, b, c, family } | QSummation { a, b, c, family } => {
                v.extend([a, b, c]);
                v.extend(fam(family));
            }
            DegenerateSum { a, b, family, .. }
            | RecurrenceStep { a, b, family, .. }
            | RecurrenceChain { a, b, family, .. } => {
                v.extend([a, b]);
                v.extend(fam(family));
            }
            MpTransform { a, b, c, family, x } => {
                v.extend([a, b, c, x]);
                v.extend(fam(family));
            }
            GIdentity { b, c, family, z } => {
                v.extend([b, c, z]);
                v.extend(fam(family));
            }
            ProductIdentity { a, b, c, d, family } => {
                v.extend([a, b, c, d]);
                v.extend(fam(family));
            }
            ContiguousShift { family, .. } | ContiguousVanishing { family } => v.extend(fam(family)),
        }
        v
    }

    pub fn evaluate(&self, prec: Precision) -> Result<IdentityReport> {
        use IdentityInput::*;
        match self {
            Minton { k, b, family } => minton(*k, b, family),
            Karlsson { a, b, family } => karlsson(a, b, family, prec),
            MintonExtended { k, b, family } => minton_extended(*k, b, family),
            KarlssonMulti { a, b, p, family } => karlsson_multi(a, b, p, family, prec),
            Gasper { a, b, c, family } => gasper(a, b, c, family, prec),
            DegenerateSum { a, b, p, family } => degenerate_sum(a, b, *p, family),
            Mp2012Sum { a, b, c, family } => mp2012_sum(a, b, c, family, prec),
            MpTransform { a, b, c, family, x } => mp_transform(a, b, c, family, x, prec),
            QSummation { a, b, c, family } => q_summation(a, b, c, family, prec),
            GIdentity { b, c, family, z } => g_identity(b, c, family, z, prec),
            ProductIdentity { a, b, c, d, family } => product_identity(a, b, c, d, family, prec),
            RecurrenceStep { a, b, p, family } => recurrence_step(a, b, *p, family, prec),
            RecurrenceChain { a, b, p, family } => recurrence_chain(a, b, *p, family, prec),
            ContiguousShift { k, family } => contiguous_shift(*k, family),
            ContiguousVanishing { family } => contiguous_vanishing(family),
            PochhammerReflectionCheck { b, family } => pochhammer_reflection_check(b, family),
            KarlssonCounterexample { a, b, family } => karlsson_unchecked(a, b, family, prec),
        }
    }

    /// Checks the identity's preconditions and the admissibility of every
    /// series involved without summing any of them.
    pub fn check(&self, prec: Precision) -> Result<()> {
        dry_run(|| self.evaluate(prec)).map(|_| ())
    }

    /// One-line rendering of the arguments.
    pub fn describe(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{self:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.name()));
        }
        assert!("nonsense".parse::<Identity>().is_err());
    }

    #[test]
    fn input_json_round_trip() {
        let input = IdentityInput::Minton {
            k: 1,
            b: Scalar::one(),
            family: ShiftedFamily::new(vec![Scalar::int(2)], vec![1]).unwrap(),
        };
        let json = serde_json::to_string(&input).unwrap();
        assert_eq!(json, r#"{"identity":"minton","k":1,"b":"1","family":{"f":["2"],"m":[1]}}"#);
        let back: IdentityInput = serde_json::from_str(&json).unwrap();
        assert_eq!(back, input);
        assert!(back.is_exact());
        assert!(back.check(Precision::DEFAULT).is_ok());
        assert_eq!(back.evaluate(Precision::DEFAULT).unwrap().lhs, Scalar::ratio(1, 4));
    }

    #[test]
    fn check_skips_summation_but_enforces_preconditions() {
        let family = ShiftedFamily::new(vec![Scalar::int(2)], vec![1]).unwrap();
        let bad = IdentityInput::Karlsson { a: Scalar::zero(), b: Scalar::one(), family: family.clone() };
        assert!(bad.check(Precision::DEFAULT).unwrap_err().is_rejection());
        let good = IdentityInput::Karlsson { a: Scalar::ratio(-1, 2), b: Scalar::one(), family };
        assert!(good.check(Precision::DEFAULT).is_ok());
    }
}
