use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

use hyperid::identities::{counterexample_point, Identity, IdentityInput, ZetaRoute};
use hyperid::numerics::{Precision, Scalar, ShiftedFamily};

/// Identity parameters. Vectors are given by repeating the flag, e.g.
/// `--f 2 --m 1 --f 7/2 --m 3`.
#[derive(Args, Clone, Debug, Default)]
pub struct ParamArgs {
    /// Nonnegative integer k (minton, minton_extended, contiguous_shift).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Repeat for karlsson_multi.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Positive integer difference; repeat for karlsson_multi.
    #[arg(long)]
    pub p: Vec<usize>,
    /// Argument of mp_transform.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Argument of g_identity.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Vec<String>,
    #[arg(long)]
    pub m: Vec<usize>,
    /// How the zeros of Q enter mp_transform, g_identity and product_identity.
    #[arg(long, value_enum, default_value = "auto")]
    pub route: RouteArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RouteArg {
    #[default]
    Auto,
    Roots,
    PairFactor,
}

impl From<RouteArg> for ZetaRoute {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Auto => ZetaRoute::Auto,
            RouteArg::Roots => ZetaRoute::Roots,
            RouteArg::PairFactor => ZetaRoute::PairFactor,
        }
    }
}

/// Flags each identity reads; anything else given is an error.
fn accepted(id: Identity) -> &'static [&'static str] {
    use Identity::*;
    match id {
        Minton | MintonExtended => &["k", "b", "f"],
        Karlsson | KarlssonCounterexample => &["a", "b", "f"],
        KarlssonMulti => &["a", "b", "p", "f"],
        Gasper | Mp2012Sum | QSummation => &["a", "b", "c", "f"],
        DegenerateSum | RecurrenceStep | RecurrenceChain => &["a", "b", "p", "f"],
        MpTransform => &["a", "b", "c", "f", "x", "route"],
        GIdentity => &["b", "c", "f", "z", "route"],
        ProductIdentity => &["a", "b", "c", "d", "f", "route"],
        ContiguousShift => &["k", "f"],
        ContiguousVanishing => &["f"],
        PochhammerReflectionCheck => &["b", "f"],
    }
}

impl ParamArgs {
    fn given(&self) -> Vec<&'static str> {
        let mut g = Vec::new();
        let flags: [(&str, bool); 11] = [
            ("k", self.k.is_some()),
            ("a", self.a.is_some()),
            ("b", !self.b.is_empty()),
            ("c", self.c.is_some()),
            ("d", self.d.is_some()),
            ("p", !self.p.is_empty()),
            ("x", self.x.is_some()),
            ("z", self.z.is_some()),
            ("f", !self.f.is_empty()),
            ("m", !self.m.is_empty()),
            ("route", self.route != RouteArg::Auto),
        ];
        for (name, present) in flags {
            if present {
                g.push(name);
            }
        }
        g
    }

    /// Replaces one named parameter (used by `table`).
    pub fn set(&mut self, name: &str, value: String) -> Result<()> {
        match name {
            "a" => self.a = Some(value),
            "b" => self.b = vec![value],
            "c" => self.c = Some(value),
            "d" => self.d = Some(value),
            "x" => self.x = Some(value),
            "z" => self.z = Some(value),
            "k" => {
                self.k =
                    Some(value.parse().with_context(|| format!("k = {value} is not a nonnegative integer"))?)
            }
            other => bail!("cannot vary `{other}`; choose one of a, b, c, d, x, z, k"),
        }
        Ok(())
    }

    pub fn route(&self) -> ZetaRoute {
        self.route.into()
    }

    /// Builds the input for `id`, parsing scalars at `prec`.
    pub fn input(&self, id: Identity, prec: Precision) -> Result<IdentityInput> {
        let ok = accepted(id);
        for g in self.given() {
            if g != "m" && !ok.contains(&g) {
                bail!("--{g} is not a parameter of {id}");
            }
        }
        if id == Identity::KarlssonCounterexample && self.given().is_empty() {
            let (a, b, family) = counterexample_point();
            return Ok(IdentityInput::KarlssonCounterexample { a, b, family });
        }
        let scalar = |name: &str, v: &Option<String>| -> Result<Scalar> {
            let s = v.as_ref().ok_or_else(|| anyhow!("{id} needs --{name}"))?;
            parse(name, s, prec)
        };
        let one_b = || -> Result<Scalar> {
            match self.b.as_slice() {
                [b] => parse("b", b, prec),
                [] => bail!("{id} needs --b"),
                _ => bail!("{id} takes a single --b"),
            }
        };
        let one_p = || -> Result<usize> {
            match self.p.as_slice() {
                [p] => Ok(*p),
                [] => bail!("{id} needs --p"),
                _ => bail!("{id} takes a single --p"),
            }
        };
        let k = || self.k.ok_or_else(|| anyhow!("{id} needs --k"));
        let family = || -> Result<ShiftedFamily> {
            if self.f.is_empty() {
                bail!("{id} needs at least one --f/--m pair");
            }
            let f = self.f.iter().map(|s| parse("f", s, prec)).collect::<Result<Vec<_>>>()?;
            Ok(ShiftedFamily::new(f, self.m.clone())?)
        };
        use IdentityInput as I;
        Ok(match id {
            Identity::Minton => I::Minton { k: k()?, b: one_b()?, family: family()? },
            Identity::MintonExtended => I::MintonExtended { k: k()?, b: one_b()?, family: family()? },
            Identity::Karlsson => I::Karlsson { a: scalar("a", &self.a)?, b: one_b()?, family: family()? },
            Identity::KarlssonCounterexample => {
                I::KarlssonCounterexample { a: scalar("a", &self.a)?, b: one_b()?, family: family()? }
            }
            Identity::KarlssonMulti => {
                if self.b.is_empty() {
                    bail!("{id} needs --b");
                }
                let b = self.b.iter().map(|s| parse("b", s, prec)).collect::<Result<Vec<_>>>()?;
                I::KarlssonMulti { a: scalar("a", &self.a)?, b, p: self.p.clone(), family: family()? }
            }
            Identity::Gasper => I::Gasper {
                a: scalar("a", &self.a)?,
                b: one_b()?,
                c: scalar("c", &self.c)?,
                family: family()?,
            },
            Identity::Mp2012Sum => I::Mp2012Sum {
                a: scalar("a", &self.a)?,
                b: one_b()?,
                c: scalar("c", &self.c)?,
                family: family()?,
            },
            Identity::QSummation => I::QSummation {
                a: scalar("a", &self.a)?,
                b: one_b()?,
                c: scalar("c", &self.c)?,
                family: family()?,
            },
            Identity::DegenerateSum => {
                I::DegenerateSum { a: scalar("a", &self.a)?, b: one_b()?, p: one_p()?, family: family()? }
            }
            Identity::RecurrenceStep => {
                I::RecurrenceStep { a: scalar("a", &self.a)?, b: one_b()?, p: one_p()?, family: family()? }
            }
            Identity::RecurrenceChain => {
                I::RecurrenceChain { a: scalar("a", &self.a)?, b: one_b()?, p: one_p()?, family: family()? }
            }
            Identity::MpTransform => I::MpTransform {
                a: scalar("a", &self.a)?,
                b: one_b()?,
                c: scalar("c", &self.c)?,
                family: family()?,
                x: scalar("x", &self.x)?,
            },
            Identity::GIdentity => I::GIdentity {
                b: one_b()?,
                c: scalar("c", &self.c)?,
                family: family()?,
                z: scalar("z", &self.z)?,
            },
            Identity::ProductIdentity => I::ProductIdentity {
                a: scalar("a", &self.a)?,
                b: one_b()?,
                c: scalar("c", &self.c)?,
                d: scalar("d", &self.d)?,
                family: family()?,
            },
            Identity::ContiguousShift => I::ContiguousShift { k: k()?, family: family()? },
            Identity::ContiguousVanishing => I::ContiguousVanishing { family: family()? },
            Identity::PochhammerReflectionCheck => {
                I::PochhammerReflectionCheck { b: one_b()?, family: family()? }
            }
        })
    }
}

pub fn parse(name: &str, s: &str, prec: Precision) -> Result<Scalar> {
    Scalar::parse(s, prec).with_context(|| format!("--{name}: cannot parse `{s}`"))
}
