use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use hyperid::harness::{cross_check, default_specs, verify as run_suite, CrossPair, VerifyReport, GENERATOR};
use hyperid::identities::{
    g_identity_with, karlsson_counterexample, mp_transform_with, product_identity_with, Identity,
    IdentityInput, IdentityReport, Mode,
};
use hyperid::numerics::{Precision, Scalar};

use crate::params::{parse, ParamArgs};
use crate::{Output, TableFormat};

/// Evaluates `input`, honoring the requested route where the identity has one.
fn evaluate(input: &IdentityInput, params: &ParamArgs, prec: Precision) -> hyperid::Result<IdentityReport> {
    let route = params.route();
    match input {
        IdentityInput::MpTransform { a, b, c, family, x } => {
            mp_transform_with(a, b, c, family, x, prec, route)
        }
        IdentityInput::GIdentity { b, c, family, z } => g_identity_with(b, c, family, z, prec, route),
        IdentityInput::ProductIdentity { a, b, c, d, family } => {
            product_identity_with(a, b, c, d, family, prec, route)
        }
        other => other.evaluate(prec),
    }
}

fn identity(name: &str) -> Result<Identity> {
    Ok(name.parse::<Identity>()?)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

#[derive(Serialize)]
struct EvalRecord<'a> {
    input: &'a IdentityInput,
    precision: u32,
    passed: bool,
    report: &'a IdentityReport,
}

pub fn eval(name: &str, params: &ParamArgs, prec: Precision, output: Output) -> Result<ExitCode> {
    let id = identity(name)?;
    let input = params.input(id, prec)?;
    let report = evaluate(&input, params, prec).with_context(|| format!("{id} at {}", input.describe()))?;
    let passed = report.passes();
    let mut out = io::stdout().lock();
    match output {
        Output::Json => {
            let rec = EvalRecord { input: &input, precision: prec.digits(), passed, report: &report };
            writeln!(out, "{}", serde_json::to_string_pretty(&rec)?)?;
        }
        Output::Text => {
            writeln!(out, "identity  {id}")?;
            writeln!(out, "input     {}", input.describe())?;
            writeln!(out, "lhs       {}", report.lhs)?;
            writeln!(out, "rhs       {}", report.rhs)?;
            writeln!(out, "residual  {}", report.residual)?;
            writeln!(out, "mode      {}", mode_name(report.mode))?;
            if report.mode == Mode::Float {
                writeln!(out, "rel       {:e}", report.rel_residual)?;
                writeln!(out, "est       {:e}", report.est_error)?;
            }
            writeln!(out, "status    {}", if passed { "pass" } else { "FAIL" })?;
        }
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

enum Suite {
    Identity(Identity),
    Cross(CrossPair),
}

fn suites(names: &[String]) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for raw in names {
        let name = raw.trim();
        match name {
            "" => continue,
            "all" => {
                out.extend(Identity::ALL.into_iter().map(Suite::Identity));
                out.extend(CrossPair::ALL.into_iter().map(Suite::Cross));
            }
            "cross" => out.extend(CrossPair::ALL.into_iter().map(Suite::Cross)),
            _ => match name.split_once("->") {
                Some((a, b)) => out.push(Suite::Cross(CrossPair::find(identity(a)?, identity(b)?)?)),
                None => out.push(Suite::Identity(identity(name)?)),
            },
        }
    }
    if out.is_empty() {
        bail!("no suites selected");
    }
    Ok(out)
}

#[derive(Serialize)]
struct VerifyDocument {
    generator: &'static str,
    seed: u64,
    precision: u32,
    unexpected: usize,
    reports: Vec<VerifyReport>,
}

pub fn verify(
    names: &[String],
    seed: u64,
    count: Option<usize>,
    out_file: Option<&Path>,
    prec: Precision,
    output: Output,
) -> Result<ExitCode> {
    let mut reports = Vec::new();
    for suite in suites(names)? {
        match suite {
            Suite::Identity(id) => {
                for mut spec in default_specs(id, seed) {
                    if let (Some(n), false) = (count, id == Identity::KarlssonCounterexample) {
                        spec = spec.with_count(n);
                    }
                    reports.push(run_suite(&spec, prec));
                }
            }
            Suite::Cross(pair) => {
                let mut spec = pair.default_spec(seed);
                if let Some(n) = count {
                    spec = spec.with_count(n);
                }
                reports.push(cross_check(pair, &spec, prec)?);
            }
        }
    }
    let unexpected = reports.iter().map(|r| r.summary.unexpected).sum();
    let doc = VerifyDocument { generator: GENERATOR, seed, precision: prec.digits(), unexpected, reports };
    let json = serde_json::to_string_pretty(&doc)?;
    if let Some(path) = out_file {
        fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut out = io::stdout().lock();
    match output {
        Output::Json => writeln!(out, "{json}")?,
        Output::Text => {
            writeln!(
                out,
                "{:<36} {:<5} {:>5} {:>6} {:>6} {:>6} {:>9} {:>10}  status",
                "suite", "mode", "run", "exact", "float", "failed", "resampled", "worst rel"
            )?;
            for r in &doc.reports {
                let s = &r.summary;
                let status = match (r.ok(), r.expect_failure) {
                    (true, true) => "ok (expected failure)",
                    (true, false) => "ok",
                    (false, _) => "UNEXPECTED",
                };
                let mode = match r.mode {
                    hyperid::harness::SampleMode::Exact => "exact",
                    hyperid::harness::SampleMode::Float => "float",
                };
                writeln!(
                    out,
                    "{:<36} {:<5} {:>5} {:>6} {:>6} {:>6} {:>9} {:>10.2e}  {status}",
                    r.identity,
                    mode,
                    s.cases_run,
                    s.cases_exact_pass,
                    s.cases_float_pass,
                    s.cases_failed,
                    s.cases_resampled,
                    s.worst_rel_residual
                )?;
            }
            writeln!(out, "seed {seed}, precision {}, unexpected outcomes: {unexpected}", prec.digits())?;
        }
    }
    Ok(if unexpected == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

const ISOLATED_POINT: &str = "\
With a = -4 the series terminates (five terms), although Re(1-a-m) = 5 - 15 < 0
lies outside the range where Karlsson's formula holds. The closed form, continued
analytically in a, does not give the value of the sum here: a = -k with k < m is an
isolated point of summability, and there the sum is given by the extension of
Minton's formula to 0 <= k <= m-1, whose residual is zero.";

pub fn counterexample(prec: Precision, output: Output) -> Result<ExitCode> {
    let ce = karlsson_counterexample(prec)?;
    let mut out = io::stdout().lock();
    match output {
        Output::Json => writeln!(out, "{}", serde_json::to_string_pretty(&ce)?)?,
        Output::Text => {
            writeln!(
                out,
                "a = {}, b = {}, c = b+1 = {}, f = ({}), m = ({})",
                ce.a,
                ce.b,
                ce.c,
                join(ce.family.f()),
                join(ce.family.m())
            )?;
            writeln!(out, "terminating sum          {}", ce.lhs)?;
            writeln!(out, "Karlsson closed form     {}", ce.karlsson_rhs)?;
            writeln!(out, "difference               {}", ce.difference)?;
            writeln!(out, "extended Minton formula  {}", ce.extension_rhs)?;
            writeln!(out, "its residual             {}", ce.extension_residual)?;
            writeln!(out)?;
            writeln!(out, "{ISOLATED_POINT}")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
struct Row {
    value: String,
    lhs: Option<String>,
    rhs: Option<String>,
    residual: Option<String>,
    mode: Option<&'static str>,
    rel_residual: Option<f64>,
    passed: bool,
    error: Option<String>,
}

/// Grid points `from + i (to - from)/(steps - 1)`, exact when the endpoints are.
fn grid(vary: &str, from: &str, to: &str, steps: usize, prec: Precision) -> Result<Vec<String>> {
    if vary == "k" {
        let lo: usize = from.parse().context("--from must be a nonnegative integer when varying k")?;
        let hi: usize = to.parse().context("--to must be a nonnegative integer when varying k")?;
        return Ok((lo..=hi).map(|k| k.to_string()).collect());
    }
    if steps == 0 {
        bail!("--steps must be positive");
    }
    let lo = parse("from", from, prec)?;
    let hi = parse("to", to, prec)?;
    if steps == 1 {
        return Ok(vec![lo.to_string()]);
    }
    let h = &(&hi - &lo) / &Scalar::int(steps as i64 - 1);
    Ok((0..steps).map(|i| (&lo + &(&h * &Scalar::int(i as i64))).to_string()).collect())
}

#[allow(clippy::too_many_arguments)]
pub fn table(
    name: &str,
    vary: &str,
    from: &str,
    to: &str,
    steps: usize,
    format: TableFormat,
    mut params: ParamArgs,
    prec: Precision,
) -> Result<ExitCode> {
    let id = identity(name)?;
    let mut rows = Vec::new();
    for value in grid(vary, from, to, steps, prec)? {
        params.set(vary, value.clone())?;
        let result = params.input(id, prec).and_then(|i| Ok(evaluate(&i, &params, prec)?));
        rows.push(match result {
            Ok(r) => Row {
                value,
                passed: r.passes(),
                lhs: Some(r.lhs.to_string()),
                rhs: Some(r.rhs.to_string()),
                residual: Some(r.residual.to_string()),
                mode: Some(mode_name(r.mode)),
                rel_residual: Some(r.rel_residual),
                error: None,
            },
            Err(e) => Row {
                value,
                lhs: None,
                rhs: None,
                residual: None,
                mode: None,
                rel_residual: None,
                passed: false,
                error: Some(format!("{e:#}")),
            },
        });
    }
    let stdout = io::stdout().lock();
    match format {
        TableFormat::Json => {
            let mut out = stdout;
            writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
        }
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(stdout);
            w.write_record([vary, "lhs", "rhs", "residual", "mode", "rel_residual", "passed", "error"])?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
