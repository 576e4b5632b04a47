//! Acceptance gate. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::process::ExitCode;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperid::combinatorics::{c_coeff, c_coeff_series, terminating_unit, NorlundContext};
use hyperid::harness::{
    cross_check, default_specs, verify, CrossPair, SampleMode, SamplerSpec, VerifyReport,
};
use hyperid::identities::{karlsson_counterexample, Identity, IdentityInput, Mode};
use hyperid::numerics::{factorial, pochhammer, ExactRational, Precision, Scalar, ShiftedFamily};
use hyperid::polynomials::{build_q, roots};

const SEED: u64 = 42;

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn scalar(v: &Q) -> Scalar {
    Scalar::from(ExactRational::from(v.clone()))
}

/// `sum_n prod (top)_n / prod (bottom)_n x^n / n!`, summed directly over the
/// terminating range.
fn finite_hyp(top: &[Q], bottom: &[Q], x: &Q) -> Q {
    let mut sum = Q::zero();
    let mut term = Q::one();
    for n in 0..10_000i64 {
        if term.is_zero() {
            return sum;
        }
        sum += &term;
        let nq = Q::from_integer(n.into());
        let mut num = x.clone();
        for t in top {
            num *= t + &nq;
        }
        let mut den = Q::from_integer((n + 1).into());
        for b in bottom {
            den *= b + &nq;
        }
        assert!(!den.is_zero(), "bottom parameter hit zero before termination");
        term = term * num / den;
    }
    panic!("series did not terminate");
}

fn family(f: &[Q], m: &[usize]) -> ShiftedFamily {
    ShiftedFamily::new(f.iter().map(scalar).collect(), m.to_vec()).unwrap()
}

fn with_family(top: &[Q], bottom: &[Q], f: &[Q], m: &[usize]) -> (Vec<Q>, Vec<Q>) {
    let mut t = top.to_vec();
    t.extend(f.iter().zip(m).map(|(fi, &mi)| fi + Q::from_integer((mi as i64).into())));
    let mut b = bottom.to_vec();
    b.extend(f.iter().cloned());
    (t, b)
}

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, label: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag}  {label}: {detail}");
        if !ok {
            self.failed += 1;
        }
    }
}

fn exact_suites(reports: &[VerifyReport], gate: &mut Gate) {
    let names = [
        "minton",
        "minton_extended",
        "degenerate_sum",
        "contiguous_shift",
        "pochhammer_reflection_check",
        "karlsson",
        "karlsson_multi",
        "gasper",
        "mp2012_sum",
        "q_summation",
        "product_identity",
        "recurrence_step",
    ];
    let mut bad = Vec::new();
    for name in names {
        let r = reports
            .iter()
            .find(|r| r.identity == name && r.mode == SampleMode::Exact)
            .expect("suite present");
        let exact_zero = r.cases.iter().all(|c| c.residual.as_ref().is_some_and(Scalar::is_exact_zero));
        if r.summary.cases_run != 200 || r.summary.cases_exact_pass != 200 || !exact_zero {
            bad.push(format!("{name} ({} of {} exact)", r.summary.cases_exact_pass, r.summary.cases_run));
        }
    }
    let detail = if bad.is_empty() {
        format!("{} suites x 200 rational cases, every residual exactly 0", names.len())
    } else {
        format!("failing: {}", bad.join(", "))
    };
    gate.report("1 exact suites", bad.is_empty(), detail);
}

fn worked_points(gate: &mut Gate) {
    let prec = Precision::DEFAULT;
    let one = q(1, 1);
    let mut bad = Vec::new();
    let check = |label: &str, input: IdentityInput, oracle: Q, frozen: Q| {
        let want = scalar(&frozen);
        let r = input.evaluate(prec).unwrap();
        let ok = oracle == frozen && r.lhs == want && r.rhs == want && r.mode == Mode::Exact;
        (!ok).then(|| format!("{label}: oracle {oracle}, lhs {}, rhs {}", r.lhs, r.rhs))
    };

    let (f, m) = (vec![q(2, 1)], vec![1]);
    let (t, b) = with_family(&[q(-1, 1), q(1, 1)], &[q(2, 1)], &f, &m);
    bad.extend(check(
        "minton",
        IdentityInput::Minton { k: 1, b: Scalar::one(), family: family(&f, &m) },
        finite_hyp(&t, &b, &one),
        q(1, 4),
    ));

    let (f3, m2) = (vec![q(3, 1)], vec![2]);
    let (t, b) = with_family(&[q(-1, 1), q(1, 1)], &[q(2, 1)], &f3, &m2);
    bad.extend(check(
        "minton_extended",
        IdentityInput::MintonExtended { k: 1, b: Scalar::one(), family: family(&f3, &m2) },
        finite_hyp(&t, &b, &one),
        q(1, 6),
    ));

    let (t, b) = with_family(&[q(-1, 1), q(1, 1)], &[q(4, 1)], &f, &m);
    bad.extend(check(
        "q_summation",
        IdentityInput::QSummation {
            a: Scalar::int(-1),
            b: Scalar::one(),
            c: Scalar::int(4),
            family: family(&f, &m),
        },
        finite_hyp(&t, &b, &one),
        q(5, 8),
    ));
    let poly = build_q(&Scalar::one(), &Scalar::int(4), &family(&f, &m), prec).unwrap();
    let zeta = roots(&poly, prec).unwrap();
    if poly.coeffs() != [Scalar::one(), Scalar::ratio(-1, 4)] || zeta.roots() != [Scalar::int(4)] {
        bad.push(format!("Q: coefficients {:?}, zeros {:?}", poly.coeffs(), zeta.roots()));
    }

    // a = 1 shifts the family to f + a = 3.
    let (t, b) = with_family(&[q(-1, 1), q(2, 1)], &[q(5, 1)], &[q(3, 1)], &m);
    bad.extend(check(
        "product_identity",
        IdentityInput::ProductIdentity {
            a: Scalar::one(),
            b: Scalar::one(),
            c: Scalar::int(4),
            d: Scalar::int(-1),
            family: family(&f, &m),
        },
        finite_hyp(&t, &b, &one),
        q(7, 15),
    ));

    // sum_k F(-k, f+m; f) (b)_k (a-k)_{p-1} / k! with a = b = 1, p = 2.
    let mut degenerate = Q::zero();
    for k in 0..=1i64 {
        let (t, b) = with_family(&[q(-k, 1)], &[], &f, &m);
        let mut w = finite_hyp(&t, &b, &one);
        for i in 0..k {
            w *= q(1 + i, 1 + i);
        }
        w *= q(1 - k, 1);
        degenerate += w;
    }
    bad.extend(check(
        "degenerate_sum",
        IdentityInput::DegenerateSum { a: Scalar::one(), b: Scalar::one(), p: 2, family: family(&f, &m) },
        degenerate,
        q(1, 1),
    ));

    let (t, b) = with_family(&[q(-1, 1), q(1, 1)], &[q(4, 1)], &f, &m);
    bad.extend(check(
        "mp_transform",
        IdentityInput::MpTransform {
            a: Scalar::int(-1),
            b: Scalar::one(),
            c: Scalar::int(4),
            family: family(&f, &m),
            x: Scalar::ratio(1, 4),
        },
        finite_hyp(&t, &b, &q(1, 4)),
        q(29, 32),
    ));

    let ok = bad.is_empty();
    let detail = if ok {
        "1/4, 1/6, 5/8 (Q = 1 - t/4, zeros (4)), 7/15, 1, 29/32 on both sides".to_string()
    } else {
        bad.join("; ")
    };
    gate.report("2 worked points", ok, detail);
}

fn counterexample(gate: &mut Gate) {
    let a = karlsson_counterexample(Precision::DEFAULT).unwrap();
    let b = karlsson_counterexample(Precision::new(100).unwrap()).unwrap();
    let f = [q(21, 5), q(-5, 3)];
    let (t, bot) = with_family(&[q(-4, 1), q(33, 17)], &[q(50, 17)], &f, &[7, 8]);
    let oracle = scalar(&finite_hyp(&t, &bot, &q(1, 1)));
    let ok = a.lhs == oracle
        && a.difference.is_exact()
        && !a.difference.is_zero()
        && a.difference == b.difference
        && a.extension_residual.is_exact_zero();
    gate.report(
        "3 counterexample",
        ok,
        format!("lhs - rhs = {} (exact, nonzero, same at 100 digits)", a.difference),
    );
}

fn float_suites(reports: &[VerifyReport], gate: &mut Gate) {
    let names =
        ["karlsson", "gasper", "mp2012_sum", "q_summation", "product_identity", "g_identity", "mp_transform"];
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for name in names {
        let r = reports
            .iter()
            .find(|r| r.identity == name && r.mode == SampleMode::Float)
            .expect("suite present");
        let no_convergence = r
            .cases
            .iter()
            .filter(|c| c.error.as_deref().is_some_and(|e| e.contains("did not converge")))
            .count();
        let within = r.cases.iter().all(|c| match (c.rel_residual, c.est_error, c.mode) {
            (Some(rel), Some(est), Some(Mode::Float)) => rel <= 10.0 * est,
            _ => false,
        });
        worst = worst.max(r.summary.worst_rel_residual);
        if r.summary.cases_run != 100 || r.summary.cases_float_pass != 100 || !within || no_convergence > 0 {
            bad.push(format!(
                "{name} ({} of {} pass, {no_convergence} without convergence)",
                r.summary.cases_float_pass, r.summary.cases_run
            ));
        }
    }
    let margin = names.iter().all(|n| {
        let spec = SamplerSpec::float(n.parse().unwrap(), SEED);
        spec.convergence_margin >= 1.0
    });
    let ok = bad.is_empty() && margin && Precision::DEFAULT.digits() == 50;
    let detail = if ok {
        format!(
            "{} suites x 100 cases at 50 digits, excess >= 1, worst rel residual {worst:.1e}",
            names.len()
        )
    } else {
        format!("failing: {}", bad.join(", "))
    };
    gate.report("4 float suites", ok, detail);
}

fn cross_checks(reports: &[VerifyReport], gate: &mut Gate) {
    let mut bad = Vec::new();
    for pair in CrossPair::ALL {
        let r = reports.iter().find(|r| r.identity == pair.name()).expect("cross-check present");
        if r.summary.cases_run != 100 || r.summary.cases_failed != 0 {
            bad.push(format!("{} ({} disagreements)", pair.name(), r.summary.cases_failed));
        }
    }
    let ok = bad.is_empty();
    let detail = if ok {
        let names: Vec<String> = CrossPair::ALL.iter().map(|p| p.name()).collect();
        format!("0 disagreements in 100 cases each: {}", names.join(", "))
    } else {
        bad.join(", ")
    };
    gate.report("5 cross-checks", ok, detail);
}

fn rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-40..=40), rng.gen_range(1..=12))
}

fn random_family(rng: &mut ChaCha8Rng) -> (Vec<Q>, Vec<usize>) {
    loop {
        let r = rng.gen_range(1..=3);
        let f: Vec<Q> = (0..r).map(|_| rational(rng)).collect();
        let m: Vec<usize> = (0..r).map(|_| rng.gen_range(1..=4)).collect();
        if f.iter().all(|fi| !(fi.is_integer() && !fi.is_positive())) {
            return (f, m);
        }
    }
}

fn combinatorics(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();

    for i in 0..50 {
        let (f, m) = random_family(&mut rng);
        let fam = family(&f, &m);
        for k in 0..=fam.m_total() {
            if c_coeff(&fam, k).unwrap() != c_coeff_series(&fam, k).unwrap() {
                bad.push(format!("C_{{{k},r}} family {i}"));
            }
        }
    }

    for i in 0..50 {
        let q_len = rng.gen_range(2..=4);
        let a: Vec<Scalar> = (0..q_len - 1).map(|_| scalar(&rational(&mut rng))).collect();
        let b: Vec<Scalar> = (0..q_len).map(|_| scalar(&rational(&mut rng))).collect();
        let ctx = NorlundContext::new(a, b).unwrap();
        let g = ctx.g_upto(2);
        if g[0] != Scalar::one() || g[1] != ctx.g1_closed() || g[2] != ctx.g2_closed() {
            bad.push(format!("g1/g2 context {i}"));
        }
    }

    for i in 0..50 {
        let (f, m) = random_family(&mut rng);
        let fam = family(&f, &m);
        let mt = fam.m_total();
        let (t, bot) = with_family(&[q(-(mt as i64), 1)], &[], &f, &m);
        let direct = scalar(&finite_hyp(&t, &bot, &q(1, 1)));
        let poch: Scalar = f.iter().zip(&m).map(|(fi, &mi)| pochhammer(&scalar(fi), mi)).product();
        let closed = &(sign_of(mt) * factorial(mt)) / &poch;
        if direct != closed || terminating_unit(&fam, mt) != direct {
            bad.push(format!("F(-m, f+m; f) family {i}"));
        }
    }

    let ok = bad.is_empty();
    let detail = if ok {
        "both C_{k,r} forms, g1/g2 closed forms, F(-m, f+m; f) = (-1)^m m!/(f)_m on 50 draws each".to_string()
    } else {
        bad.join(", ")
    };
    gate.report("6 combinatorics", ok, detail);
}

fn sign_of(m: usize) -> Scalar {
    if m.is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

/// Every default suite and every cross-check, in the order `verify --suite all` runs them.
fn run_all(prec: Precision) -> Vec<VerifyReport> {
    let mut reports: Vec<VerifyReport> =
        Identity::ALL.iter().flat_map(|&id| default_specs(id, SEED)).map(|s| verify(&s, prec)).collect();
    for pair in CrossPair::ALL {
        reports.push(cross_check(pair, &pair.default_spec(SEED), prec).unwrap());
    }
    reports
}

fn main() -> ExitCode {
    let prec = Precision::new(50).unwrap();
    let mut gate = Gate { failed: 0 };
    let reports = run_all(prec);

    exact_suites(&reports, &mut gate);
    worked_points(&mut gate);
    counterexample(&mut gate);
    float_suites(&reports, &mut gate);
    cross_checks(&reports, &mut gate);
    combinatorics(&mut gate);

    let first = serde_json::to_vec(&reports).unwrap();
    let second = serde_json::to_vec(&run_all(prec)).unwrap();
    gate.report(
        "7 determinism",
        first == second,
        format!("two seed-{SEED} runs of every suite: {} bytes, identical: {}", first.len(), first == second),
    );

    let unexpected: usize = reports.iter().map(|r| r.summary.unexpected).sum();
    println!("      unexpected outcomes over all suites: {unexpected}");

    if gate.failed == 0 {
        println!("acceptance: all 7 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failed);
        ExitCode::FAILURE
    }
}
