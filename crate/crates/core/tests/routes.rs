//! The two ways of feeding the zeros of Q into a series must agree.

use hyperid::harness::{sample, SamplerSpec};
use hyperid::identities::{
    g_identity_with, mp_transform_with, product_identity_with, Identity, IdentityInput, IdentityReport,
    ZetaRoute,
};
use hyperid::numerics::Precision;
use hyperid::Result;

fn with_route(input: &IdentityInput, prec: Precision, route: ZetaRoute) -> Result<IdentityReport> {
    match input {
        IdentityInput::MpTransform { a, b, c, family, x } => {
            mp_transform_with(a, b, c, family, x, prec, route)
        }
        IdentityInput::GIdentity { b, c, family, z } => g_identity_with(b, c, family, z, prec, route),
        IdentityInput::ProductIdentity { a, b, c, d, family } => {
            product_identity_with(a, b, c, d, family, prec, route)
        }
        other => panic!("{} has no route", other.identity()),
    }
}

fn agree(spec: SamplerSpec) {
    let prec = Precision::DEFAULT;
    for case in sample(&spec, prec).unwrap() {
        let roots = with_route(&case.input, prec, ZetaRoute::Roots).unwrap();
        let pairs = with_route(&case.input, prec, ZetaRoute::PairFactor).unwrap();
        let what = case.input.describe();
        assert!(roots.passes(), "roots route fails at {what}");
        assert!(pairs.passes(), "pair-factor route fails at {what}");
        let tol = 10.0 * (roots.est_error + pairs.est_error);
        assert!(roots.rhs.rel_diff(&pairs.rhs) <= tol, "routes disagree at {what}");
        assert!(roots.lhs.rel_diff(&pairs.lhs) <= tol);
    }
}

#[test]
fn float_routes_agree() {
    for id in [Identity::MpTransform, Identity::GIdentity, Identity::ProductIdentity] {
        agree(SamplerSpec::float(id, 7).with_count(12));
    }
}

#[test]
fn exact_routes_agree() {
    for id in [Identity::MpTransform, Identity::ProductIdentity] {
        agree(SamplerSpec::exact(id, 7).with_count(12));
    }
}
