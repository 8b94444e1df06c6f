//! Heat flow against Gaussian closed forms.
//!
//! For g(w) = e^{−β|w|²} on ℝ² the flow is explicit:
//! g^{(t)}(a) = (1 + 4tβ)^{−1} e^{−β|a|²/(1+4tβ)}, which pins every time
//! slice used below (t = 1/4 borderline, t = 1/2 Berezin).

use focklab_core::fock::{ConstSymbol, FockContext, GaussianSymbol};
use focklab_core::heat::{
    berezin_transform, heat_transform, quarter_bound_margin, semigroup_residual, HeatQuery,
};
use focklab_core::numint::AdaptiveSpec;
use focklab_core::util::norm_sq;
use focklab_core::{NumError, C64};

fn spec() -> AdaptiveSpec {
    AdaptiveSpec {
        initial: 8,
        max_refine: 8,
        rel_tol: 1e-9,
    }
}

fn gaussian_flow(beta: f64, t: f64, a: &[f64]) -> f64 {
    let s = 1.0 + 4.0 * t * beta;
    (-beta * norm_sq(a) / s).exp() / s
}

#[test]
fn heat_of_constant_is_constant() {
    let ctx = FockContext::new(1).unwrap();
    let c = ConstSymbol(C64::new(2.5, -1.0));
    for t in [0.25, 0.5, 1.0] {
        let q = HeatQuery::new(t, vec![1.0, -3.0]).unwrap();
        let r = heat_transform(ctx, &c, &q, &spec()).unwrap();
        assert!((r.value - c.0).norm() < 1e-9);
    }
}

#[test]
fn heat_of_gaussian_matches_closed_form() {
    let ctx = FockContext::new(1).unwrap();
    let g = GaussianSymbol::centered(0.5, 2);
    let q = HeatQuery::new(0.25, vec![1.0, 0.0]).unwrap();
    let r = heat_transform(ctx, &g, &q, &spec()).unwrap();
    assert!(r.converged);
    // frozen value of (3/2)^{−1} e^{−1/3}
    assert!((r.value.re - 0.477687540382526).abs() < 1e-12);
    assert!((r.value.re - gaussian_flow(0.5, 0.25, &q.a)).abs() < 1e-12);
}

#[test]
fn berezin_of_unit_gaussian_matches_closed_form() {
    // (e^{−|w|²})~(a) = (1/3)·e^{−|a|²/3}
    let ctx = FockContext::new(1).unwrap();
    let g = GaussianSymbol::centered(1.0, 2);
    for a in [[0.0, 0.0], [1.0, 0.0], [0.0, -1.5], [2.0, 1.0]] {
        let want = (1.0 / 3.0) * (-norm_sq(&a) / 3.0).exp();
        let r = berezin_transform(ctx, &g, &a, &spec()).unwrap();
        assert!(
            (r.value.re - want).abs() < 1e-10 * want.max(1e-8),
            "a = {a:?}"
        );
        assert!(r.value.im.abs() < 1e-12);
    }
}

#[test]
fn borderline_bound_holds_with_positive_margin() {
    let ctx = FockContext::new(1).unwrap();
    let symbols = [
        GaussianSymbol::centered(1.0, 2),
        GaussianSymbol::centered(0.5, 2),
        GaussianSymbol::centered(2.0, 2),
    ];
    for g in &symbols {
        for a in [[0.0, 0.0], [1.0, 1.0], [0.0, -2.0]] {
            let qb = quarter_bound_margin(ctx, g, &a, &spec()).unwrap();
            assert!(qb.converged);
            assert!(qb.lhs < qb.rhs, "lhs {} rhs {}", qb.lhs, qb.rhs);
        }
    }
}

#[test]
fn semigroup_identity_holds_for_gaussian() {
    let ctx = FockContext::new(1).unwrap();
    let g = GaussianSymbol::centered(0.5, 2);
    // the nested evaluation multiplies quadrature depths; a modest budget
    // still leaves the residual far below the closed-form scale
    let loose = AdaptiveSpec {
        initial: 16,
        max_refine: 2,
        rel_tol: 1e-7,
    };
    let res = semigroup_residual(ctx, &g, 0.125, 0.125, &[1.0, 0.0], &loose).unwrap();
    assert!(res < 1e-6, "residual {res}");
    // and the composed value agrees with the closed form at s + t
    let q = HeatQuery::new(0.25, vec![1.0, 0.0]).unwrap();
    let direct = heat_transform(ctx, &g, &q, &spec()).unwrap();
    assert!((direct.value.re - gaussian_flow(0.5, 0.25, &[1.0, 0.0])).abs() < 1e-10);
}

#[test]
fn heat_query_rejects_nonpositive_time() {
    assert!(matches!(
        HeatQuery::new(0.0, vec![0.0, 0.0]),
        Err(NumError::InvalidArgument(_))
    ));
    assert!(matches!(
        HeatQuery::new(-1.0, vec![0.0, 0.0]),
        Err(NumError::InvalidArgument(_))
    ));
}

#[test]
fn heat_transform_rejects_dimension_mismatch() {
    let ctx = FockContext::new(1).unwrap();
    let g = GaussianSymbol::centered(1.0, 2);
    let q = HeatQuery::new(0.5, vec![0.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(matches!(
        heat_transform(ctx, &g, &q, &spec()),
        Err(NumError::InvalidArgument(_))
    ));
}
