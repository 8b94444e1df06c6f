//! Quadrature layer against closed forms.

use focklab_core::fock::{ClosureSymbol, ConstSymbol, DecayClass, GaussianSymbol};
use focklab_core::numint::{
    hermite_rule, integrate_box, integrate_gaussian, panel_rule, AdaptiveSpec, Box2n,
};
use focklab_core::util::SplitMix64;
use focklab_core::{NumError, C64};

fn spec() -> AdaptiveSpec {
    AdaptiveSpec {
        initial: 8,
        max_refine: 8,
        rel_tol: 1e-9,
    }
}

#[test]
fn hermite_rule_reproduces_even_moment_exactly() {
    // ∫ t²⁰ e^{−t²} dt = √π · 654729075/1024, exact for order ≥ 11
    let want = core::f64::consts::PI.sqrt() * 654_729_075.0 / 1024.0;
    for order in [11usize, 16, 32, 64] {
        let rule = hermite_rule(order).unwrap();
        let got: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(t, w)| w * t.powi(20))
            .sum();
        assert!(
            (got - want).abs() <= 1e-12 * want,
            "order {order}: {got} vs {want}"
        );
    }
}

#[test]
fn hermite_rule_kills_odd_moments() {
    let rule = hermite_rule(24).unwrap();
    let got: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(t, w)| w * t.powi(7))
        .sum();
    assert!(got.abs() < 1e-12);
}

#[test]
fn gaussian_weight_mass_in_two_dims() {
    // ∫ e^{−|w|²/2} dv = 2π over ℝ²
    let one = ConstSymbol(C64::new(1.0, 0.0));
    let r = integrate_gaussian(&one, &[0.0, 0.0], 1.0, &spec()).unwrap();
    assert!(r.converged);
    assert!((r.value.re - 2.0 * core::f64::consts::PI).abs() < 1e-9);
    assert!(r.value.im.abs() < 1e-12);
}

#[test]
fn gaussian_integral_of_gaussian_symbol() {
    // ∫ e^{−|w|²} e^{−2|w|²} dv = π/3 with σ² = 1/4
    let g = GaussianSymbol::centered(1.0, 2);
    let r = integrate_gaussian(&g, &[0.0, 0.0], 0.25, &spec()).unwrap();
    assert!(r.converged);
    assert!((r.value.re - core::f64::consts::PI / 3.0).abs() < 1e-9);
}

#[test]
fn gaussian_integral_of_odd_integrand_vanishes() {
    let odd = ClosureSymbol::new(DecayClass::Bounded, |z: &[f64]| {
        C64::new(z[0] * z[1].cos(), 0.0)
    });
    let r = integrate_gaussian(&odd, &[0.0, 0.0], 1.0, &spec()).unwrap();
    assert!(r.value.norm() < 1e-10);
}

#[test]
fn gaussian_integral_recenters_on_shifted_weight() {
    // ∫ e^{−|w−c|²/2} dv = 2π independently of c
    let one = ConstSymbol(C64::new(1.0, 0.0));
    for c in [[3.0, -1.0], [0.0, 5.0]] {
        let r = integrate_gaussian(&one, &c, 1.0, &spec()).unwrap();
        assert!((r.value.re - 2.0 * core::f64::consts::PI).abs() < 1e-8);
    }
}

#[test]
fn gaussian_integral_rejects_bad_arguments() {
    let one = ConstSymbol(C64::new(1.0, 0.0));
    assert!(matches!(
        integrate_gaussian(&one, &[0.0, 0.0], 0.0, &spec()),
        Err(NumError::InvalidArgument(_))
    ));
    assert!(matches!(
        integrate_gaussian(&one, &[], 1.0, &spec()),
        Err(NumError::InvalidArgument(_))
    ));
}

#[test]
fn box_rule_integrates_separable_polynomial() {
    // ∫₀¹∫₀¹ x²y³ dx dy = 1/12
    let bx = Box2n::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let r = integrate_box(
        |w: &[f64]| C64::new(w[0] * w[0] * w[1] * w[1] * w[1], 0.0),
        &bx,
        &spec(),
    );
    assert!(r.converged);
    assert!((r.value.re - 1.0 / 12.0).abs() < 1e-12);
}

#[test]
fn box_rule_handles_oscillation_under_refinement() {
    // ∫_{−π}^{π} cos(4x) dx = 0 and ∫ cos²(4x) dx = π
    let pi = core::f64::consts::PI;
    let bx = Box2n::new(vec![-pi], vec![pi]).unwrap();
    let zero = integrate_box(|w: &[f64]| C64::new((4.0 * w[0]).cos(), 0.0), &bx, &spec());
    assert!(zero.value.norm() < 1e-10);
    let mass = integrate_box(
        |w: &[f64]| C64::new((4.0 * w[0]).cos().powi(2), 0.0),
        &bx,
        &spec(),
    );
    assert!((mass.value.re - pi).abs() < 1e-9);
}

#[test]
fn panel_rule_covers_requested_interval() {
    let rule = panel_rule(-2.0, 3.0, 6);
    assert!(rule.nodes.iter().all(|&t| (-2.0..=3.0).contains(&t)));
    let mass: f64 = rule.weights.iter().sum();
    assert!((mass - 5.0).abs() < 1e-12);
}

#[test]
fn box_rejects_inverted_bounds() {
    assert!(Box2n::new(vec![1.0], vec![0.0]).is_err());
}

#[test]
fn splitmix_streams_are_deterministic_and_bounded() {
    let mut a = SplitMix64::new(42);
    let mut b = SplitMix64::new(42);
    for _ in 0..64 {
        let pa = a.next_point(2, 2.5);
        let pb = b.next_point(2, 2.5);
        assert_eq!(pa, pb);
        assert!(pa.iter().all(|x| x.abs() <= 2.5));
    }
    let mut c = SplitMix64::new(43);
    assert_ne!(a.next_point(2, 2.5), c.next_point(2, 2.5));
}
