//! Randomized invariants. Quadrature-heavy properties run with small case
//! counts; the cheap algebraic ones keep the proptest default.

use focklab_core::blocks::{a_r_value, BumpProfile};
use focklab_core::fock::{
    hermitian_pairing, norm2a, repro_kernel, ConstSymbol, FockContext, GaussianSymbol,
};
use focklab_core::heat::{heat_transform, quarter_bound_margin, HeatQuery};
use focklab_core::numint::{integrate_gaussian, AdaptiveSpec};
use focklab_core::util::norm_sq;
use focklab_core::C64;
use proptest::prelude::*;

fn spec() -> AdaptiveSpec {
    AdaptiveSpec {
        initial: 8,
        max_refine: 8,
        rel_tol: 1e-9,
    }
}

fn point() -> impl Strategy<Value = [f64; 2]> {
    [-4.0f64..4.0, -4.0f64..4.0].prop_map(|[x, y]| [x, y])
}

proptest! {
    // |K(z, w)|² ≤ K(z, z)·K(w, w): positivity of the kernel
    #[test]
    fn kernel_cauchy_schwarz(z in point(), w in point()) {
        let ctx = FockContext::new(1).unwrap();
        let lhs = repro_kernel(ctx, &z, &w).norm().powi(2);
        let rhs = repro_kernel(ctx, &z, &z).re * repro_kernel(ctx, &w, &w).re;
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn pairing_is_hermitian(z in point(), w in point()) {
        let a = hermitian_pairing(&z, &w);
        let b = hermitian_pairing(&w, &z);
        prop_assert!((a - b.conj()).norm() < 1e-12 * (1.0 + a.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // the blocks stay inside the closed unit disk of values
    #[test]
    fn block_values_stay_bounded(
        r in 1.0f64..8.0,
        z in point(),
    ) {
        let p = BumpProfile::new(2).unwrap();
        let v = a_r_value(&p, r, &z, &spec()).unwrap();
        prop_assert!(v.value.norm() <= 1.0 + 1e-8);
    }

    // a_R(z) = a₁(Rz): dilation covariance of the block family
    #[test]
    fn block_dilation_covariance(
        r in 1.0f64..8.0,
        z in [-2.0f64..2.0, -2.0f64..2.0],
    ) {
        let p = BumpProfile::new(2).unwrap();
        let lhs = a_r_value(&p, r, &z, &spec()).unwrap().value;
        let rhs = a_r_value(&p, 1.0, &[r * z[0], r * z[1]], &spec()).unwrap().value;
        prop_assert!((lhs - rhs).norm() < 1e-7);
    }

    // heat flow of a Gaussian symbol matches the closed form at every time
    #[test]
    fn gaussian_heat_flow_closed_form(
        beta in 0.25f64..2.0,
        t in 0.1f64..1.0,
        a in point(),
    ) {
        let ctx = FockContext::new(1).unwrap();
        let g = GaussianSymbol::centered(beta, 2);
        let q = HeatQuery::new(t, a.to_vec()).unwrap();
        let got = heat_transform(ctx, &g, &q, &spec()).unwrap();
        let s = 1.0 + 4.0 * t * beta;
        let want = (-beta * norm_sq(&a) / s).exp() / s;
        prop_assert!((got.value.re - want).abs() < 1e-8 * want.max(1e-10));
        prop_assert!(got.value.im.abs() < 1e-12);
    }

    // ‖e^{−β|w|²}‖²_{2,a} = (1+4β)^{−1} e^{−2β|a|²/(1+4β)}
    #[test]
    fn gaussian_weighted_norm_closed_form(
        beta in 0.25f64..2.0,
        a in point(),
    ) {
        let ctx = FockContext::new(1).unwrap();
        let g = GaussianSymbol::centered(beta, 2);
        let n = norm2a(ctx, &g, &a, &spec()).unwrap();
        let s = 1.0 + 4.0 * beta;
        let want = ((-2.0 * beta * norm_sq(&a) / s).exp() / s).sqrt();
        prop_assert!((n.linear - want).abs() < 1e-8 * want.max(1e-10));
    }

    // the borderline time-1/4 value never beats 2ⁿ times the weighted norm
    #[test]
    fn borderline_bound_never_violated(
        beta in 0.25f64..2.0,
        a in point(),
    ) {
        let ctx = FockContext::new(1).unwrap();
        let g = GaussianSymbol::centered(beta, 2);
        let qb = quarter_bound_margin(ctx, &g, &a, &spec()).unwrap();
        prop_assert!(qb.lhs <= qb.rhs * (1.0 + 1e-9));
    }

    // Gaussian weight mass: ∫ e^{−|w−c|²/(2σ²)} dv = 2πσ²
    #[test]
    fn gaussian_weight_mass_scales(
        sigma2 in 0.25f64..4.0,
        c in point(),
    ) {
        let one = ConstSymbol(C64::new(1.0, 0.0));
        let r = integrate_gaussian(&one, &c, sigma2, &spec()).unwrap();
        let want = 2.0 * core::f64::consts::PI * sigma2;
        prop_assert!((r.value.re - want).abs() < 1e-8 * want);
    }
}
