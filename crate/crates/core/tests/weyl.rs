//! Discretized Weyl calculus on L²(ℝ): kernel routes, support structure,
//! and norm identities.

use focklab_core::blocks::{a_r_l2_norm, ARSymbol, BumpProfile};
use focklab_core::fock::GaussianSymbol;
use focklab_core::numint::AdaptiveSpec;
use focklab_core::weyl::{
    hs_norm, operator_norm_disc, weyl_kernel, weyl_kernel_value_direct, PhaseSpaceGrid,
};

fn spec() -> AdaptiveSpec {
    AdaptiveSpec {
        initial: 8,
        max_refine: 8,
        rel_tol: 1e-9,
    }
}

#[test]
fn grid_spacing_and_frequency_window_are_dual() {
    let grid = PhaseSpaceGrid::new(8.0, 512).unwrap();
    assert!((grid.h() - 0.03125).abs() < 1e-15);
    assert!((grid.xi_max() - core::f64::consts::PI / grid.h()).abs() < 1e-9);
    // midpoint grid: first node half a step inside the window
    assert!((grid.x(0) - (-8.0 + 0.5 * grid.h())).abs() < 1e-12);
    assert!((grid.x(511) - (8.0 - 0.5 * grid.h())).abs() < 1e-12);
    assert!(PhaseSpaceGrid::new(8.0, 100).is_err());
    assert!(PhaseSpaceGrid::new(-1.0, 512).is_err());
}

#[test]
fn fft_kernel_matches_direct_integral_for_gaussian() {
    let g = GaussianSymbol::centered(1.0, 2);
    let grid = PhaseSpaceGrid::new(8.0, 512).unwrap();
    let k = weyl_kernel(&g, &grid).unwrap();
    let mut kmax = 0.0f64;
    for v in &k.matrix.data {
        kmax = kmax.max(v.norm());
    }
    for (i, j) in [(256, 256), (260, 250), (300, 290), (120, 140), (400, 395)] {
        let direct =
            weyl_kernel_value_direct(&g, grid.x(i), grid.x(j), grid.xi_max(), &spec());
        let gap = (k.matrix.at(i, j) - direct).norm();
        assert!(gap < 1e-10 * kmax, "entry ({i},{j}): gap {gap}");
    }
}

#[test]
fn band_limited_kernel_has_strict_offdiagonal_support() {
    // band R/2 ⇒ kernel vanishes for |x − y| > R/2
    let p = BumpProfile::new(2).unwrap();
    let a = ARSymbol::new(p, 4.0).unwrap();
    let grid = PhaseSpaceGrid::new(8.0, 512).unwrap();
    let k = weyl_kernel(&a, &grid).unwrap();
    assert!(k.bandwidth_ok);
    let mut kmax = 0.0f64;
    for v in &k.matrix.data {
        kmax = kmax.max(v.norm());
    }
    let mut beyond = 0.0f64;
    for i in 0..512 {
        for j in 0..512 {
            if (grid.x(i) - grid.x(j)).abs() > 2.5 {
                beyond = beyond.max(k.matrix.at(i, j).norm());
            }
        }
    }
    assert!(beyond < 1e-7 * kmax, "leak {beyond} vs peak {kmax}");
}

#[test]
fn real_symbol_kernel_is_hermitian() {
    let p = BumpProfile::new(2).unwrap();
    let a = ARSymbol::new(p, 4.0).unwrap();
    let grid = PhaseSpaceGrid::new(8.0, 512).unwrap();
    let k = weyl_kernel(&a, &grid).unwrap();
    let mut kmax = 0.0f64;
    for v in &k.matrix.data {
        kmax = kmax.max(v.norm());
    }
    let mut defect = 0.0f64;
    for i in 0..512 {
        for j in 0..512 {
            defect = defect.max((k.matrix.at(i, j) - k.matrix.at(j, i).conj()).norm());
        }
    }
    assert!(defect < 1e-12 * kmax);
}

#[test]
fn gaussian_symbol_quantizes_to_rank_one_projector_scale() {
    // e^{−|z|²} quantizes to a rank-one operator with ‖·‖ = ‖·‖_HS = 1/2
    let g = GaussianSymbol::centered(1.0, 2);
    let grid = PhaseSpaceGrid::new(8.0, 512).unwrap();
    let k = weyl_kernel(&g, &grid).unwrap();
    let hs = hs_norm(&k);
    assert!((hs - 0.5).abs() < 1e-4, "hs = {hs}");
    let op = operator_norm_disc(&k, 1e-10);
    assert!(op.converged);
    assert!((op.value - hs).abs() < 1e-6, "op {} vs hs {hs}", op.value);
}

#[test]
fn hilbert_schmidt_norm_matches_symbol_l2_norm() {
    // ‖Op(a)‖_HS = (2π)^{−1/2} ‖a‖₂ for R = 4 and R = 8 on the same grid
    let p = BumpProfile::new(2).unwrap();
    let grid = PhaseSpaceGrid::new(8.0, 512).unwrap();
    for r in [4.0, 8.0] {
        let a = ARSymbol::new(p, r).unwrap();
        let k = weyl_kernel(&a, &grid).unwrap();
        let hs = hs_norm(&k);
        let want = a_r_l2_norm(&p, r, &spec()).unwrap() / (2.0 * core::f64::consts::PI).sqrt();
        let rel = (hs - want).abs() / want;
        assert!(rel < 1e-3, "R = {r}: rel {rel}");
    }
}

#[test]
fn operator_norm_envelope_beyond_toeplitz_budget() {
    // at R = 16 only the Weyl route is evaluable; ‖Op(a_R)‖·R stays under
    // the Hilbert–Schmidt envelope (2π)^{−1/2}‖a₁‖₂ = 3.6902
    let p = BumpProfile::new(2).unwrap();
    let a = ARSymbol::new(p, 16.0).unwrap();
    let grid = PhaseSpaceGrid::new(8.0, 512).unwrap();
    let k = weyl_kernel(&a, &grid).unwrap();
    assert!(k.bandwidth_ok);
    let op = operator_norm_disc(&k, 1e-10);
    let product = op.value * 16.0;
    assert!(
        (2.2..=2.4).contains(&product),
        "op·R = {product} (frozen 2.312)"
    );
    assert!(product <= 3.69016360 * 1.01);
}
