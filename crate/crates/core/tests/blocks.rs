//! Oscillatory block symbols a_R, their inverse-heat images g_R, and the
//! schedule machinery. The point values below were frozen from a
//! high-precision (40-digit) evaluation of the same integrals.

use focklab_core::blocks::{
    a1_l2_plancherel, a_r_l2_norm, a_r_value, block_symbol, g_r_value, moment_tail_ledger,
    offdiag_heat_sum, star_partial_sum, star_symbolic_rows, BlockSchedule, BumpProfile,
    MomentQuery, ScheduleMode,
};
use focklab_core::fock::FockContext;
use focklab_core::heat::{heat_transform, HeatQuery};
use focklab_core::numint::AdaptiveSpec;
use focklab_core::NumError;

fn spec() -> AdaptiveSpec {
    AdaptiveSpec {
        initial: 8,
        max_refine: 8,
        rel_tol: 1e-9,
    }
}

fn profile() -> BumpProfile {
    BumpProfile::new(2).unwrap()
}

#[test]
fn bump_profile_normalization_and_support() {
    let p = profile();
    // Φ(0) = c_Φ e^{−1} with c_Φ chosen so that ∫Φ = 1
    let c = p.value(&[0.0, 0.0]) * core::f64::consts::E;
    assert!((c - 8.574263103168946).abs() < 1e-10 * c);
    assert_eq!(p.value(&[0.5, 0.0]), 0.0);
    assert_eq!(p.value(&[0.4, 0.4]), 0.0);
    assert!(p.value(&[0.49, 0.0]) > 0.0);
    // ‖Φ‖₂ frozen
    let l2 = p.l2_norm(&spec());
    assert!((l2.value.re - 1.4721622802).abs() < 1e-8);
}

#[test]
fn unit_block_point_values() {
    let p = profile();
    let frozen = [
        (0.5, 0.9959232442431571),
        (1.0, 0.9837675141628837),
        (2.0, 0.9362481097242773),
        (5.0, 0.6492197445820471),
        (10.0, 0.09667019707264175),
        (20.0, 0.007651915092028867),
    ];
    for (x, want) in frozen {
        let v = a_r_value(&p, 1.0, &[x, 0.0], &spec()).unwrap();
        assert!(
            (v.value.re - want).abs() < 1e-8 * want.abs(),
            "a₁({x}) = {} vs {want}",
            v.value.re
        );
        assert!(v.value.im.abs() < 1e-10);
    }
}

#[test]
fn block_is_normalized_and_bounded() {
    let p = profile();
    for r in [1.0, 2.0, 4.0, 8.0] {
        let at0 = a_r_value(&p, r, &[0.0, 0.0], &spec()).unwrap();
        assert!((at0.value.re - 1.0).abs() < 1e-9, "R = {r}");
        for z in [[1.0, 1.0], [3.0, 0.0], [0.0, -6.0], [10.0, 10.0]] {
            let v = a_r_value(&p, r, &z, &spec()).unwrap();
            assert!(v.value.norm() <= 1.0 + 1e-8, "R = {r}, z = {z:?}");
        }
    }
}

#[test]
fn block_scales_by_dilation() {
    // a_R(z) = a₁(Rz)
    let p = profile();
    for (r, z) in [(2.0, [0.7, -0.3]), (4.0, [1.1, 0.2]), (8.0, [0.4, 0.4])] {
        let lhs = a_r_value(&p, r, &z, &spec()).unwrap().value;
        let scaled = [r * z[0], r * z[1]];
        let rhs = a_r_value(&p, 1.0, &scaled, &spec()).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-8, "R = {r}");
    }
}

#[test]
fn amplified_block_point_values() {
    let p = profile();
    let cases = [
        (4.0, [0.0, 0.0], 1.321623587396975),
        (4.0, [1.0, 0.0], 0.9683810357692364),
        (4.0, [5.0, 0.0], 0.03113659529702791),
        (8.0, [0.0, 0.0], 3.845760699519295),
        (8.0, [1.0, 0.0], 0.01021346185153986),
        (16.0, [0.0, 0.0], 4648.55579410572),
        (16.0, [0.5, 0.0], -1577.373561960489),
    ];
    for (r, z, want) in cases {
        let v = g_r_value(&p, r, &z, &spec()).unwrap();
        // e^{R²/16} amplitude cancellation bounds the attainable accuracy
        assert!(
            (v.value.re - want).abs() < 1e-6 * want.abs(),
            "g_{r}({z:?}) = {} vs {want}",
            v.value.re
        );
    }
}

#[test]
fn amplified_block_refuses_beyond_amplitude_budget() {
    // pointwise values carry e^{R²/16} cancellation: refused past R = 64
    let p = profile();
    assert!(matches!(
        g_r_value(&p, 65.0, &[0.0, 0.0], &spec()),
        Err(NumError::Budget(_))
    ));
    assert!(g_r_value(&p, 17.0, &[0.1, 0.0], &spec()).is_ok());
    assert!(matches!(
        a_r_value(&p, 0.5, &[0.0, 0.0], &spec()),
        Err(NumError::InvalidArgument(_))
    ));
}

#[test]
fn quarter_heat_of_amplified_block_recovers_block() {
    // g_R^{(1/4)} = a_R, the defining identity of the pair
    let ctx = FockContext::new(1).unwrap();
    let p = profile();
    for r in [1.0, 2.0, 4.0] {
        let g = focklab_core::blocks::GRSymbol::new(p, r).unwrap();
        for z in [[0.0, 0.0], [1.0, 0.0], [0.5, -0.5], [2.0, 1.0]] {
            let q = HeatQuery::new(0.25, z.to_vec()).unwrap();
            let heated = heat_transform(ctx, &g, &q, &spec()).unwrap();
            let direct = a_r_value(&p, r, &z, &spec()).unwrap();
            assert!(
                (heated.value - direct.value).norm() < 1e-6,
                "R = {r}, z = {z:?}: {} vs {}",
                heated.value.re,
                direct.value.re
            );
        }
    }
}

#[test]
fn block_l2_norm_scales_inversely_with_r() {
    let p = profile();
    let n1 = a_r_l2_norm(&p, 1.0, &spec()).unwrap();
    assert!((n1 - 9.2498684088).abs() < 1e-6 * n1);
    for r in [2.0, 4.0, 8.0] {
        let nr = a_r_l2_norm(&p, r, &spec()).unwrap();
        assert!((nr - n1 / r).abs() < 1e-6 * nr, "R = {r}");
    }
}

#[test]
fn plancherel_route_agrees_with_direct_l2_scan() {
    let p = profile();
    let direct = a_r_l2_norm(&p, 1.0, &spec()).unwrap();
    let plan = a1_l2_plancherel(&p, &spec());
    assert!((direct - plan.value.re).abs() < 1e-8 * direct);
}

#[test]
fn tame_schedule_shape_at_defaults() {
    let s = BlockSchedule::tame_default();
    assert_eq!(s.mode, ScheduleMode::Tame);
    assert_eq!(s.blocks, 5);
    let want_r = [4.0, 8.0, 12.0, 16.0, 16.0];
    for m in 1..=5 {
        assert_eq!(s.r_m(m), want_r[m - 1]);
        assert_eq!(s.c_m(m), m as f64);
        assert_eq!(s.center(m).unwrap(), [20.0 * m as f64, 0.0]);
    }
}

#[test]
fn paper_schedule_is_symbolic_beyond_first_block() {
    let s = BlockSchedule::paper(5).unwrap();
    assert_eq!(s.r_m(2), 8.0);
    assert_eq!(s.r_m(3), 27.0);
    assert!((s.log_center_mag(2) - 128.0).abs() < 1e-12);
    assert!(matches!(s.center(2), Err(NumError::PaperModeSymbolic)));
    assert!(matches!(
        block_symbol(&profile(), &s, 2),
        Err(NumError::PaperModeSymbolic)
    ));
}

#[test]
fn symbolic_summability_exponents_follow_closed_form() {
    // exponent(m) = −2N·m⁷ + m⁶/8 + (6N − 6n)·ln m + 2·ln m
    let rows = star_symbolic_rows(1, 1, 5);
    assert_eq!(rows.len(), 5);
    assert!((rows[0].exponent - (-1.875)).abs() < 1e-12);
    let want_m2 = -256.0 + 8.0 + 2.0 * (2.0f64).ln();
    assert!((rows[1].exponent - want_m2).abs() < 1e-9);
    for w in rows.windows(2) {
        assert!(w[1].exponent < w[0].exponent);
        assert!(w[1].exponent < 0.0);
    }
}

#[test]
fn summability_rows_match_frozen_ladder() {
    let ctx = FockContext::new(1).unwrap();
    let p = profile();
    let s = BlockSchedule::tame_default();
    let (rows, running) = star_partial_sum(ctx, &p, &s, &[0.0, 0.0], 5, &spec()).unwrap();
    let frozen = [
        3.721621e-4,
        4.028678e-6,
        4.972331e-7,
        5.409600e-7,
        2.753861e-8,
    ];
    assert_eq!(rows.len(), 5);
    for (row, want) in rows.iter().zip(frozen) {
        assert!(
            (row.linear - want).abs() < 1e-4 * want,
            "m = {}: {} vs {want}",
            row.m,
            row.linear
        );
    }
    // the running sums are the prefix sums of the terms
    let total: f64 = frozen.iter().sum();
    assert!((running[4] - total).abs() < 1e-4 * total);
    assert!(running.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn summability_rejects_insufficient_spacing() {
    let ctx = FockContext::new(1).unwrap();
    let p = profile();
    // s = 2 < r₀/√2 ≈ 2.83: the blockwise Gaussian split fails
    let s = BlockSchedule::tame(5, 4.0, 16.0, 2.0).unwrap();
    assert!(matches!(
        star_partial_sum(ctx, &p, &s, &[0.0, 0.0], 5, &spec()),
        Err(NumError::InvalidArgument(_))
    ));
}

#[test]
fn offdiag_sum_matches_frozen_value_and_shrinks_with_spacing() {
    let p = profile();
    let base = BlockSchedule::tame_default();
    let (v5, _) = offdiag_heat_sum(&p, &base, 5, 5, &spec()).unwrap();
    assert!((v5 - 2.306695e-7).abs() < 1e-4 * v5, "m = 5: {v5}");
    assert!(v5 < 0.5);
    let wide = BlockSchedule::tame(5, 4.0, 16.0, 40.0).unwrap();
    let (w5, _) = offdiag_heat_sum(&p, &wide, 5, 5, &spec()).unwrap();
    assert!(w5 < v5);
}

#[test]
fn offdiag_rejects_out_of_range_block() {
    let p = profile();
    let s = BlockSchedule::tame_default();
    assert!(offdiag_heat_sum(&p, &s, 0, 5, &spec()).is_err());
    assert!(offdiag_heat_sum(&p, &s, 6, 5, &spec()).is_err());
}

#[test]
fn moment_ledger_rows_satisfy_chebyshev_and_calibration() {
    let p = profile();
    let mut base_excess = [0.0f64; 2];
    for (oi, order) in [1usize, 2].into_iter().enumerate() {
        let mut prev_tail = f64::INFINITY;
        for (ri, r) in [1.0, 2.0, 4.0].into_iter().enumerate() {
            let row = moment_tail_ledger(&p, r, &MomentQuery { order, rho: 2.0 }, &spec()).unwrap();
            assert!(row.chebyshev_ok, "R = {r}, order {order}");
            assert!(row.log_tail <= row.log_rhs + 1e-12);
            if ri == 0 {
                base_excess[oi] = row.shape_excess;
            } else {
                // relative excess against R = 1 stays nonpositive (frozen:
                // −3.06, −6.87 at order 1 and −5.70, −11.82 at order 2)
                let rel = row.shape_excess - base_excess[oi];
                assert!(rel <= 1e-9, "R = {r}, order {order}: {rel}");
                let want = match (order, r as usize) {
                    (1, 2) => -3.056,
                    (1, 4) => -6.868,
                    (2, 2) => -5.70040,
                    (2, 4) => -11.81506,
                    _ => unreachable!(),
                };
                assert!((rel - want).abs() < 2e-2, "R = {r}, order {order}: {rel}");
            }
            assert!(row.log_tail < prev_tail);
            prev_tail = row.log_tail;
        }
    }
}

#[test]
fn moment_ledger_tail_shrinks_with_radius() {
    let p = profile();
    let mut prev = f64::INFINITY;
    for rho in [1.0, 2.0, 4.0] {
        let row = moment_tail_ledger(&p, 2.0, &MomentQuery { order: 1, rho }, &spec()).unwrap();
        assert!(row.log_tail < prev);
        prev = row.log_tail;
    }
}

#[test]
fn moment_ledger_rejects_bad_order() {
    let p = profile();
    assert!(moment_tail_ledger(&p, 2.0, &MomentQuery { order: 0, rho: 1.0 }, &spec()).is_err());
    assert!(moment_tail_ledger(&p, 2.0, &MomentQuery { order: 5, rho: 1.0 }, &spec()).is_err());
}
