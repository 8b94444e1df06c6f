//! Norm-side experiments: the Hilbert–Schmidt identity ladder, the block
//! envelope table, and the Toeplitz↔Weyl bridge.

use rayon::prelude::*;

use focklab_core::blocks::{a1_l2_plancherel, ARSymbol, GRSymbol};
use focklab_core::correspondence::bridge_check;
use focklab_core::toeplitz::{assemble_toeplitz, operator_norm, BasisSpec};
use focklab_core::util::TWO_PI;
use focklab_core::weyl::{hs_norm, operator_norm_disc, weyl_kernel, PhaseSpaceGrid};

use crate::config::Config;
use crate::report::{dump_matrix, Cell, Check, Report};
use crate::symbols::{gaussian_with_norm, ModulatedGaussian};
use crate::HarnessError;

use super::ExpContext;

/// Envelope (2π)^{-1/2}‖a_1‖₂: every block product norm·R must sit under it.
fn envelope(ex: &ExpContext) -> f64 {
    a1_l2_plancherel(&ex.profile, &ex.quad).value.re / TWO_PI.sqrt()
}

/// Criterion: discrete HS norm vs (2π)^{-1/2}‖a‖₂ on a grid ladder, for the
/// band-limited blocks and two closed-form Schwartz symbols.
pub fn hs_identity(ex: &ExpContext, cfg: &Config) -> Result<Report, HarnessError> {
    let mut report = Report::new(
        "hs-identity",
        vec![
            "symbol",
            "l",
            "samples",
            "hs_norm",
            "reference",
            "rel_err",
            "bandwidth_ok",
        ],
    );
    let a1 = a1_l2_plancherel(&ex.profile, &ex.quad);
    if !a1.converged {
        return Err(HarnessError::Budget(
            "a_1 reference norm quadrature did not converge".into(),
        ));
    }
    let inv_sqrt_2pi = 1.0 / TWO_PI.sqrt();

    enum Member {
        Block(f64),
        Gaussian(f64),
        Modulated,
    }
    let mut corpus: Vec<(String, Member, f64)> = Vec::new();
    for &r in &cfg.hs_identity.r_values {
        // ‖a_R‖₂ = ‖a_1‖₂/R by the scaling a_R(z) = a_1(Rz)
        corpus.push((
            format!("a_{r}"),
            Member::Block(r),
            inv_sqrt_2pi * a1.value.re / r,
        ));
    }
    let (_, l2_gauss) = gaussian_with_norm(1.0);
    corpus.push(("gauss_b1".into(), Member::Gaussian(1.0), inv_sqrt_2pi * l2_gauss));
    corpus.push((
        "cos3x_gauss".into(),
        Member::Modulated,
        inv_sqrt_2pi * ModulatedGaussian::l2_norm(),
    ));

    let grids = &cfg.hs_identity.grids;
    let jobs: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|s| (0..grids.len()).map(move |g| (s, g)))
        .collect();
    let rows: Vec<Result<(f64, bool), HarnessError>> = jobs
        .par_iter()
        .map(|&(s, g)| {
            let (l, samples) = grids[g];
            let grid = PhaseSpaceGrid::new(l, samples)?;
            let k = match corpus[s].1 {
                Member::Block(r) => weyl_kernel(&ARSymbol::new(ex.profile, r)?, &grid)?,
                Member::Gaussian(beta) => {
                    weyl_kernel(&gaussian_with_norm(beta).0, &grid)?
                }
                Member::Modulated => weyl_kernel(&ModulatedGaussian, &grid)?,
            };
            Ok((hs_norm(&k), k.bandwidth_ok))
        })
        .collect();

    for (j, &(s, g)) in jobs.iter().enumerate() {
        let (hs, bw) = rows[j].clone()?;
        let (l, samples) = grids[g];
        let reference = corpus[s].2;
        let rel = (hs - reference).abs() / reference;
        report.table.push(vec![
            Cell::from(corpus[s].0.as_str()),
            Cell::from(l),
            Cell::from(samples),
            Cell::from(hs),
            Cell::from(reference),
            Cell::from(rel),
            Cell::from(bw),
        ]);
    }
    // per symbol: finest level meets the tolerance and refinement improved
    for (s, (name, _, reference)) in corpus.iter().enumerate() {
        let rels: Vec<f64> = (0..grids.len())
            .map(|g| {
                let (hs, _) = rows[s * grids.len() + g].clone().expect("checked above");
                (hs - reference).abs() / reference
            })
            .collect();
        let finest = *rels.last().expect("nonempty ladder");
        report.check(Check::le(
            format!("hs_rel_finest[{name}]"),
            finest,
            cfg.hs_identity.rel_tol,
        ));
        if rels.len() > 1 {
            report.check(Check::le(
                format!("hs_refinement_improves[{name}]"),
                finest,
                rels[0] + 1e-12,
            ));
        }
    }
    Ok(report)
}

/// Criterion: norm(g_R)·R under the envelope on the Toeplitz side for every
/// (R, N), monotone compression in N, and the same product bound on the Weyl
/// side up to R = 64.
pub fn block_decay(
    ex: &ExpContext,
    cfg: &Config,
    dump_dir: Option<&std::path::Path>,
) -> Result<Report, HarnessError> {
    let mut report = Report::new(
        "block-decay",
        vec![
            "side", "r", "level", "norm", "product", "envelope", "converged",
        ],
    );
    let env = envelope(ex);
    let bd = &cfg.block_decay;

    let tjobs: Vec<(f64, usize)> = bd
        .r_values
        .iter()
        .flat_map(|&r| bd.degrees.iter().map(move |&n| (r, n)))
        .collect();
    let tres: Vec<Result<(f64, bool), HarnessError>> = tjobs
        .par_iter()
        .map(|&(r, n)| {
            let g = GRSymbol::new(ex.profile, r)?;
            let spec = BasisSpec::new(ex.ctx, n);
            let t = assemble_toeplitz(ex.ctx, &g, &spec, &ex.quad)?;
            if let Some(dir) = dump_dir {
                dump_matrix(dir, &format!("toeplitz_r{r}_n{n}"), ex.ctx.n, n, &t.matrix)?;
            }
            Ok((operator_norm(&t), t.converged))
        })
        .collect();
    for (j, &(r, n)) in tjobs.iter().enumerate() {
        let (norm, conv) = tres[j].clone()?;
        report.table.push(vec![
            Cell::from("toeplitz"),
            Cell::from(r),
            Cell::from(n),
            Cell::from(norm),
            Cell::from(norm * r),
            Cell::from(env),
            Cell::from(conv),
        ]);
        report.check(Check::le(
            format!("toeplitz_envelope[r={r},n={n}]"),
            norm * r,
            env + 1e-6,
        ));
    }
    // compression norms are lower bounds: nondecreasing in N per R
    for &r in &bd.r_values {
        let lane: Vec<f64> = tjobs
            .iter()
            .zip(&tres)
            .filter(|((rr, _), _)| *rr == r)
            .map(|(_, v)| v.clone().expect("checked above").0)
            .collect();
        // nested compressions in exact arithmetic; allow per-assembly
        // quadrature noise (~1e-9 on the entries) in the comparison
        let monotone = lane.windows(2).all(|w| w[1] >= w[0] - 1e-8);
        report.check(Check::flag(
            format!("toeplitz_monotone_in_degree[r={r}]"),
            monotone,
            format!("{lane:?}"),
        ));
    }
    // the finest-degree products approach the envelope from below as R grows
    if let Some(&n_fin) = bd.degrees.last() {
        let prods: Vec<f64> = tjobs
            .iter()
            .zip(&tres)
            .filter(|((_, n), _)| *n == n_fin)
            .map(|((r, _), v)| v.clone().expect("checked above").0 * r)
            .collect();
        let monotone = prods.windows(2).all(|w| w[1] >= w[0] - 1e-9);
        report.check(Check::flag(
            format!("toeplitz_product_monotone_in_r[n={n_fin}]"),
            monotone,
            format!("{prods:?}"),
        ));
    }

    let (wl, wg) = bd.weyl_grid;
    let wres: Vec<Result<(f64, bool, bool), HarnessError>> = bd
        .weyl_r_values
        .par_iter()
        .map(|&r| {
            let grid = PhaseSpaceGrid::new(wl, wg)?;
            let a = ARSymbol::new(ex.profile, r)?;
            let k = weyl_kernel(&a, &grid)?;
            let op = operator_norm_disc(&k, 1e-10);
            Ok((op.value, op.converged, k.bandwidth_ok))
        })
        .collect();
    for (j, &r) in bd.weyl_r_values.iter().enumerate() {
        let (op, conv, bw) = wres[j].clone()?;
        report.table.push(vec![
            Cell::from("weyl"),
            Cell::from(r),
            Cell::from(wg),
            Cell::from(op),
            Cell::from(op * r),
            Cell::from(env),
            Cell::from(conv && bw),
        ]);
        report.check(Check::le(
            format!("weyl_envelope[r={r}]"),
            op * r,
            env * 1.01,
        ));
    }
    Ok(report)
}

/// Criterion: the two quantizations agree at the finest levels and both sit
/// under the shared envelope.
pub fn bridge(ex: &ExpContext, cfg: &Config) -> Result<Report, HarnessError> {
    let mut report = Report::new(
        "bridge",
        vec![
            "r",
            "side",
            "maxdeg",
            "l",
            "samples",
            "norm",
            "hs",
            "converged",
            "bandwidth_ok",
        ],
    );
    let reports: Vec<Result<focklab_core::correspondence::BridgeReport, HarnessError>> = cfg
        .bridge
        .lanes
        .par_iter()
        .map(|lane| {
            bridge_check(
                ex.ctx,
                &ex.profile,
                lane.r,
                &cfg.bridge.degrees,
                &lane.grids,
                &ex.quad,
            )
            .map_err(HarnessError::from)
        })
        .collect();
    for res in reports {
        let b = res?;
        for lv in &b.toeplitz {
            report.table.push(vec![
                Cell::from(b.r),
                Cell::from("toeplitz"),
                Cell::from(lv.maxdeg),
                Cell::from(""),
                Cell::from(""),
                Cell::from(lv.norm),
                Cell::from(""),
                Cell::from(lv.converged),
                Cell::from(""),
            ]);
        }
        for lv in &b.weyl {
            report.table.push(vec![
                Cell::from(b.r),
                Cell::from("weyl"),
                Cell::from(""),
                Cell::from(lv.l),
                Cell::from(lv.samples),
                Cell::from(lv.operator),
                Cell::from(lv.hs),
                Cell::from(lv.converged),
                Cell::from(lv.bandwidth_ok),
            ]);
        }
        report.check(Check::le(format!("bridge_gap[r={}]", b.r), b.gap_rel, 0.05));
        report.check(Check::flag(
            format!("toeplitz_monotone[r={}]", b.r),
            b.toeplitz_monotone,
            "compression lower bounds must not decrease with degree",
        ));
        report.check(Check::flag(
            format!("under_envelope[r={}]", b.r),
            b.under_envelope,
            format!("hs bound {}", crate::report::fmt_float(b.hs_bound)),
        ));
    }
    Ok(report)
}
