//! The bridge between the two quantizations: the truncated Toeplitz norm of
//! g_R and the discretized Weyl operator norm of a_R estimate the same
//! operator norm (the two operators are unitarily equivalent), so the two
//! independent pipelines act as mutual oracles. Both must also sit under
//! the Hilbert–Schmidt envelope (2π)^{-1/2}·R^{-1}·‖a_1‖₂.

use alloc::vec::Vec;

use crate::blocks::{a1_l2_plancherel, BumpProfile, ARSymbol, GRSymbol, G_R_QUADRATURE_CAP};
use crate::fock::FockContext;
use crate::numint::AdaptiveSpec;
use crate::toeplitz::{assemble_toeplitz, operator_norm, BasisSpec};
use crate::weyl::{hs_norm, operator_norm_disc, weyl_kernel, PhaseSpaceGrid};
use crate::{NumError, Result};

/// One Toeplitz ladder level: compression degree and the norm lower bound.
#[derive(Debug, Clone, Copy)]
pub struct ToeplitzLevel {
    pub maxdeg: usize,
    pub norm: f64,
    pub converged: bool,
}

/// One Weyl ladder level: grid and both norms.
#[derive(Debug, Clone, Copy)]
pub struct WeylLevel {
    pub l: f64,
    pub samples: usize,
    pub operator: f64,
    pub hs: f64,
    pub converged: bool,
    pub bandwidth_ok: bool,
}

/// Both norm ladders for one R, with the HS envelope value.
#[derive(Debug, Clone)]
pub struct BridgeReport {
    pub r: f64,
    pub toeplitz: Vec<ToeplitzLevel>,
    pub weyl: Vec<WeylLevel>,
    /// (2π)^{-1/2}·R^{-1}·‖a_1‖₂
    pub hs_bound: f64,
    /// |toeplitz_finest − weyl_finest| / max(both)
    pub gap_rel: f64,
    pub toeplitz_monotone: bool,
    pub agree: bool,
    pub under_envelope: bool,
}

/// Slack allowed over the HS envelope: 1e-6 on the Toeplitz side (whose
/// lower-bound property is exact), one percent of the bound on the Weyl
/// side (grid discretization error).
const TOEPLITZ_ENVELOPE_SLACK: f64 = 1e-6;
const WEYL_ENVELOPE_REL_SLACK: f64 = 0.01;

/// Runs both ladders for one R ≤ 16 and checks agreement, monotonicity, and
/// the envelope.
pub fn bridge_check(
    ctx: FockContext,
    profile: &BumpProfile,
    r: f64,
    degree_ladder: &[usize],
    grid_ladder: &[(f64, usize)],
    quad: &AdaptiveSpec,
) -> Result<BridgeReport> {
    if ctx.n != 1 {
        return Err(NumError::InvalidArgument("bridge is implemented for n = 1"));
    }
    if !(r >= 1.0) || r > G_R_QUADRATURE_CAP {
        return Err(NumError::Budget(
            "bridge needs 1 ≤ R ≤ 16: beyond that only the Weyl side is evaluable",
        ));
    }
    if degree_ladder.is_empty() || grid_ladder.is_empty() {
        return Err(NumError::InvalidArgument("empty ladder"));
    }
    let g_sym = GRSymbol::new(*profile, r)?;
    let mut toeplitz = Vec::with_capacity(degree_ladder.len());
    for &n_deg in degree_ladder {
        let spec = BasisSpec::new(ctx, n_deg);
        let t = assemble_toeplitz(ctx, &g_sym, &spec, quad)?;
        toeplitz.push(ToeplitzLevel {
            maxdeg: n_deg,
            norm: operator_norm(&t),
            converged: t.converged,
        });
    }
    let a_sym = ARSymbol::new(*profile, r)?;
    let mut weyl = Vec::with_capacity(grid_ladder.len());
    for &(l, samples) in grid_ladder {
        let grid = PhaseSpaceGrid::new(l, samples)?;
        let k = weyl_kernel(&a_sym, &grid)?;
        let op = operator_norm_disc(&k, 1e-10);
        weyl.push(WeylLevel {
            l,
            samples,
            operator: op.value,
            hs: hs_norm(&k),
            converged: op.converged,
            bandwidth_ok: k.bandwidth_ok,
        });
    }
    let a1 = a1_l2_plancherel(profile, quad);
    let hs_bound = a1.value.re / libm::sqrt(TWO_PI_F) / r;
    let t_fin = toeplitz.last().expect("nonempty").norm;
    let w_fin = weyl.last().expect("nonempty").operator;
    let scale = t_fin.max(w_fin);
    let gap_rel = if scale > 0.0 {
        (t_fin - w_fin).abs() / scale
    } else {
        0.0
    };
    // Exact compressions are nested, so the norm is nondecreasing in the
    // degree; each assembly carries its own ~1e-9 entry quadrature error, so
    // the comparison allows noise at that scale.
    let toeplitz_monotone = toeplitz
        .windows(2)
        .all(|w| w[1].norm >= w[0].norm - 1e-8);
    let under_envelope = toeplitz
        .iter()
        .all(|lv| lv.norm <= hs_bound + TOEPLITZ_ENVELOPE_SLACK)
        && weyl
            .iter()
            .all(|lv| lv.operator <= hs_bound * (1.0 + WEYL_ENVELOPE_REL_SLACK));
    Ok(BridgeReport {
        r,
        toeplitz,
        weyl,
        hs_bound,
        gap_rel,
        toeplitz_monotone,
        agree: gap_rel <= 0.05,
        under_envelope,
    })
}

const TWO_PI_F: f64 = crate::util::TWO_PI;
