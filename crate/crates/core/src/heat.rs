//! The forward heat flow g ↦ g^{(t)} on ℝ^{2n},
//! g^{(t)}(a) = (4πt)⁻ⁿ ∫ g(w) e^{−|w−a|²/(4t)} dv(w),
//! its borderline t = 1/4 bound against ‖g‖_{2,a}, and the semigroup check.
//! The Berezin transform of a Toeplitz operator is the t = 1/2 slice.

use alloc::vec::Vec;

use crate::fock::{norm2a, DecayClass, FockContext, Symbol};
use crate::numint::{integrate_gaussian, AdaptiveSpec, QuadResult};
use crate::{C64, NumError, Result};

/// Evaluation request: time t > 0 at the point a ∈ ℝ^{2n}.
#[derive(Debug, Clone)]
pub struct HeatQuery {
    pub t: f64,
    pub a: Vec<f64>,
}

impl HeatQuery {
    pub fn new(t: f64, a: Vec<f64>) -> Result<Self> {
        if !(t > 0.0) {
            return Err(NumError::InvalidArgument("heat time must be positive"));
        }
        Ok(Self { t, a })
    }
}

/// g^{(t)}(a). The Gaussian weight e^{−|w−a|²/(4t)} has σ² = 2t, so this is
/// a thin normalization wrapper over the Gaussian quadrature driver.
pub fn heat_transform(
    ctx: FockContext,
    g: &dyn Symbol,
    q: &HeatQuery,
    spec: &AdaptiveSpec,
) -> Result<QuadResult> {
    if q.a.len() != ctx.dim() {
        return Err(NumError::InvalidArgument("point dimension mismatch"));
    }
    let r = integrate_gaussian(g, &q.a, 2.0 * q.t, spec)?;
    let norm = libm::exp(-(ctx.n as f64) * libm::log(4.0 * core::f64::consts::PI * q.t));
    Ok(QuadResult {
        value: r.value * norm,
        achieved: r.achieved,
        converged: r.converged,
    })
}

/// Berezin transform g̃(a) = g^{(1/2)}(a).
pub fn berezin_transform(
    ctx: FockContext,
    g: &dyn Symbol,
    a: &[f64],
    spec: &AdaptiveSpec,
) -> Result<QuadResult> {
    heat_transform(
        ctx,
        g,
        &HeatQuery {
            t: 0.5,
            a: a.to_vec(),
        },
        spec,
    )
}

/// Both sides of the borderline bound |g^{(1/4)}(a)| ≤ 2ⁿ·‖g‖_{2,a}.
#[derive(Debug, Clone, Copy)]
pub struct QuarterBound {
    pub lhs: f64,
    pub rhs: f64,
    pub converged: bool,
}

/// lhs = |g^{(1/4)}(a)|, rhs = 2ⁿ·‖g‖_{2,a}. The inequality holds for every
/// symbol with finite rhs; callers assert lhs ≤ rhs + tolerance.
pub fn quarter_bound_margin(
    ctx: FockContext,
    g: &dyn Symbol,
    a: &[f64],
    spec: &AdaptiveSpec,
) -> Result<QuarterBound> {
    let lhs = heat_transform(
        ctx,
        g,
        &HeatQuery {
            t: 0.25,
            a: a.to_vec(),
        },
        spec,
    )?;
    let n2a = norm2a(ctx, g, a, spec)?;
    Ok(QuarterBound {
        lhs: lhs.value.norm(),
        rhs: libm::exp2(ctx.n as f64) * n2a.linear,
        converged: lhs.converged && n2a.converged,
    })
}

/// g^{(s)} as a derived symbol, so it can be fed back into the flow.
/// Its inner quadrature runs at a tolerance 10× tighter than the outer
/// spec to keep the composed error below what the residual check asserts.
pub struct HeatedSymbol<'a> {
    pub ctx: FockContext,
    pub inner: &'a dyn Symbol,
    pub s: f64,
    pub spec: AdaptiveSpec,
}

impl Symbol for HeatedSymbol<'_> {
    fn eval(&self, z: &[f64]) -> C64 {
        let q = HeatQuery {
            t: self.s,
            a: z.to_vec(),
        };
        match heat_transform(self.ctx, self.inner, &q, &self.spec) {
            Ok(r) => r.value,
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    }

    fn decay(&self) -> DecayClass {
        self.inner.decay()
    }

    fn center_hint(&self) -> Option<&[f64]> {
        self.inner.center_hint()
    }
}

/// |(g^{(s)})^{(t)}(a) − g^{(s+t)}(a)|: the semigroup identity residual.
pub fn semigroup_residual(
    ctx: FockContext,
    g: &dyn Symbol,
    s: f64,
    t: f64,
    a: &[f64],
    spec: &AdaptiveSpec,
) -> Result<f64> {
    if !(s > 0.0 && t > 0.0) {
        return Err(NumError::InvalidArgument("heat times must be positive"));
    }
    let inner_spec = AdaptiveSpec {
        rel_tol: 0.1 * spec.rel_tol,
        ..*spec
    };
    let heated = HeatedSymbol {
        ctx,
        inner: g,
        s,
        spec: inner_spec,
    };
    let two_step = heat_transform(
        ctx,
        &heated,
        &HeatQuery {
            t,
            a: a.to_vec(),
        },
        spec,
    )?;
    let one_step = heat_transform(
        ctx,
        g,
        &HeatQuery {
            t: s + t,
            a: a.to_vec(),
        },
        spec,
    )?;
    Ok((two_step.value - one_step.value).norm())
}
