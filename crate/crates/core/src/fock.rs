//! Fock-space primitives: the Gaussian probability measure
//! dμ = (2π)⁻ⁿ e^{−|z|²/2} dv on ℂⁿ ≅ ℝ^{2n}, the reproducing kernel
//! K(z,w) = e^{z·w̄/2}, normalized kernel vectors k_a, and the weighted norms
//! ‖g‖_{2,a} = ‖g k_a‖_{L²(dμ)} that drive the summability condition.
//!
//! Points are stored as 2n raw reals [x₁, y₁, …, xₙ, yₙ] with z_j = x_j + i y_j.

use alloc::vec::Vec;

use crate::numint::{integrate_gaussian_log_abs2, AdaptiveSpec};
use crate::util::{dist_sq, norm_sq};
use crate::{C64, NumError, Result};

/// Dimension bookkeeping for H²(dμ): n complex variables, 2n real ones, and
/// the measure normalization (2π)⁻ⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockContext {
    pub n: usize,
}

impl FockContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(NumError::InvalidArgument("complex dimension must be ≥ 1"));
        }
        Ok(Self { n })
    }

    /// Real dimension 2n.
    pub fn dim(self) -> usize {
        2 * self.n
    }

    /// log (2π)⁻ⁿ.
    pub fn log_measure_norm(self) -> f64 {
        -(self.n as f64) * libm::log(crate::util::TWO_PI)
    }
}

/// Quadrature strategy hint carried by a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayClass {
    /// Rapid decay with all derivatives (safe in every integral here).
    Schwartz,
    /// Bounded; integrable only against Gaussian weights.
    Bounded,
    /// |g(w)| ≤ C e^{β|w|²} with β < 1/4, so |g|²·e^{−|w|²/2} still decays.
    GaussianDominated,
}

/// A complex-valued function on ℂⁿ ≅ ℝ^{2n} with quadrature metadata.
///
/// `eval_tensor` is an optional bulk path: for 2n = 2, fill
/// `out[i·ys.len() + j] = eval([xs[i], ys[j]])` and return true. Symbols with
/// internal quadrature (the oscillatory blocks) implement it with a shared
/// contraction so grid evaluation costs far less than pointwise calls; the
/// default refuses and callers fall back to `eval`.
pub trait Symbol: Sync {
    fn eval(&self, z: &[f64]) -> C64;

    fn decay(&self) -> DecayClass;

    /// Radius of the Fourier support when the symbol is band-limited.
    fn band_limit(&self) -> Option<f64> {
        None
    }

    /// Where the symbol's mass sits, when that is not the origin.
    fn center_hint(&self) -> Option<&[f64]> {
        None
    }

    /// Radius beyond which |g| is numerically negligible (< ~1e-10 of its
    /// scale), measured from the center hint or the origin. Drives grid
    /// windowing; None means "no usable bound".
    fn numerical_support(&self) -> Option<f64> {
        None
    }

    fn eval_tensor(&self, _xs: &[f64], _ys: &[f64], _out: &mut [C64]) -> bool {
        false
    }
}

/// g ≡ c.
#[derive(Debug, Clone, Copy)]
pub struct ConstSymbol(pub C64);

impl Symbol for ConstSymbol {
    fn eval(&self, _z: &[f64]) -> C64 {
        self.0
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Bounded
    }

    fn eval_tensor(&self, xs: &[f64], ys: &[f64], out: &mut [C64]) -> bool {
        out[..xs.len() * ys.len()].fill(self.0);
        true
    }
}

/// g(w) = e^{−β|w−b|²}.
#[derive(Debug, Clone)]
pub struct GaussianSymbol {
    pub beta: f64,
    pub center: Vec<f64>,
}

impl GaussianSymbol {
    pub fn centered(beta: f64, dim: usize) -> Self {
        Self {
            beta,
            center: alloc::vec![0.0; dim],
        }
    }
}

impl Symbol for GaussianSymbol {
    fn eval(&self, z: &[f64]) -> C64 {
        C64::new(libm::exp(-self.beta * dist_sq(z, &self.center)), 0.0)
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Schwartz
    }

    fn center_hint(&self) -> Option<&[f64]> {
        Some(&self.center)
    }

    fn numerical_support(&self) -> Option<f64> {
        // e^{−βr²} < 1e-14 ⟺ r > √(32.24/β)
        Some(libm::sqrt(32.3 / self.beta))
    }

    fn eval_tensor(&self, xs: &[f64], ys: &[f64], out: &mut [C64]) -> bool {
        let ex: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let d = x - self.center[0];
                libm::exp(-self.beta * d * d)
            })
            .collect();
        for (i, &vx) in ex.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let d = y - self.center[1];
                out[i * ys.len() + j] = C64::new(vx * libm::exp(-self.beta * d * d), 0.0);
            }
        }
        true
    }
}

/// g(w) = w₁, the first complex coordinate.
#[derive(Debug, Clone, Copy)]
pub struct CoordSymbol;

impl Symbol for CoordSymbol {
    fn eval(&self, z: &[f64]) -> C64 {
        C64::new(z[0], z[1])
    }

    fn decay(&self) -> DecayClass {
        DecayClass::GaussianDominated
    }
}

/// g(w) = w̄₁, the conjugate first coordinate.
#[derive(Debug, Clone, Copy)]
pub struct ConjCoordSymbol;

impl Symbol for ConjCoordSymbol {
    fn eval(&self, z: &[f64]) -> C64 {
        C64::new(z[0], -z[1])
    }

    fn decay(&self) -> DecayClass {
        DecayClass::GaussianDominated
    }
}

/// The normalized kernel k_a viewed as a symbol.
#[derive(Debug, Clone)]
pub struct CoherentSymbol {
    pub ctx: FockContext,
    pub a: Vec<f64>,
}

impl Symbol for CoherentSymbol {
    fn eval(&self, z: &[f64]) -> C64 {
        normalized_kernel(self.ctx, &self.a, z)
    }

    fn decay(&self) -> DecayClass {
        DecayClass::GaussianDominated
    }

    fn center_hint(&self) -> Option<&[f64]> {
        Some(&self.a)
    }
}

/// A symbol defined by a closure; mostly for tests and derived symbols.
pub struct ClosureSymbol<F: Fn(&[f64]) -> C64 + Sync> {
    pub f: F,
    pub class: DecayClass,
}

impl<F: Fn(&[f64]) -> C64 + Sync> ClosureSymbol<F> {
    pub fn new(class: DecayClass, f: F) -> Self {
        Self { f, class }
    }
}

impl<F: Fn(&[f64]) -> C64 + Sync> Symbol for ClosureSymbol<F> {
    fn eval(&self, z: &[f64]) -> C64 {
        (self.f)(z)
    }

    fn decay(&self) -> DecayClass {
        self.class
    }
}

/// A symbol translated by b: (shift g)(z) = g(z − b).
pub struct ShiftedSymbol<'a> {
    pub inner: &'a dyn Symbol,
    pub shift: Vec<f64>,
    hint: Option<Vec<f64>>,
}

impl<'a> ShiftedSymbol<'a> {
    pub fn new(inner: &'a dyn Symbol, shift: Vec<f64>) -> Self {
        let hint = match inner.center_hint() {
            Some(h) => Some(h.iter().zip(&shift).map(|(a, b)| a + b).collect()),
            None => Some(shift.clone()),
        };
        Self { inner, shift, hint }
    }
}

impl Symbol for ShiftedSymbol<'_> {
    fn eval(&self, z: &[f64]) -> C64 {
        let w: Vec<f64> = z.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        self.inner.eval(&w)
    }

    fn decay(&self) -> DecayClass {
        self.inner.decay()
    }

    fn band_limit(&self) -> Option<f64> {
        self.inner.band_limit()
    }

    fn center_hint(&self) -> Option<&[f64]> {
        self.hint.as_deref()
    }

    fn numerical_support(&self) -> Option<f64> {
        self.inner.numerical_support()
    }

    fn eval_tensor(&self, xs: &[f64], ys: &[f64], out: &mut [C64]) -> bool {
        let sx: Vec<f64> = xs.iter().map(|&x| x - self.shift[0]).collect();
        let sy: Vec<f64> = ys.iter().map(|&y| y - self.shift[1]).collect();
        self.inner.eval_tensor(&sx, &sy, out)
    }
}

/// Hermitian pairing z·w̄ = Σ z_j conj(w_j) on points stored as 2n reals.
pub fn hermitian_pairing(z: &[f64], w: &[f64]) -> C64 {
    debug_assert_eq!(z.len(), w.len());
    debug_assert_eq!(z.len() % 2, 0);
    let mut acc = C64::new(0.0, 0.0);
    for j in (0..z.len()).step_by(2) {
        let zj = C64::new(z[j], z[j + 1]);
        let wj = C64::new(w[j], w[j + 1]);
        acc += zj * wj.conj();
    }
    acc
}

/// Reproducing kernel K(z, w) = e^{z·w̄/2}.
pub fn repro_kernel(ctx: FockContext, z: &[f64], w: &[f64]) -> C64 {
    debug_assert_eq!(z.len(), ctx.dim());
    (hermitian_pairing(z, w) * 0.5).exp()
}

/// Normalized kernel k_a(z) = exp(z·ā/2 − |a|²/4); k_0 ≡ 1 and ‖k_a‖ = 1.
pub fn normalized_kernel(ctx: FockContext, a: &[f64], z: &[f64]) -> C64 {
    debug_assert_eq!(z.len(), ctx.dim());
    (hermitian_pairing(z, a) * 0.5 - 0.25 * norm_sq(a)).exp()
}

/// ‖g‖_{2,a}, in log- and linear-space, with the achieved quadrature
/// tolerance. The flags mirror the underlying adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct Norm2A {
    pub log: f64,
    pub linear: f64,
    pub achieved: f64,
    pub converged: bool,
}

/// ‖g‖_{2,a} = ((2π)⁻ⁿ ∫ |g(w)|² e^{−|w−a|²/2} dv)^{1/2}, accumulated in
/// log-space so block symbols with amplitude e^{R²/16} neither overflow nor
/// underflow.
pub fn norm2a(ctx: FockContext, g: &dyn Symbol, a: &[f64], spec: &AdaptiveSpec) -> Result<Norm2A> {
    if a.len() != ctx.dim() {
        return Err(NumError::InvalidArgument("point dimension mismatch"));
    }
    let r = integrate_gaussian_log_abs2(g, a, 1.0, spec)?;
    let log = 0.5 * (r.log_value + ctx.log_measure_norm());
    Ok(Norm2A {
        log,
        linear: libm::exp(log),
        achieved: r.achieved,
        converged: r.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_matches_hand_value() {
        // z = 1+2i, w = 3−i (n = 1): z·w̄ = (1+2i)(3+i) = 1+7i
        let p = hermitian_pairing(&[1.0, 2.0], &[3.0, -1.0]);
        assert!((p - C64::new(1.0, 7.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_at_origin_is_one() {
        let ctx = FockContext::new(1).unwrap();
        let v = repro_kernel(ctx, &[0.0, 0.0], &[0.0, 0.0]);
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalized_kernel_at_zero_param_is_const_one() {
        let ctx = FockContext::new(2).unwrap();
        let z = [0.3, -1.2, 2.0, 0.7];
        let v = normalized_kernel(ctx, &[0.0; 4], &z);
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shifted_symbol_translates_hint() {
        let g = GaussianSymbol {
            beta: 1.0,
            center: alloc::vec![1.0, 0.0],
        };
        let s = ShiftedSymbol::new(&g, alloc::vec![0.0, 2.0]);
        assert_eq!(s.center_hint().unwrap(), &[1.0, 2.0][..]);
        let direct = g.eval(&[0.5, -1.0]);
        let shifted = s.eval(&[0.5, 1.0]);
        assert!((direct - shifted).norm() < 1e-15);
    }
}
