//! Discretized Weyl quantization on L²(ℝ): the integral kernel
//!
//!   K(x, y) = (2π)^{-1} ∫ a((x+y)/2, ξ) e^{i(x−y)ξ} dξ,
//!
//! its Hilbert–Schmidt norm (which equals (2π)^{-1/2}‖a‖_{L²(ℝ²)} for the
//! exact operator), and a deterministic spectral-norm estimate. This is the
//! benign route for certifying block operator norms at large R: it only
//! ever evaluates the bounded symbol a_R, never its exponentially amplified
//! inverse-heat preimage.
//!
//! After the substitution u = (x+y)/2, v = x−y the ξ-integral becomes, per
//! midpoint u, a discrete Fourier transform along the v diagonal: with
//! cell-centered samples x_i = −L + (i+1/2)h and ξ_t = −Ξ + (t+1/2)h_ξ,
//! Ξ = π/h, h_ξ = 2Ξ/G_ξ, the exact identity
//!
//!   e^{i·d·h·ξ_t} = (−1)^d · e^{iπd/G_ξ} · e^{2πi·t·d/G_ξ}
//!
//! turns K(x_i, x_j) = κ(i+j, i−j) into one length-G_ξ inverse DFT per
//! midpoint row. G_ξ ≥ 2G keeps the diagonal indices collision-free;
//! band-limited symbols get ξ-oversampling (larger G_ξ) so the grid
//! resolves their fastest ξ-oscillation.

use alloc::vec;
use alloc::vec::Vec;

use crate::fft::FftPlan;
use crate::fock::Symbol;
use crate::linalg::{opnorm_power, CMat, PowerIterResult};
use crate::numint::{integrate_box, AdaptiveSpec, Box2n};
use crate::util::{cis, Kahan, TWO_PI};
use crate::{C64, NumError, Result};

/// Uniform cell-centered spatial grid on [−L, L] with G samples (G a power
/// of two): x_i = −L + (i+1/2)·h, h = 2L/G. The ξ side is handled
/// spectrally with implied bandwidth Ξ = π/h.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSpaceGrid {
    pub n: usize,
    pub l: f64,
    pub samples: usize,
}

impl PhaseSpaceGrid {
    pub fn new(l: f64, samples: usize) -> Result<Self> {
        if !(l > 0.0) {
            return Err(NumError::InvalidArgument("grid half-width must be positive"));
        }
        if samples < 8 || !samples.is_power_of_two() {
            return Err(NumError::InvalidArgument(
                "sample count must be a power of two, at least 8",
            ));
        }
        Ok(Self { n: 1, l, samples })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / self.samples as f64
    }

    /// Implied ξ bandwidth Ξ = π/h.
    pub fn xi_max(&self) -> f64 {
        core::f64::consts::PI / self.h()
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.l + (i as f64 + 0.5) * self.h()
    }
}

/// The sampled kernel K(x_i, x_j) with its grid.
#[derive(Debug, Clone)]
pub struct DiscreteWeylKernel {
    pub grid: PhaseSpaceGrid,
    pub matrix: CMat,
    /// Ξ covers twice the symbol's frequency support (band-limited case) or
    /// the symbol is negligible at ±Ξ (decay case).
    pub bandwidth_ok: bool,
    /// G_ξ / (2G): ξ-grid refinement applied for band-limited symbols.
    pub xi_oversample: usize,
}

fn next_pow2(mut v: usize) -> usize {
    if v <= 1 {
        return 1;
    }
    v -= 1;
    let mut p = 1;
    while v > 0 {
        v >>= 1;
        p <<= 1;
    }
    p
}

/// Builds the discretized kernel. Band-limited symbols (band limit ν) get
/// G_ξ ≥ 6ν/h so the midpoint rule sees ≥ 6 samples per fastest ξ-period;
/// symbols with a declared numerical support S are only evaluated on
/// |ξ| ≤ 1.05·S, the rest of the ξ-row being exact zeros of the padded
/// transform.
pub fn weyl_kernel(a: &dyn Symbol, grid: &PhaseSpaceGrid) -> Result<DiscreteWeylKernel> {
    if grid.n != 1 {
        return Err(NumError::InvalidArgument(
            "kernel discretization is implemented for n = 1",
        ));
    }
    let g = grid.samples;
    let h = grid.h();
    let xi_cap = grid.xi_max();
    let osf = match a.band_limit() {
        Some(nu) if nu > 0.0 => {
            let need = 6.0 * nu / h;
            let ratio = need / (2.0 * g as f64);
            next_pow2(libm::ceil(ratio.max(1.0)) as usize).min(32)
        }
        _ => 1,
    };
    let gxi = 2 * g * osf;
    let hxi = 2.0 * xi_cap / gxi as f64;
    // bandwidth flag: Nyquist range must dominate the symbol's frequency
    // support, or the symbol must have decayed at the ξ edge
    let bandwidth_ok = match a.band_limit() {
        Some(nu) => xi_cap >= 2.0 * nu,
        None => a.eval(&[0.0, xi_cap]).norm() <= 1e-8 && a.eval(&[0.0, -xi_cap]).norm() <= 1e-8,
    };
    // ξ-window: indices t with |ξ_t| ≤ min(1.05·S, Ξ)
    let s_window = a
        .numerical_support()
        .map(|s| (1.05 * s).min(xi_cap))
        .unwrap_or(xi_cap)
        .max(4.0 * hxi);
    let xi_at = |t: usize| -xi_cap + (t as f64 + 0.5) * hxi;
    let mut t0 = 0usize;
    while t0 < gxi && xi_at(t0) < -s_window {
        t0 += 1;
    }
    let mut t1 = gxi;
    while t1 > t0 && xi_at(t1 - 1) > s_window {
        t1 -= 1;
    }
    let nxi = t1 - t0;
    if nxi == 0 {
        return Err(NumError::InvalidArgument("empty ξ window"));
    }
    let xis: Vec<f64> = (t0..t1).map(xi_at).collect();
    let rows = 2 * g - 1;
    let us: Vec<f64> = (0..rows)
        .map(|k| -grid.l + (k as f64 + 1.0) * 0.5 * h)
        .collect();
    // symbol values A[k, t] on the midpoint × ξ tensor grid
    let mut a_vals = vec![C64::new(0.0, 0.0); rows * nxi];
    if !a.eval_tensor(&us, &xis, &mut a_vals) {
        let mut z = [0.0f64; 2];
        for (k, &u) in us.iter().enumerate() {
            for (t, &xi) in xis.iter().enumerate() {
                z[0] = u;
                z[1] = xi;
                a_vals[k * nxi + t] = a.eval(&z);
            }
        }
    }
    let plan = FftPlan::new(gxi);
    let mut matrix = CMat::zeros(g, g);
    let mut buf = vec![C64::new(0.0, 0.0); gxi];
    let weight = hxi / TWO_PI;
    for k in 0..rows {
        for cell in buf.iter_mut() {
            *cell = C64::new(0.0, 0.0);
        }
        buf[t0..t1].copy_from_slice(&a_vals[k * nxi..(k + 1) * nxi]);
        plan.inverse_unnormalized(&mut buf);
        // K[i, k−i] = κ(k, 2i−k), both kernel indices in range
        let i_lo = k.saturating_sub(g - 1);
        let i_hi = k.min(g - 1);
        for i in i_lo..=i_hi {
            let j = k - i;
            let d = i as isize - j as isize;
            let idx = d.rem_euclid(gxi as isize) as usize;
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let phase = cis(core::f64::consts::PI * d as f64 / gxi as f64);
            matrix.set(i, j, buf[idx] * phase * (sign * weight));
        }
    }
    Ok(DiscreteWeylKernel {
        grid: *grid,
        matrix,
        bandwidth_ok,
        xi_oversample: osf,
    })
}

/// One kernel value by direct slow quadrature of the ξ-integral, for
/// validating the transform route.
pub fn weyl_kernel_value_direct(
    a: &dyn Symbol,
    x: f64,
    y: f64,
    xi_max: f64,
    spec: &AdaptiveSpec,
) -> C64 {
    let u = 0.5 * (x + y);
    let v = x - y;
    let bx = Box2n::new(vec![-xi_max], vec![xi_max]).expect("valid 1D box");
    let osc = (v.abs() * xi_max / TWO_PI) as usize + 2;
    let local = AdaptiveSpec {
        initial: spec.initial.max(osc),
        ..*spec
    };
    let r = integrate_box(
        |xi| a.eval(&[u, xi[0]]) * cis(v * xi[0]),
        &bx,
        &local,
    );
    r.value / TWO_PI
}

/// (Σ_{ij} |K_{ij}|²·h²)^{1/2}: the discrete Hilbert–Schmidt norm, equal to
/// (2π)^{-1/2}‖a‖_{L²(ℝ²)} up to discretization error.
pub fn hs_norm(k: &DiscreteWeylKernel) -> f64 {
    let mut acc = Kahan::new();
    for v in &k.matrix.data {
        acc.add(v.norm_sqr());
    }
    k.grid.h() * libm::sqrt(acc.value())
}

/// Largest singular value of the weighted kernel matrix h·K (the L²(ℝ)
/// discretization of the operator), by deterministic power iteration on
/// (hK)ᴴ(hK).
pub fn operator_norm_disc(k: &DiscreteWeylKernel, tol: f64) -> PowerIterResult {
    opnorm_power(&k.matrix, k.grid.h(), tol, 10_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ConstSymbol;

    #[test]
    fn grid_geometry() {
        let grid = PhaseSpaceGrid::new(8.0, 16).unwrap();
        assert!((grid.h() - 1.0).abs() < 1e-15);
        assert!((grid.x(0) + 7.5).abs() < 1e-15);
        assert!((grid.x(15) - 7.5).abs() < 1e-15);
        assert!((grid.xi_max() - core::f64::consts::PI).abs() < 1e-15);
        assert!(PhaseSpaceGrid::new(8.0, 100).is_err());
        assert!(PhaseSpaceGrid::new(-1.0, 64).is_err());
    }

    #[test]
    fn zero_symbol_gives_zero_kernel() {
        let grid = PhaseSpaceGrid::new(4.0, 32).unwrap();
        let a = ConstSymbol(C64::new(0.0, 0.0));
        let k = weyl_kernel(&a, &grid).unwrap();
        assert!(k.matrix.data.iter().all(|v| v.norm() == 0.0));
        assert_eq!(hs_norm(&k), 0.0);
        let n = operator_norm_disc(&k, 1e-10);
        assert_eq!(n.value, 0.0);
    }

    #[test]
    fn next_pow2_values() {
        assert_eq!(next_pow2(1), 1);
        assert_eq!(next_pow2(2), 2);
        assert_eq!(next_pow2(3), 4);
        assert_eq!(next_pow2(9), 16);
    }
}
