//! Dense complex matrices, a cyclic Jacobi eigensolver for Hermitian
//! matrices, and power iteration for largest singular values. Matrix sizes in
//! this crate stay at a few thousand rows, so O(n³) dense methods are the
//! right tool.

use alloc::vec;
use alloc::vec::Vec;

use crate::util::{cis, Kahan};
use crate::C64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// out = M·x
    pub fn matvec(&self, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = C64::new(0.0, 0.0);
            for (m, &v) in row.iter().zip(x) {
                acc += m * v;
            }
            *o = acc;
        }
    }

    /// out = Mᴴ·x
    pub fn matvec_adj(&self, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for o in out.iter_mut() {
            *o = C64::new(0.0, 0.0);
        }
        for (i, &xi) in x.iter().enumerate() {
            let row = self.row(i);
            for (o, &m) in out.iter_mut().zip(row) {
                *o += m.conj() * xi;
            }
        }
    }

    /// Aᴴ·A (Hermitian, positive semidefinite).
    pub fn gram(&self) -> CMat {
        let n = self.cols;
        let mut g = CMat::zeros(n, n);
        for j in 0..n {
            for k in j..n {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.rows {
                    acc += self.at(i, j).conj() * self.at(i, k);
                }
                g.set(j, k, acc);
                g.set(k, j, acc.conj());
            }
        }
        g
    }

    pub fn frobenius(&self) -> f64 {
        let mut acc = Kahan::new();
        for z in &self.data {
            acc.add(z.norm_sqr());
        }
        libm::sqrt(acc.value())
    }

    /// max_{i≠j} |a_ij| (convergence measure for Jacobi sweeps).
    fn max_offdiag(&self) -> f64 {
        let mut m = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    let a = self.at(i, j).norm();
                    if a > m {
                        m = a;
                    }
                }
            }
        }
        m
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// returned in ascending order. Destroys a working copy; the input is only
/// read. Intended for dimensions up to a few hundred.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    assert_eq!(a.rows, a.cols, "eigenvalues need a square matrix");
    let n = a.rows;
    if n == 0 {
        return Vec::new();
    }
    let mut m = a.clone();
    let scale = m.frobenius().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale;
    for _sweep in 0..40 {
        if m.max_offdiag() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let u = m.at(p, q);
                let umag = u.norm();
                if umag <= tol * 1e-2 {
                    continue;
                }
                let alpha = m.at(p, p).re;
                let beta = m.at(q, q).re;
                // pivot vanishes iff t = tan θ solves t² − 2τt − 1 = 0;
                // take the |t| ≤ 1 root (small-angle choice)
                let tau = (beta - alpha) / (2.0 * umag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + libm::sqrt(tau * tau + 1.0))
                } else {
                    1.0 / (-tau + libm::sqrt(tau * tau + 1.0))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = u.conj() * (c * t / umag); // σ·e^{−i·arg u}
                // column update: [Ap, Aq] ← [Ap, Aq]·[[c, −s̄],[s, c]]
                for i in 0..n {
                    let aip = m.at(i, p);
                    let aiq = m.at(i, q);
                    m.set(i, p, aip * c + aiq * s);
                    m.set(i, q, aip * (-s.conj()) + aiq * c);
                }
                // row update by the adjoint rotation
                for j in 0..n {
                    let apj = m.at(p, j);
                    let aqj = m.at(q, j);
                    m.set(p, j, apj * c + aqj * s.conj());
                    m.set(q, j, apj * (-s) + aqj * c);
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m.at(i, i).re).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    eig
}

/// Largest singular value via the Hermitian eigenproblem for AᴴA.
/// Exact route for small dense matrices (toeplitz truncations).
pub fn opnorm_dense(a: &CMat) -> f64 {
    let eig = hermitian_eigenvalues(&a.gram());
    match eig.last() {
        Some(&l) => libm::sqrt(l.max(0.0)),
        None => 0.0,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PowerIterResult {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Largest singular value of `weight·M` by power iteration on (wM)ᴴ(wM).
/// Deterministic start vector v_k = e^{0.7ik}/√n. The estimates converge
/// geometrically with an unknown ratio (set by the top singular-value gap),
/// so the stop rule extrapolates the remaining error from consecutive step
/// ratios instead of trusting the last step size; `tol` is then a genuine
/// relative-accuracy target even for near-degenerate spectra.
pub fn opnorm_power(m: &CMat, weight: f64, tol: f64, max_iter: usize) -> PowerIterResult {
    let n = m.cols;
    if n == 0 || m.rows == 0 {
        return PowerIterResult {
            value: 0.0,
            converged: true,
            iterations: 0,
        };
    }
    let invsq = 1.0 / libm::sqrt(n as f64);
    let mut v: Vec<C64> = (0..n).map(|k| cis(0.7 * k as f64) * invsq).collect();
    let mut w = vec![C64::new(0.0, 0.0); m.rows];
    let mut u = vec![C64::new(0.0, 0.0); n];
    let mut sigma_prev = f64::NAN;
    let mut step_prev = f64::NAN;
    let mut sigma = 0.0;
    for it in 1..=max_iter {
        m.matvec(&v, &mut w);
        for z in w.iter_mut() {
            *z *= weight;
        }
        m.matvec_adj(&w, &mut u);
        for z in u.iter_mut() {
            *z *= weight;
        }
        // with ‖v‖ = 1, ‖u‖ → σ² for the dominant singular pair
        let nu = libm::sqrt(u.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if nu == 0.0 {
            return PowerIterResult {
                value: 0.0,
                converged: true,
                iterations: it,
            };
        }
        sigma = libm::sqrt(nu);
        let inv = 1.0 / nu;
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui * inv;
        }
        if sigma_prev.is_finite() {
            let step = (sigma - sigma_prev).abs();
            if step == 0.0 {
                return PowerIterResult {
                    value: sigma,
                    converged: true,
                    iterations: it,
                };
            }
            if step_prev.is_finite() && step_prev > 0.0 && step < step_prev {
                let rho = step / step_prev;
                let remaining = step * rho / (1.0 - rho);
                if remaining <= tol * sigma {
                    return PowerIterResult {
                        value: sigma + (sigma - sigma_prev).signum() * remaining,
                        converged: true,
                        iterations: it,
                    };
                }
            }
            step_prev = step;
        }
        sigma_prev = sigma;
    }
    PowerIterResult {
        value: sigma,
        converged: false,
        iterations: max_iter,
    }
}
