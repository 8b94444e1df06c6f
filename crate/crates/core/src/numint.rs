//! Quadrature infrastructure: Gauss–Hermite rules for Gaussian-weighted
//! integrals over ℝ^d, composite Gauss–Legendre panel rules for compactly
//! supported and oscillatory integrands, and the adaptive drivers built on
//! them.
//!
//! Hermite weights are carried in log-modified form λᵢ = ln wᵢ + tᵢ², which
//! is O(1) at every order; the classical weights underflow binary64 near
//! order 300, the λ never do. Every reduction is compensated and runs in a
//! fixed order.

use alloc::vec;
use alloc::vec::Vec;

use crate::fock::Symbol;
use crate::util::{dist_sq, Kahan, KahanC, LogSumExp};
use crate::{C64, NumError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Hermite,
    Uniform,
}

/// One-dimensional quadrature rule. For `Hermite` the weight function is
/// e^{−t²} on ℝ; `log_weights` holds λᵢ = ln wᵢ + tᵢ². For `Uniform` (panel
/// Gauss–Legendre) the weight function is 1 and `log_weights` is ln wᵢ.
#[derive(Debug, Clone)]
pub struct QuadRule1D {
    pub kind: RuleKind,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub log_weights: Vec<f64>,
}

/// Eigenvalues of a symmetric tridiagonal matrix (QL with implicit shifts,
/// no eigenvectors). `d` is the diagonal, `e` the subdiagonal (e[i] couples
/// i and i+1; e[n−1] is workspace). Ascending order on return.
fn tridiag_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
}

/// Hermite functions ψ_k = p_k·e^{−t²/2} (p_k orthonormal for e^{−t²}dt).
/// Returns (Σ_{k<q} ψ_k(t)², ψ_{q−1}(t), ψ_q(t)). Uniformly bounded, so no
/// overflow at any order; usable for q up to ~600 before ψ₀ denormalizes.
fn hermite_psi_scan(q: usize, t: f64) -> (f64, f64, f64) {
    const PI_QUARTER_INV: f64 = 0.751_125_544_464_942_9; // π^{−1/4}
    let mut prev = 0.0f64;
    let mut cur = PI_QUARTER_INV * libm::exp(-0.5 * t * t);
    let mut sum = Kahan::new();
    sum.add(cur * cur);
    for k in 0..q {
        // ψ_{k+1} = (t ψ_k − √(k/2) ψ_{k−1})·√(2/(k+1))
        let next = (t * cur - libm::sqrt(k as f64 / 2.0) * prev)
            * libm::sqrt(2.0 / (k as f64 + 1.0));
        prev = cur;
        cur = next;
        if k + 1 < q {
            sum.add(cur * cur);
        }
    }
    (sum.value(), prev, cur)
}

/// Gauss–Hermite rule of the given order for the weight e^{−t²} on ℝ.
/// Nodes from the Golub–Welsch tridiagonal eigenproblem, polished by two
/// Newton steps on ψ_q; weights through the Christoffel identity
/// wᵢ = e^{−tᵢ²}/Σ_{k<q} ψ_k(tᵢ)², carried as λᵢ = −ln Σ ψ_k².
pub fn hermite_rule(order: usize) -> Result<QuadRule1D> {
    if order == 0 {
        return Err(NumError::InvalidArgument("hermite order must be ≥ 1"));
    }
    let q = order;
    let mut d = vec![0.0f64; q];
    let mut e: Vec<f64> = (0..q).map(|i| libm::sqrt((i as f64 + 1.0) / 2.0)).collect();
    tridiag_eigenvalues(&mut d, &mut e);
    // enforce the exact ± symmetry of the spectrum, then polish
    let mut nodes = d;
    for i in 0..q / 2 {
        let v = 0.5 * (nodes[q - 1 - i] - nodes[i]);
        nodes[i] = -v;
        nodes[q - 1 - i] = v;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    for i in q.div_ceil(2)..q {
        let mut t = nodes[i];
        for _ in 0..2 {
            let (_, psi_prev, psi_q) = hermite_psi_scan(q, t);
            let dpsi = libm::sqrt(2.0 * q as f64) * psi_prev - t * psi_q;
            if dpsi != 0.0 {
                t -= psi_q / dpsi;
            }
        }
        nodes[i] = t;
        nodes[q - 1 - i] = -t;
    }
    let mut weights = Vec::with_capacity(q);
    let mut log_weights = Vec::with_capacity(q);
    for &t in &nodes {
        let (sum_sq, _, _) = hermite_psi_scan(q, t);
        let lam = -libm::log(sum_sq);
        log_weights.push(lam);
        weights.push(libm::exp(lam - t * t));
    }
    Ok(QuadRule1D {
        kind: RuleKind::Hermite,
        order: q,
        nodes,
        weights,
        log_weights,
    })
}

// 8-point Gauss–Legendre abscissae/weights on [−1, 1].
const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite 8-point Gauss–Legendre rule with `panels` equal panels on
/// [lo, hi]. Eight points resolve one oscillation period comfortably, so the
/// caller's panel count sets the frequency budget.
pub fn panel_rule(lo: f64, hi: f64, panels: usize) -> QuadRule1D {
    let panels = panels.max(1);
    let width = (hi - lo) / panels as f64;
    let half = 0.5 * width;
    let mut nodes = Vec::with_capacity(panels * 8);
    let mut weights = Vec::with_capacity(panels * 8);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * width;
        for k in (0..4).rev() {
            nodes.push(mid - half * GL8_X[k]);
            weights.push(half * GL8_W[k]);
        }
        for k in 0..4 {
            nodes.push(mid + half * GL8_X[k]);
            weights.push(half * GL8_W[k]);
        }
    }
    let log_weights = weights.iter().map(|&w| libm::log(w)).collect();
    QuadRule1D {
        kind: RuleKind::Uniform,
        order: panels * 8,
        nodes,
        weights,
        log_weights,
    }
}

/// Axis-aligned box in ℝ^d.
#[derive(Debug, Clone)]
pub struct Box2n {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Box2n {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(NumError::InvalidArgument("box bounds must match and be nonempty"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(NumError::InvalidArgument("box needs lo < hi per axis"));
        }
        Ok(Self { lo, hi })
    }

    /// Centered cube [−r, r]^d.
    pub fn centered(dim: usize, r: f64) -> Self {
        Self {
            lo: vec![-r; dim],
            hi: vec![r; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

/// Refinement policy: start at `initial` resolution (Hermite order or panels
/// per axis), double up to `max_refine` times, stop when successive
/// estimates agree to `rel_tol`.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSpec {
    pub initial: usize,
    pub max_refine: usize,
    pub rel_tol: f64,
}

impl Default for AdaptiveSpec {
    fn default() -> Self {
        Self {
            initial: 24,
            max_refine: 8,
            rel_tol: 1e-9,
        }
    }
}

impl AdaptiveSpec {
    /// Default starting resolution for box rules (panels per axis).
    pub fn for_box() -> Self {
        Self {
            initial: 8,
            ..Self::default()
        }
    }

    pub fn with_initial(self, initial: usize) -> Self {
        Self { initial, ..self }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }
}

/// Quadrature value plus the achieved relative tolerance. `converged = false`
/// means the refinement budget ran out first; the value is still returned.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: C64,
    pub achieved: f64,
    pub converged: bool,
}

/// Log-domain quadrature result for positive integrands.
#[derive(Debug, Clone, Copy)]
pub struct LogQuadResult {
    pub log_value: f64,
    pub achieved: f64,
    pub converged: bool,
}

/// Hermite orders are capped here; beyond ~600 the scaled recurrence
/// denormalizes. All acceptance workloads stay under 384.
pub const MAX_HERMITE_ORDER: usize = 512;

fn effective_gaussian_frame(
    hint: Option<&[f64]>,
    center: &[f64],
    sigma2: f64,
) -> (Vec<f64>, f64) {
    if let Some(h) = hint {
        let d2 = dist_sq(h, center);
        let sigma = libm::sqrt(sigma2);
        // A hint within reach widens the frame to cover both centers; a hint
        // far outside the Gaussian is ignored (the weight kills that region).
        if d2 > 1e-28 && d2 <= (20.0 * sigma) * (20.0 * sigma) {
            let mid: Vec<f64> = h.iter().zip(center).map(|(a, b)| 0.5 * (a + b)).collect();
            return (mid, sigma2 + d2 / 8.0);
        }
    }
    (center.to_vec(), sigma2)
}

/// ∫ f(w)·e^{−|w−center|²/(2σ²)} dv(w) over ℝ^d by a tensor Gauss–Hermite
/// rule, adaptively refined. The grid frame recenters/widens toward the
/// symbol's center hint when that is compatible with the Gaussian weight.
pub fn integrate_gaussian(
    f: &dyn Symbol,
    center: &[f64],
    sigma2: f64,
    spec: &AdaptiveSpec,
) -> Result<QuadResult> {
    if !(sigma2 > 0.0) {
        return Err(NumError::InvalidArgument("sigma2 must be positive"));
    }
    if center.is_empty() {
        return Err(NumError::InvalidArgument("center must be nonempty"));
    }
    let (c_eff, s2_eff) = effective_gaussian_frame(f.center_hint(), center, sigma2);
    let mut order = spec.initial.max(4);
    let mut prev: Option<C64> = None;
    let mut achieved = f64::INFINITY;
    for _ in 0..=spec.max_refine {
        let order_cap = order.min(MAX_HERMITE_ORDER);
        let rule = hermite_rule(order_cap)?;
        let (value, l1) = gaussian_tensor_sum(f, center, sigma2, &c_eff, s2_eff, &rule);
        if let Some(p) = prev {
            // cancellation floor as in integrate_box
            let denom = value
                .norm()
                .max(p.norm())
                .max(1e-3 * l1)
                .max(f64::MIN_POSITIVE);
            achieved = (value - p).norm() / denom;
            if achieved <= spec.rel_tol {
                return Ok(QuadResult {
                    value,
                    achieved,
                    converged: true,
                });
            }
        }
        prev = Some(value);
        if order_cap == MAX_HERMITE_ORDER {
            break;
        }
        order *= 2;
    }
    Ok(QuadResult {
        value: prev.expect("at least one refinement ran"),
        achieved,
        converged: false,
    })
}

fn gaussian_tensor_sum(
    f: &dyn Symbol,
    center: &[f64],
    sigma2: f64,
    c_eff: &[f64],
    s2_eff: f64,
    rule: &QuadRule1D,
) -> (C64, f64) {
    let d = center.len();
    let scale = libm::sqrt(2.0 * s2_eff);
    let vol = libm::exp(0.5 * d as f64 * libm::log(2.0 * s2_eff));
    let q = rule.order;
    let inv2s2 = 1.0 / (2.0 * sigma2);
    if d == 2 {
        let xs: Vec<f64> = rule.nodes.iter().map(|&t| c_eff[0] + scale * t).collect();
        let ys: Vec<f64> = rule.nodes.iter().map(|&t| c_eff[1] + scale * t).collect();
        let mut grid = vec![C64::new(0.0, 0.0); q * q];
        let have_grid = f.eval_tensor(&xs, &ys, &mut grid);
        let mut acc = KahanC::new();
        let mut l1 = Kahan::new();
        for (i, &x) in xs.iter().enumerate() {
            let dx = x - center[0];
            let li = rule.log_weights[i];
            for (j, &y) in ys.iter().enumerate() {
                let dy = y - center[1];
                let lam = li + rule.log_weights[j] - (dx * dx + dy * dy) * inv2s2;
                let fv = if have_grid {
                    grid[i * q + j]
                } else {
                    f.eval(&[x, y])
                };
                let term = fv * libm::exp(lam);
                acc.add(term);
                l1.add(term.norm());
            }
        }
        return (acc.value() * vol, l1.value() * vol);
    }
    // generic dimension: odometer over the tensor grid
    let mut idx = vec![0usize; d];
    let mut w = vec![0.0f64; d];
    let mut acc = KahanC::new();
    let mut l1 = Kahan::new();
    loop {
        let mut lam = 0.0;
        for (ax, &k) in idx.iter().enumerate() {
            w[ax] = c_eff[ax] + scale * rule.nodes[k];
            lam += rule.log_weights[k];
        }
        lam -= dist_sq(&w, center) * inv2s2;
        let term = f.eval(&w) * libm::exp(lam);
        acc.add(term);
        l1.add(term.norm());
        let mut ax = 0;
        loop {
            idx[ax] += 1;
            if idx[ax] < q {
                break;
            }
            idx[ax] = 0;
            ax += 1;
            if ax == d {
                return (acc.value() * vol, l1.value() * vol);
            }
        }
    }
}

/// log ∫ |f(w)|²·e^{−|w−center|²/(2σ²)} dv(w), fully in log-space, for
/// integrands whose dynamic range would overflow linear accumulation.
pub fn integrate_gaussian_log_abs2(
    f: &dyn Symbol,
    center: &[f64],
    sigma2: f64,
    spec: &AdaptiveSpec,
) -> Result<LogQuadResult> {
    if !(sigma2 > 0.0) {
        return Err(NumError::InvalidArgument("sigma2 must be positive"));
    }
    let (c_eff, s2_eff) = effective_gaussian_frame(f.center_hint(), center, sigma2);
    let d = center.len();
    let scale = libm::sqrt(2.0 * s2_eff);
    let log_vol = 0.5 * d as f64 * libm::log(2.0 * s2_eff);
    let inv2s2 = 1.0 / (2.0 * sigma2);
    let mut order = spec.initial.max(4);
    let mut prev: Option<f64> = None;
    let mut achieved = f64::INFINITY;
    for _ in 0..=spec.max_refine {
        let order_cap = order.min(MAX_HERMITE_ORDER);
        let rule = hermite_rule(order_cap)?;
        let q = rule.order;
        let mut lse = LogSumExp::new();
        if d == 2 {
            let xs: Vec<f64> = rule.nodes.iter().map(|&t| c_eff[0] + scale * t).collect();
            let ys: Vec<f64> = rule.nodes.iter().map(|&t| c_eff[1] + scale * t).collect();
            let mut grid = vec![C64::new(0.0, 0.0); q * q];
            let have_grid = f.eval_tensor(&xs, &ys, &mut grid);
            for (i, &x) in xs.iter().enumerate() {
                let dx = x - center[0];
                let li = rule.log_weights[i];
                for (j, &y) in ys.iter().enumerate() {
                    let dy = y - center[1];
                    let fv = if have_grid {
                        grid[i * q + j]
                    } else {
                        f.eval(&[x, y])
                    };
                    let mag = fv.norm();
                    if mag > 0.0 {
                        lse.add(
                            li + rule.log_weights[j] - (dx * dx + dy * dy) * inv2s2
                                + 2.0 * libm::log(mag),
                        );
                    }
                }
            }
        } else {
            let mut idx = vec![0usize; d];
            let mut w = vec![0.0f64; d];
            'grid: loop {
                let mut lam = 0.0;
                for (ax, &k) in idx.iter().enumerate() {
                    w[ax] = c_eff[ax] + scale * rule.nodes[k];
                    lam += rule.log_weights[k];
                }
                lam -= dist_sq(&w, center) * inv2s2;
                let mag = f.eval(&w).norm();
                if mag > 0.0 {
                    lse.add(lam + 2.0 * libm::log(mag));
                }
                let mut ax = 0;
                loop {
                    idx[ax] += 1;
                    if idx[ax] < q {
                        break;
                    }
                    idx[ax] = 0;
                    ax += 1;
                    if ax == d {
                        break 'grid;
                    }
                }
            }
        }
        let log_value = log_vol + lse.value();
        if let Some(p) = prev {
            achieved = (log_value - p).abs();
            if achieved <= spec.rel_tol {
                return Ok(LogQuadResult {
                    log_value,
                    achieved,
                    converged: true,
                });
            }
        }
        prev = Some(log_value);
        if order_cap == MAX_HERMITE_ORDER {
            break;
        }
        order *= 2;
    }
    Ok(LogQuadResult {
        log_value: prev.expect("at least one refinement ran"),
        achieved,
        converged: false,
    })
}

/// Tensor-product composite Gauss–Legendre integral of `f` over `bx`,
/// doubling panel counts until successive estimates agree to the relative
/// tolerance. `spec.initial` is panels per axis; for oscillatory integrands
/// the caller must keep it at or above the 8-points-per-period floor.
///
/// Convergence is measured against max(|value|, 1e-3·∫|f|): an integral
/// that nearly cancels (|value| ≪ ∫|f|) is accepted once its error is small
/// on the scale of the integrand's mass, since relative accuracy below the
/// cancellation noise floor is not attainable and not meaningful.
pub fn integrate_box<F: FnMut(&[f64]) -> C64>(
    mut f: F,
    bx: &Box2n,
    spec: &AdaptiveSpec,
) -> QuadResult {
    let d = bx.dim();
    let mut panels = spec.initial.max(1);
    let mut prev: Option<C64> = None;
    let mut achieved = f64::INFINITY;
    for _ in 0..=spec.max_refine {
        let rules: Vec<QuadRule1D> = (0..d)
            .map(|ax| panel_rule(bx.lo[ax], bx.hi[ax], panels))
            .collect();
        let mut idx = vec![0usize; d];
        let mut w = vec![0.0f64; d];
        let mut acc = KahanC::new();
        let mut l1 = Kahan::new();
        'grid: loop {
            let mut weight = 1.0;
            for (ax, &k) in idx.iter().enumerate() {
                w[ax] = rules[ax].nodes[k];
                weight *= rules[ax].weights[k];
            }
            let fv = f(&w) * weight;
            acc.add(fv);
            l1.add(fv.norm());
            let mut ax = 0;
            loop {
                idx[ax] += 1;
                if idx[ax] < rules[ax].nodes.len() {
                    break;
                }
                idx[ax] = 0;
                ax += 1;
                if ax == d {
                    break 'grid;
                }
            }
        }
        let value = acc.value();
        if let Some(p) = prev {
            let denom = value
                .norm()
                .max(p.norm())
                .max(1e-3 * l1.value())
                .max(f64::MIN_POSITIVE);
            achieved = (value - p).norm() / denom;
            if achieved <= spec.rel_tol {
                return QuadResult {
                    value,
                    achieved,
                    converged: true,
                };
            }
        }
        prev = Some(value);
        panels *= 2;
    }
    QuadResult {
        value: prev.expect("at least one refinement ran"),
        achieved,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiag_known_2x2() {
        // [[0,1],[1,0]] → ±1
        let mut d = vec![0.0, 0.0];
        let mut e = vec![1.0, 0.0];
        tridiag_eigenvalues(&mut d, &mut e);
        assert!((d[0] + 1.0).abs() < 1e-14);
        assert!((d[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tridiag_known_3x3() {
        // diag 2, offdiag −1: eigenvalues 2 − 2cos(kπ/4), k = 1..3
        let mut d = vec![2.0, 2.0, 2.0];
        let mut e = vec![-1.0, -1.0, 0.0];
        tridiag_eigenvalues(&mut d, &mut e);
        let expect = [
            2.0 - 2.0 * libm::cos(core::f64::consts::PI / 4.0),
            2.0,
            2.0 + 2.0 * libm::cos(core::f64::consts::PI / 4.0),
        ];
        for (a, b) in d.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_order_one_and_two() {
        let r1 = hermite_rule(1).unwrap();
        assert!(r1.nodes[0].abs() < 1e-15);
        assert!((r1.weights[0] - libm::sqrt(core::f64::consts::PI)).abs() < 1e-13);
        let r2 = hermite_rule(2).unwrap();
        let inv_sqrt2 = 1.0 / libm::sqrt(2.0);
        assert!((r2.nodes[0] + inv_sqrt2).abs() < 1e-14);
        assert!((r2.nodes[1] - inv_sqrt2).abs() < 1e-14);
        for &w in &r2.weights {
            assert!((w - 0.5 * libm::sqrt(core::f64::consts::PI)).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_rejects_zero_order() {
        assert!(matches!(
            hermite_rule(0),
            Err(NumError::InvalidArgument(_))
        ));
    }

    #[test]
    fn hermite_mass_and_symmetry() {
        for &q in &[5usize, 11, 32, 97, 256] {
            let r = hermite_rule(q).unwrap();
            let mass: f64 = r.weights.iter().sum();
            assert!(
                (mass - libm::sqrt(core::f64::consts::PI)).abs() < 1e-12,
                "mass off at q={q}: {mass}"
            );
            for i in 0..q {
                assert!((r.nodes[i] + r.nodes[q - 1 - i]).abs() < 1e-13);
                assert!(r.weights[i] > 0.0);
                if i > 0 {
                    assert!(r.nodes[i] > r.nodes[i - 1]);
                }
            }
        }
    }

    #[test]
    fn log_weights_stay_bounded_at_high_order() {
        let r = hermite_rule(500).unwrap();
        for &l in &r.log_weights {
            assert!(l.is_finite());
            assert!(l.abs() < 20.0);
        }
    }

    #[test]
    fn panel_rule_integrates_cubic_exactly() {
        let r = panel_rule(-1.0, 2.0, 3);
        let mut acc = 0.0;
        for (&x, &w) in r.nodes.iter().zip(&r.weights) {
            acc += w * (x * x * x - x + 2.0);
        }
        // ∫_{−1}^{2} (x³ − x + 2) dx = 15/4 − 3/2 + 6
        assert!((acc - (15.0 / 4.0 - 1.5 + 6.0)).abs() < 1e-13);
    }
}
