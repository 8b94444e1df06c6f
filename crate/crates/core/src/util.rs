//! Shared numeric helpers: compensated summation, log-sum-exp, and a small
//! deterministic RNG for sampled test corpora.

use alloc::vec::Vec;

use crate::C64;

pub const TWO_PI: f64 = core::f64::consts::TAU;

/// Kahan–Babuška compensated accumulator. Used for every quadrature
/// reduction; accumulation order is the caller's iteration order and must be
/// kept fixed for reproducibility.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Complex compensated accumulator (independent real/imag compensation).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanC {
    re: Kahan,
    im: Kahan,
}

impl KahanC {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: C64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

/// log(Σ e^{x_i}) without overflow; returns −∞ for an empty or all-−∞ input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for &x in xs {
        if x > m {
            m = x;
        }
    }
    if !m.is_finite() {
        return m;
    }
    let mut acc = Kahan::new();
    for &x in xs {
        acc.add(libm::exp(x - m));
    }
    m + libm::log(acc.value())
}

/// Streaming log-sum-exp: max tracking plus a rescaled compensated sum, so
/// callers never materialize the term list.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    acc: Kahan,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            acc: Kahan::new(),
        }
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.acc.add(libm::exp(x - self.max));
        } else {
            // rescale the running sum to the new maximum
            let scale = libm::exp(self.max - x);
            let mut fresh = Kahan::new();
            fresh.add(self.acc.value() * scale);
            fresh.add(1.0);
            self.acc = fresh;
            self.max = x;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.max + libm::log(self.acc.value())
    }
}

/// e^{iθ} via libm; the workhorse for oscillatory factors.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(libm::cos(theta), libm::sin(theta))
}

/// splitmix64: tiny, seedable, platform-independent. Only used to draw
/// sampled point corpora for invariant checks; never inside quadrature.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// A point in the centered box [−r, r]^dim.
    pub fn next_point(&mut self, dim: usize, r: f64) -> Vec<f64> {
        (0..dim).map(|_| self.next_range(-r, r)).collect()
    }
}

/// Euclidean norm squared of a real vector.
#[inline]
pub fn norm_sq(v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &x in v {
        acc += x * x;
    }
    acc
}

/// Euclidean distance squared.
#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}
