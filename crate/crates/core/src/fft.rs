//! In-place radix-2 complex FFT. Sizes are powers of two; the discretized
//! Weyl kernel uses lengths up to 4096, far below any scale where fancier
//! algorithms pay off.

use alloc::vec::Vec;

use crate::util::cis;
use crate::C64;

/// Twiddle table for a fixed power-of-two length: w[k] = e^{−2πik/n}, k < n/2.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    twiddles: Vec<C64>,
}

impl FftPlan {
    /// Panics if `n` is not a power of two (internal misuse, not input data).
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT length must be a power of two");
        let step = -crate::util::TWO_PI / n as f64;
        let twiddles = (0..n / 2).map(|k| cis(step * k as f64)).collect();
        Self { n, twiddles }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Forward DFT: X[k] = Σ_j x[j] e^{−2πijk/n}, in place.
    pub fn forward(&self, buf: &mut [C64]) {
        assert_eq!(buf.len(), self.n);
        let n = self.n;
        if n <= 1 {
            return;
        }
        // bit-reversal permutation
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let w = self.twiddles[k * stride];
                    let a = buf[start + k];
                    let b = buf[start + k + len / 2] * w;
                    buf[start + k] = a + b;
                    buf[start + k + len / 2] = a - b;
                }
            }
            len <<= 1;
        }
    }

    /// Unnormalized inverse DFT: Y[j] = Σ_k x[k] e^{+2πijk/n}, in place.
    /// (Divide by n for the true inverse; the Weyl kernel wants the raw sum.)
    pub fn inverse_unnormalized(&self, buf: &mut [C64]) {
        for z in buf.iter_mut() {
            *z = z.conj();
        }
        self.forward(buf);
        for z in buf.iter_mut() {
            *z = z.conj();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive_dft(x: &[C64]) -> Vec<C64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &v) in x.iter().enumerate() {
                    acc += v * cis(-crate::util::TWO_PI * (j * k) as f64 / n as f64);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let n = 16;
        let plan = FftPlan::new(n);
        let mut x: Vec<C64> = (0..n)
            .map(|j| C64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let expect = naive_dft(&x);
        plan.forward(&mut x);
        for (a, b) in x.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let n = 64;
        let plan = FftPlan::new(n);
        let orig: Vec<C64> = (0..n)
            .map(|j| C64::new((j as f64).cos(), (2.0 * j as f64).sin()))
            .collect();
        let mut x = orig.clone();
        plan.forward(&mut x);
        plan.inverse_unnormalized(&mut x);
        for (a, b) in x.iter().zip(&orig) {
            assert!((a / n as f64 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_transforms_to_ones() {
        let plan = FftPlan::new(8);
        let mut x = vec![C64::new(0.0, 0.0); 8];
        x[0] = C64::new(1.0, 0.0);
        plan.forward(&mut x);
        for v in x {
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }
}
