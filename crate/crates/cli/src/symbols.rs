//! The finite partial sum S_M = Σ_{m≤M} g_m as one evaluable symbol, plus
//! the fixed Schwartz corpus the experiments sample.

use focklab_core::blocks::{block_symbol, BlockSchedule, BlockSymbol, BumpProfile};
use focklab_core::fock::{DecayClass, GaussianSymbol, Symbol};
use focklab_core::C64;

use crate::HarnessError;

/// Σ_{m≤M} c_m·g_{R_m}(z − a_m). Heat transforms decompose over the blocks
/// by linearity, which the harness tests against the blockwise closed form.
pub struct SumSymbol {
    blocks: Vec<BlockSymbol>,
}

impl SumSymbol {
    /// Tame schedules only: a paper-mode sum has no numeric representation.
    pub fn new(
        profile: &BumpProfile,
        schedule: &BlockSchedule,
        m_max: usize,
    ) -> Result<Self, HarnessError> {
        let m_max = m_max.min(schedule.blocks);
        if m_max == 0 {
            return Err(HarnessError::Config("sum symbol needs at least one block".into()));
        }
        let mut blocks = Vec::with_capacity(m_max);
        for m in 1..=m_max {
            blocks.push(block_symbol(profile, schedule, m)?);
        }
        Ok(Self { blocks })
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

impl Symbol for SumSymbol {
    fn eval(&self, z: &[f64]) -> C64 {
        self.blocks.iter().map(|b| b.eval(z)).sum()
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Schwartz
    }

    fn band_limit(&self) -> Option<f64> {
        self.blocks
            .iter()
            .filter_map(|b| b.band_limit())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    fn eval_tensor(&self, xs: &[f64], ys: &[f64], out: &mut [C64]) -> bool {
        let len = xs.len() * ys.len();
        let mut buf = vec![C64::new(0.0, 0.0); len];
        for cell in out[..len].iter_mut() {
            *cell = C64::new(0.0, 0.0);
        }
        for b in &self.blocks {
            if !b.eval_tensor(xs, ys, &mut buf) {
                return false;
            }
            for (o, v) in out[..len].iter_mut().zip(&buf) {
                *o += *v;
            }
        }
        true
    }
}

/// g(x, ξ) = cos(3x)·e^{−(x²+ξ²)/2}: the non-radial Schwartz member of the
/// Hilbert–Schmidt corpus. ‖g‖₂ = √(π(1+e^{−9})/2).
pub struct ModulatedGaussian;

impl ModulatedGaussian {
    pub fn l2_norm() -> f64 {
        (core::f64::consts::PI * (1.0 + (-9.0f64).exp()) / 2.0).sqrt()
    }
}

impl Symbol for ModulatedGaussian {
    fn eval(&self, z: &[f64]) -> C64 {
        C64::new(
            (3.0 * z[0]).cos() * (-0.5 * (z[0] * z[0] + z[1] * z[1])).exp(),
            0.0,
        )
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Schwartz
    }

    fn numerical_support(&self) -> Option<f64> {
        Some(9.0)
    }

    fn eval_tensor(&self, xs: &[f64], ys: &[f64], out: &mut [C64]) -> bool {
        let ex: Vec<f64> = xs
            .iter()
            .map(|&x| (3.0 * x).cos() * (-0.5 * x * x).exp())
            .collect();
        for (i, &vx) in ex.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                out[i * ys.len() + j] = C64::new(vx * (-0.5 * y * y).exp(), 0.0);
            }
        }
        true
    }
}

/// Radial Gaussian with its exact L² norm, for reference columns.
pub fn gaussian_with_norm(beta: f64) -> (GaussianSymbol, f64) {
    let sym = GaussianSymbol::centered(beta, 2);
    // ∫ e^{−2β|z|²} dv = π/(2β) over ℝ²
    let l2 = (core::f64::consts::PI / (2.0 * beta)).sqrt();
    (sym, l2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_block_sum_matches_block() {
        let profile = BumpProfile::new(2).unwrap();
        let sched = BlockSchedule::tame_default();
        let sum = SumSymbol::new(&profile, &sched, 1).unwrap();
        let blk = block_symbol(&profile, &sched, 1).unwrap();
        for z in [[20.0, 0.0], [21.5, -0.4], [18.0, 1.0]] {
            let d = (sum.eval(&z) - blk.eval(&z)).norm();
            assert!(d < 1e-12, "pointwise gap {d:.2e} at {z:?}");
        }
    }

    #[test]
    fn tensor_path_matches_pointwise() {
        let profile = BumpProfile::new(2).unwrap();
        let sched = BlockSchedule::tame_default();
        let sum = SumSymbol::new(&profile, &sched, 2).unwrap();
        let xs = [19.0, 20.0, 41.0];
        let ys = [-0.5, 0.25];
        let mut grid = vec![C64::new(0.0, 0.0); xs.len() * ys.len()];
        assert!(sum.eval_tensor(&xs, &ys, &mut grid));
        // the tensor and pointwise routes run independent quadratures, so
        // they agree to quadrature accuracy, not machine precision
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let direct = sum.eval(&[x, y]);
                let d = (grid[i * ys.len() + j] - direct).norm();
                assert!(d < 1e-6 * direct.norm().max(1.0), "gap {d:.2e}");
            }
        }
    }

    #[test]
    fn modulated_gaussian_norm_and_tensor() {
        let m = ModulatedGaussian;
        let v = m.eval(&[0.4, -0.2]);
        assert!((v.re - (1.2f64).cos() * (-0.5 * 0.2f64).exp()).abs() < 1e-15);
        let xs = [0.0, 0.4];
        let ys = [-0.2, 0.0, 0.3];
        let mut grid = vec![C64::new(0.0, 0.0); 6];
        assert!(m.eval_tensor(&xs, &ys, &mut grid));
        assert!((grid[3] - v).norm() < 1e-15);
        assert!((ModulatedGaussian::l2_norm() - 1.2534).abs() < 1e-3);
    }
}
