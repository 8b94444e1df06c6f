//! Numerics for the Bargmann–Fock space H²(dμ), dμ = (2π)⁻ⁿ e^{−|z|²/2} dv.
//!
//! The crate provides the quadrature layer ([`numint`]), the space itself
//! ([`fock`]), the heat semigroup ([`heat`]), truncated Toeplitz matrices
//! ([`toeplitz`]), a discretized Weyl calculus on L²(ℝ) ([`weyl`]), the
//! compactly supported oscillatory block symbols a_R and their inverse-heat
//! images g_R ([`blocks`]), and the Toeplitz↔Weyl norm bridge
//! ([`correspondence`]).
//!
//! Everything is `no_std` + `alloc`; float math goes through `libm`, so
//! results are bit-identical across platforms. All quadrature reductions run
//! in a fixed order (compensated summation), so every value in this crate is
//! deterministic regardless of how callers schedule the work.

#![no_std]
#![deny(unsafe_code)]
// Bounds are spelled !(x > 0.0) so NaN fails closed; the partial_cmp form
// clippy suggests would let it through. Reference constants and quadrature
// tables keep their source's full digits even past binary64 resolution.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

extern crate alloc;

pub mod blocks;
pub mod correspondence;
pub mod fft;
pub mod fock;
pub mod heat;
pub mod linalg;
pub mod numint;
pub mod toeplitz;
pub mod util;
pub mod weyl;

use core::fmt;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Failure modes surfaced by the library. Quadrature that merely misses its
/// tolerance is not an error; it is reported through result flags.
#[derive(Debug, Clone, PartialEq)]
pub enum NumError {
    /// A precondition on the arguments was violated.
    InvalidArgument(&'static str),
    /// The request exceeds a documented floating-point budget
    /// (e.g. assembling g_R with R beyond the cancellation budget).
    Budget(&'static str),
    /// Paper-mode schedules carry centers of magnitude e^{m⁷}; numeric
    /// evaluation is refused for m ≥ 2 and the data is reported in log-space.
    PaperModeSymbolic,
    /// The degree-N projection of the coherent state drops too much mass for
    /// the matrix-side Berezin value to be meaningful.
    ProjectionTail { tail: f64 },
}

impl fmt::Display for NumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumError::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            NumError::Budget(what) => write!(f, "numerical budget exceeded: {what}"),
            NumError::PaperModeSymbolic => {
                write!(f, "paper-mode schedule is symbolic only beyond m = 1")
            }
            NumError::ProjectionTail { tail } => {
                write!(f, "coherent-state projection tail {tail:.3e} exceeds 1e-6")
            }
        }
    }
}

impl core::error::Error for NumError {}

pub type Result<T> = core::result::Result<T, NumError>;
