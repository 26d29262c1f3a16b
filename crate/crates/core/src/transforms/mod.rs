//! Linear kernels used by the hashing pipelines.
//!
//! Every fast kernel has a quadratic counterpart in [`oracle`] that
//! materializes the matrix explicitly; tests compare the two.

mod circulant;
mod diagonal;
mod fft;
mod gaussian;
mod hadamard;
mod kac;
pub mod oracle;
mod toeplitz;

pub use circulant::{circulant_multiply, CirculantSpec};
pub use diagonal::{apply_diagonal, RademacherDiagonal};
pub use fft::{fft, ComplexBuffer, FftPlan};
pub use gaussian::{gaussian_matrix_multiply, GaussianMatrix};
pub use hadamard::{fwht_in_place, fwht_normalized};
pub use kac::{apply_kac_walk, default_step_count, sample_kac_walk, GivensStep, KacWalk};
pub use toeplitz::{toeplitz_multiply, ToeplitzSpec};

use crate::{Error, Result};

pub(crate) fn check_pow2(n: usize, what: &str) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::dim(format!("{what} requires a power-of-two length, got {n}")));
    }
    Ok(())
}

pub(crate) fn check_len(expected: usize, actual: usize, what: &str) -> Result<()> {
    if expected != actual {
        return Err(Error::mismatch(what, expected, actual));
    }
    Ok(())
}
