//! Matrix exponential by scaling and squaring with a Taylor kernel.

use nalgebra::DMatrix;
#[allow(unused_imports)] // float math is inherent in `core` on recent toolchains
use num_traits::Float;

use crate::{Error, Result};

/// Target accuracy of the Taylor kernel relative to the kernel's norm.
const KERNEL_TOL: f64 = 1e-12 * f64::EPSILON;
const MAX_TERMS: usize = 40;

fn norm_one(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` for a small dense square matrix.
///
/// The argument is scaled by `2^-s` so that its 1-norm is at most 1/2, the
/// Taylor series is summed until the next term is negligible, and the result
/// is squared `s` times.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension("matrix exponential needs a square matrix".into()));
    }
    let norm = norm_one(a);
    if !norm.is_finite() {
        return Err(Error::numerical("matrix exponential of a non-finite matrix"));
    }
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    if squarings > 1000 {
        return Err(Error::numerical("matrix exponential argument too large"));
    }
    let scaled = a * (0.5f64).powi(squarings as i32);
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut converged = false;
    for k in 1..=MAX_TERMS {
        term = &term * &scaled / k as f64;
        sum += &term;
        if norm_one(&term) <= KERNEL_TOL.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::numerical("matrix exponential series did not converge"));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if sum.iter().any(|x| !x.is_finite()) {
        return Err(Error::numerical("matrix exponential overflowed"));
    }
    Ok(sum)
}
