//! Thin wrappers around `rustfft` with per-thread plan caches.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward DFT, `X[k] = Σ x[n] e^{-j2πkn/N}`.
pub fn forward(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Inverse DFT including the `1/N` factor.
pub fn inverse(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Spectrum of a real sequence.
pub fn spectrum(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    buf
}

/// Imaginary residue tolerated when a Hermitian spectrum is mapped back to a
/// real sequence, relative to `max(1, max |re|)`.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// Inverse DFT of a spectrum that must belong to a real sequence.
pub fn real_inverse(mut buf: Vec<Complex64>) -> Result<Vec<f64>> {
    inverse(&mut buf);
    let (mut max_re, mut max_im) = (0.0f64, 0.0f64);
    for v in &buf {
        max_re = max_re.max(v.re.abs());
        max_im = max_im.max(v.im.abs());
    }
    if max_im > IMAG_RESIDUE_TOL * max_re.max(1.0) {
        return Err(Error::ImaginaryResidue(max_im));
    }
    Ok(buf.into_iter().map(|v| v.re).collect())
}
