//! Hilbert-transform pairs of fractional B-spline wavelets and the dual-tree
//! "Gabor-like" complex wavelet transform built from them.
//!
//! The crate is organized bottom-up:
//!
//! * [`spline`] evaluates fractional B-splines, refinement filters, the
//!   fractional finite-difference operator, the discrete Hilbert filter and the
//!   autocorrelation (Gram) filter in closed form, in the frequency domain.
//! * [`filters`] samples the semi-orthogonal spline filter bank on DFT grids,
//!   derives the Hilbert-pair channel by modulation and checks perfect
//!   reconstruction.
//! * [`transform1d`] and [`transform2d`] run the periodic FFT-based dual-tree
//!   transforms and their left inverses.
//! * [`gabor`] holds the asymptotic Gabor forms and the localization measures.
//!
//! All filters exist only as frequency samples; nothing is truncated in time.

pub mod error;
pub mod fft;
pub mod filters;
pub mod gabor;
pub mod grid;
pub mod spline;
pub mod transform1d;
pub mod transform2d;

pub use error::{Error, Result};
pub use filters::{ChannelFilters, DualTreeDesign, LevelFilters};
pub use grid::{ComplexResponse, FrequencyGrid};
pub use num_complex::Complex64;
pub use spline::SplineParams;
pub use transform1d::{Pyramid1D, Signal1D};
pub use transform2d::{ChannelTable, Matrix, Pyramid2D};
