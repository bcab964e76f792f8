//! Sampled frequency axes and responses.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Angle of DFT bin `k` on an `n`-point grid, mapped to `(-π, π]`.
///
/// Bin `n/2` maps to exactly `+π`; bins above it are shifted down by `2π`, so
/// bins `k` and `n - k` carry exactly opposite angles.
pub fn bin_angle(k: usize, n: usize) -> f64 {
    let k = k % n;
    if 2 * k == n {
        PI
    } else if 2 * k > n {
        -(2.0 * PI * (n - k) as f64 / n as f64)
    } else {
        2.0 * PI * k as f64 / n as f64
    }
}

/// Reduce an angle to `(-π, π]`.
pub fn wrap_angle(omega: f64) -> f64 {
    if omega > -PI && omega <= PI {
        return omega;
    }
    let two_pi = 2.0 * PI;
    let mut w = omega % two_pi;
    if w > PI {
        w -= two_pi;
    } else if w <= -PI {
        w += two_pi;
    }
    w
}

/// `e^{jω}` with exact values at the multiples of `π/2`.
pub fn cis(omega: f64) -> Complex64 {
    let w = wrap_angle(omega);
    if w == PI {
        Complex64::new(-1.0, 0.0)
    } else if w == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if w == PI / 2.0 {
        Complex64::new(0.0, 1.0)
    } else if w == -PI / 2.0 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(w.cos(), w.sin())
    }
}

/// `(sin(ω/2), cos(ω/2))` for `ω ∈ (-π, π]`, exact at `0` and `π`.
pub(crate) fn half_sincos(omega: f64) -> (f64, f64) {
    if omega == PI {
        (1.0, 0.0)
    } else if omega == 0.0 {
        (0.0, 1.0)
    } else {
        (omega / 2.0).sin_cos()
    }
}

/// `n` uniformly spaced DFT frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrequencyGrid {
    n: usize,
}

impl FrequencyGrid {
    /// The length must be a power of two and at least 4.
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidLength {
                len: n,
                reason: "frequency grids need a power-of-two length of at least 4",
            });
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn omega(&self, k: usize) -> f64 {
        bin_angle(k, self.n)
    }

    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    /// Bin carrying the opposite frequency (`-ω`).
    pub fn mirror(&self, k: usize) -> usize {
        (self.n - k % self.n) % self.n
    }

    /// Bin carrying `ω + π`.
    pub fn modulated(&self, k: usize) -> usize {
        (k + self.n / 2) % self.n
    }

    /// Bin carrying `π - ω`, i.e. the point `-e^{-jω}` on the unit circle.
    pub fn conjugate_mirror(&self, k: usize) -> usize {
        (self.n / 2 + self.n - k % self.n) % self.n
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.omega(k))
    }

    /// Grid of half the length (the grid seen after one decimation).
    pub fn halved(&self) -> Result<Self> {
        Self::new(self.n / 2)
    }
}

/// Complex frequency samples on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexResponse {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
    real_time_domain: bool,
}

impl ComplexResponse {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>, real_time_domain: bool) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            values,
            real_time_domain,
        })
    }

    /// Sample `f(ω)` at every bin.
    pub fn from_fn(grid: FrequencyGrid, real_time_domain: bool, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.omegas().map(f).collect();
        Self {
            grid,
            values,
            real_time_domain,
        }
    }

    pub fn constant(grid: FrequencyGrid, value: Complex64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
            real_time_domain: value.im == 0.0,
        }
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn at(&self, k: usize) -> Complex64 {
        self.values[k % self.values.len()]
    }

    /// Whether the response belongs to a real-valued time-domain filter.
    pub fn is_real_time_domain(&self) -> bool {
        self.real_time_domain
    }

    /// Largest deviation from `values[n-k] = conj(values[k])`.
    pub fn hermitian_deviation(&self) -> f64 {
        (0..self.len())
            .map(|k| (self.values[self.grid.mirror(k)] - self.values[k].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Bin-wise product.
    pub fn product(&self, other: &ComplexResponse) -> Result<ComplexResponse> {
        if self.grid != other.grid {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(ComplexResponse {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            real_time_domain: self.real_time_domain && other.real_time_domain,
        })
    }

    /// Largest bin-wise distance to another response on the same grid.
    pub fn max_distance(&self, other: &ComplexResponse) -> f64 {
        assert_eq!(self.grid, other.grid, "responses live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> (usize, f64) {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| (k, v.norm()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }
}
