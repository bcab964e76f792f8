//! Four-channel separable 2D dual-tree transform with six oriented complex
//! subbands per level.
//!
//! Images are stored row-major with rows along `y` and columns along `x`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft;
use crate::filters::{ChannelFilters, DualTreeDesign, LevelFilters};
use crate::spline::SplineParams;
use crate::transform1d::{
    analyze_level, dense_spectrum, project, render_frequency, render_real_wavelet, render_scaling, scaling_ft,
    synthesize_level, unproject, wavelet_ft, WaveletKind,
};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CMatrix = Matrix<Complex64>;

impl<T: Copy + Default + Send + Sync> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Self { rows, cols, data }
    }

    fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn map<U: Copy + Default + Send + Sync>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Matrix<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

impl Matrix<Complex64> {
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn re(&self) -> Matrix<f64> {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> Matrix<f64> {
        self.map(|z| z.im)
    }
}

/// Apply a row-wise 1D operation producing two outputs per row.
fn split_rows(m: &Matrix, op: impl Fn(&[f64]) -> Result<(Vec<f64>, Vec<f64>)> + Sync) -> Result<(Matrix, Matrix)> {
    let pairs: Result<Vec<(Vec<f64>, Vec<f64>)>> = (0..m.rows).into_par_iter().map(|r| op(m.row(r))).collect();
    let (a, b): (Vec<_>, Vec<_>) = pairs?.into_iter().unzip();
    Ok((Matrix::from_rows(a), Matrix::from_rows(b)))
}

fn map_rows(m: &Matrix, op: impl Fn(&[f64]) -> Result<Vec<f64>> + Sync) -> Result<Matrix> {
    let rows: Result<Vec<Vec<f64>>> = (0..m.rows).into_par_iter().map(|r| op(m.row(r))).collect();
    Ok(Matrix::from_rows(rows?))
}

fn merge_rows(a: &Matrix, b: &Matrix, op: impl Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Sync) -> Result<Matrix> {
    let rows: Result<Vec<Vec<f64>>> = (0..a.rows).into_par_iter().map(|r| op(a.row(r), b.row(r))).collect();
    Ok(Matrix::from_rows(rows?))
}

/// Which of the two 1D channels (`τ` or `τ + ½`) an axis uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shift {
    Tau,
    TauHalf,
}

/// One of the four separable multiresolutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelEntry {
    /// Channel index `n` in `1..=4`.
    pub n: usize,
    pub x: Shift,
    pub y: Shift,
}

/// The four channels, in order: `(τ, τ)`, `(τ, τ+½)`, `(τ+½, τ)`, `(τ+½, τ+½)`
/// as `(x, y)` shifts.
pub const CHANNELS: [ChannelEntry; 4] = [
    ChannelEntry {
        n: 1,
        x: Shift::Tau,
        y: Shift::Tau,
    },
    ChannelEntry {
        n: 2,
        x: Shift::Tau,
        y: Shift::TauHalf,
    },
    ChannelEntry {
        n: 3,
        x: Shift::TauHalf,
        y: Shift::Tau,
    },
    ChannelEntry {
        n: 4,
        x: Shift::TauHalf,
        y: Shift::TauHalf,
    },
];

/// Per-axis filters for the four channels of a 2D transform.
#[derive(Debug, Clone)]
pub struct ChannelTable {
    pub params: SplineParams,
    pub rows: usize,
    pub cols: usize,
    pub levels: usize,
    pub entries: [ChannelEntry; 4],
    x_design: Arc<DualTreeDesign>,
    y_design: Arc<DualTreeDesign>,
}

fn pick(design: &DualTreeDesign, s: Shift) -> &ChannelFilters {
    match s {
        Shift::Tau => &design.channel_a,
        Shift::TauHalf => &design.channel_b,
    }
}

impl ChannelTable {
    /// Filters along `x` (row direction) for channel index `n` in `1..=4`.
    pub fn x_filters(&self, n: usize) -> &ChannelFilters {
        pick(&self.x_design, self.entries[n - 1].x)
    }

    /// Filters along `y` (column direction) for channel index `n` in `1..=4`.
    pub fn y_filters(&self, n: usize) -> &ChannelFilters {
        pick(&self.y_design, self.entries[n - 1].y)
    }

    /// Separable pre-filter `P_x(ω_x) P_y(ω_y)` of channel `n` at bin `(ky, kx)`.
    pub fn prefilter_at(&self, n: usize, ky: usize, kx: usize) -> Complex64 {
        self.x_filters(n).prefilter.at(kx) * self.y_filters(n).prefilter.at(ky)
    }
}

/// Instantiate the per-axis 1D designs for an image of `rows x cols`.
pub fn build_channel_table(p: SplineParams, rows: usize, cols: usize, levels: usize) -> Result<ChannelTable> {
    let x_design = DualTreeDesign::cached(p, cols, levels)?;
    let y_design = if rows == cols {
        Arc::clone(&x_design)
    } else {
        DualTreeDesign::cached(p, rows, levels)?
    };
    Ok(ChannelTable {
        params: p,
        rows,
        cols,
        levels,
        entries: CHANNELS,
        x_design,
        y_design,
    })
}

/// Separable subbands of one level of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    /// Lowpass along `x`, highpass along `y`.
    LH,
    /// Highpass along `x`, lowpass along `y`.
    HL,
    HH,
}

/// Slot assignment of the twelve real highpass subbands: `ZETA[k]` feeds the
/// real part and `XI[k]` the imaginary part of orientation `k + 1` (before
/// mixing).
pub const ZETA: [(Band, usize); 6] = [
    (Band::HL, 1),
    (Band::HL, 2),
    (Band::LH, 1),
    (Band::LH, 3),
    (Band::HH, 1),
    (Band::HH, 4),
];

pub const XI: [(Band, usize); 6] = [
    (Band::HL, 3),
    (Band::HL, 4),
    (Band::LH, 2),
    (Band::LH, 4),
    (Band::HH, 2),
    (Band::HH, 3),
];

/// Orthonormal 6x6 mixing operators acting subband-wise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingMatrices {
    pub lambda_r: [[f64; 6]; 6],
    pub lambda_i: [[f64; 6]; 6],
}

impl Default for MixingMatrices {
    fn default() -> Self {
        let mut lr = [[0.0; 6]; 6];
        let mut li = [[0.0; 6]; 6];
        for k in 0..4 {
            lr[k][k] = 1.0;
            li[k][k] = 1.0;
        }
        let h = FRAC_1_SQRT_2;
        lr[4] = [0.0, 0.0, 0.0, 0.0, h, -h];
        lr[5] = [0.0, 0.0, 0.0, 0.0, h, h];
        li[4] = [0.0, 0.0, 0.0, 0.0, h, h];
        li[5] = [0.0, 0.0, 0.0, 0.0, h, -h];
        Self {
            lambda_r: lr,
            lambda_i: li,
        }
    }
}

impl MixingMatrices {
    /// `max |Λ Λᵀ - I|` over both operators.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in [&self.lambda_r, &self.lambda_i] {
            for i in 0..6 {
                for j in 0..6 {
                    let dot: f64 = (0..6).map(|k| m[i][k] * m[j][k]).sum();
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((dot - target).abs());
                }
            }
        }
        worst
    }
}

fn combine(m: &[[f64; 6]; 6], row: usize, parts: &[Matrix], transpose: bool) -> Matrix {
    let (rows, cols) = parts[0].dims();
    let mut out = Matrix::zeros(rows, cols);
    for (l, part) in parts.iter().enumerate() {
        let c = if transpose { m[l][row] } else { m[row][l] };
        if c == 0.0 {
            continue;
        }
        for (o, v) in out.data.iter_mut().zip(&part.data) {
            *o += c * v;
        }
    }
    out
}

fn check_six(parts: &[Matrix]) -> Result<()> {
    if parts.len() != 6 || parts.iter().any(|p| p.dims() != parts[0].dims()) {
        return Err(Error::ShapeMismatch("mixing needs six equally sized subbands".into()));
    }
    Ok(())
}

/// `w = Λ_R ζ + j Λ_I ξ`.
pub fn mix_subbands(zeta: &[Matrix], xi: &[Matrix], m: &MixingMatrices) -> Result<Vec<CMatrix>> {
    check_six(zeta)?;
    check_six(xi)?;
    if zeta[0].dims() != xi[0].dims() {
        return Err(Error::ShapeMismatch("real and imaginary groups differ in size".into()));
    }
    Ok((0..6)
        .map(|k| {
            let re = combine(&m.lambda_r, k, zeta, false);
            let im = combine(&m.lambda_i, k, xi, false);
            Matrix {
                rows: re.rows,
                cols: re.cols,
                data: re
                    .data
                    .iter()
                    .zip(&im.data)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect(),
            }
        })
        .collect())
}

/// `ζ = Λ_Rᵀ Re(w)`, `ξ = Λ_Iᵀ Im(w)`.
pub fn unmix_subbands(w: &[CMatrix], m: &MixingMatrices) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
    let re: Vec<Matrix> = w.iter().map(CMatrix::re).collect();
    let im: Vec<Matrix> = w.iter().map(CMatrix::im).collect();
    check_six(&re)?;
    let zeta = (0..6).map(|k| combine(&m.lambda_r, k, &re, true)).collect();
    let xi = (0..6).map(|k| combine(&m.lambda_i, k, &im, true)).collect();
    Ok((zeta, xi))
}

/// Preferred orientation of each complex subband.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionTable {
    pub theta: [f64; 6],
}

impl Default for DirectionTable {
    fn default() -> Self {
        Self {
            theta: [0.0, 0.0, PI / 2.0, PI / 2.0, PI / 4.0, 3.0 * PI / 4.0],
        }
    }
}

/// Output of the 2D transform. `w[i][k]` is orientation `k + 1` at level `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid2D {
    pub levels: usize,
    pub lowpass: Vec<Matrix>,
    pub w: Vec<Vec<CMatrix>>,
}

impl Pyramid2D {
    pub fn zeros(rows: usize, cols: usize, levels: usize) -> Self {
        Self {
            levels,
            lowpass: vec![Matrix::zeros(rows >> levels, cols >> levels); 4],
            w: (1..=levels)
                .map(|i| vec![CMatrix::zeros(rows >> i, cols >> i); 6])
                .collect(),
        }
    }

    /// Number of real coefficients.
    pub fn coefficient_count(&self) -> usize {
        let low: usize = self.lowpass.iter().map(|m| m.data.len()).sum();
        low + 2 * self.w.iter().flatten().map(|m| m.data.len()).sum::<usize>()
    }

    fn check_shape(&self, rows: usize, cols: usize, levels: usize) -> Result<()> {
        let ok = self.levels == levels
            && self.lowpass.len() == 4
            && self
                .lowpass
                .iter()
                .all(|m| m.dims() == (rows >> levels, cols >> levels))
            && self.w.len() == levels
            && self
                .w
                .iter()
                .enumerate()
                .all(|(i, ws)| ws.len() == 6 && ws.iter().all(|m| m.dims() == (rows >> (i + 1), cols >> (i + 1))));
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "pyramid does not match a {levels}-level table for a {rows}x{cols} image"
            )))
        }
    }
}

fn transpose_rows(m: &Matrix, op: impl Fn(&[f64]) -> Result<Vec<f64>> + Sync) -> Result<Matrix> {
    Ok(map_rows(&m.transpose(), op)?.transpose())
}

/// Separable projection onto one of the four approximation spaces.
fn project2d(img: &Matrix, px: &ChannelFilters, py: &ChannelFilters) -> Result<Matrix> {
    let rows = map_rows(img, |r| project(r, &px.prefilter))?;
    transpose_rows(&rows, |c| project(c, &py.prefilter))
}

fn unproject2d(c: &Matrix, px: &ChannelFilters, py: &ChannelFilters) -> Result<Matrix> {
    let rows = map_rows(c, |r| unproject(r, &px.prefilter))?;
    transpose_rows(&rows, |c| unproject(c, &py.prefilter))
}

struct LevelBands {
    ll: Matrix,
    lh: Matrix,
    hl: Matrix,
    hh: Matrix,
}

fn analyze2d(c: &Matrix, fx: &LevelFilters, fy: &LevelFilters) -> Result<LevelBands> {
    let (lx, hx) = split_rows(c, |r| analyze_level(r, &fx.h_tilde, &fx.g_tilde))?;
    let cols = |m: &Matrix| -> Result<(Matrix, Matrix)> {
        let (a, b) = split_rows(&m.transpose(), |r| analyze_level(r, &fy.h_tilde, &fy.g_tilde))?;
        Ok((a.transpose(), b.transpose()))
    };
    let ((ll, lh), (hl, hh)) = {
        let (a, b) = rayon::join(|| cols(&lx), || cols(&hx));
        (a?, b?)
    };
    Ok(LevelBands { ll, lh, hl, hh })
}

fn synthesize2d(b: &LevelBands, fx: &LevelFilters, fy: &LevelFilters) -> Result<Matrix> {
    let cols = |l: &Matrix, h: &Matrix| -> Result<Matrix> {
        Ok(merge_rows(&l.transpose(), &h.transpose(), |a, c| {
            synthesize_level(a, c, &fy.h, &fy.g)
        })?
        .transpose())
    };
    let (lx, hx) = rayon::join(|| cols(&b.ll, &b.lh), || cols(&b.hl, &b.hh));
    let (lx, hx) = (lx?, hx?);
    merge_rows(&lx, &hx, |a, c| synthesize_level(a, c, &fx.h, &fx.g))
}

/// Per-channel decomposition: lowpass at level `J` and `(LH, HL, HH)` per level.
type ChannelOutput = (Matrix, Vec<[Matrix; 3]>);

fn analyze_channel2d(img: &Matrix, table: &ChannelTable, n: usize) -> Result<ChannelOutput> {
    let fx = table.x_filters(n);
    let fy = table.y_filters(n);
    let mut c = project2d(img, fx, fy)?;
    let mut highs = Vec::with_capacity(table.levels);
    for i in 0..table.levels {
        let b = analyze2d(&c, &fx.levels[i], &fy.levels[i])?;
        highs.push([b.lh, b.hl, b.hh]);
        c = b.ll;
    }
    Ok((c, highs))
}

fn band_index(b: Band) -> usize {
    match b {
        Band::LH => 0,
        Band::HL => 1,
        Band::HH => 2,
    }
}

/// Forward 2D transform.
pub fn dtcwt2d_forward(image: &Matrix, table: &ChannelTable) -> Result<Pyramid2D> {
    if image.dims() != (table.rows, table.cols) {
        return Err(Error::ShapeMismatch(format!(
            "image is {}x{}, table expects {}x{}",
            image.rows, image.cols, table.rows, table.cols
        )));
    }
    let outs: Result<Vec<ChannelOutput>> = (1..=4)
        .into_par_iter()
        .map(|n| analyze_channel2d(image, table, n))
        .collect();
    let outs = outs?;
    let mixing = MixingMatrices::default();
    let mut w = Vec::with_capacity(table.levels);
    for i in 0..table.levels {
        let gather = |slots: &[(Band, usize); 6]| -> Vec<Matrix> {
            slots
                .iter()
                .map(|&(b, n)| outs[n - 1].1[i][band_index(b)].clone())
                .collect()
        };
        w.push(mix_subbands(&gather(&ZETA), &gather(&XI), &mixing)?);
    }
    Ok(Pyramid2D {
        levels: table.levels,
        lowpass: outs.into_iter().map(|(c, _)| c).collect(),
        w,
    })
}

/// Left inverse: unmix, undo the permutation, invert each channel,
/// un-project and average the four reconstructions.
pub fn dtcwt2d_inverse(p: &Pyramid2D, table: &ChannelTable) -> Result<Matrix> {
    p.check_shape(table.rows, table.cols, table.levels)?;
    let mixing = MixingMatrices::default();
    // highs[n-1][i][band]
    let mut highs: Vec<Vec<[Matrix; 3]>> = (0..4)
        .map(|_| {
            (0..table.levels)
                .map(|i| {
                    let z = Matrix::zeros(table.rows >> (i + 1), table.cols >> (i + 1));
                    [z.clone(), z.clone(), z]
                })
                .collect()
        })
        .collect();
    for (i, level) in p.w.iter().enumerate() {
        let (zeta, xi) = unmix_subbands(level, &mixing)?;
        for (slots, parts) in [(&ZETA, zeta), (&XI, xi)] {
            for (&(b, n), m) in slots.iter().zip(parts) {
                highs[n - 1][i][band_index(b)] = m;
            }
        }
    }
    let recon: Result<Vec<Matrix>> = (1..=4)
        .into_par_iter()
        .map(|n| {
            let fx = table.x_filters(n);
            let fy = table.y_filters(n);
            let mut c = p.lowpass[n - 1].clone();
            for i in (0..table.levels).rev() {
                let [lh, hl, hh] = highs[n - 1][i].clone();
                c = synthesize2d(&LevelBands { ll: c, lh, hl, hh }, &fx.levels[i], &fy.levels[i])?;
            }
            unproject2d(&c, fx, fy)
        })
        .collect();
    let recon = recon?;
    let mut out = Matrix::zeros(table.rows, table.cols);
    for r in &recon {
        for (o, v) in out.data.iter_mut().zip(&r.data) {
            *o += 0.25 * v;
        }
    }
    Ok(out)
}

/// 1D building blocks `(φ, φ', ψ, ψ')` evaluated by some backend.
struct Factors<T> {
    phi: T,
    phi_b: T,
    psi: T,
    psi_b: T,
}

fn check_orientation(k: usize) -> Result<()> {
    if (1..=6).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidOrientation(k))
    }
}

/// Combine separable factors into the real and imaginary parts of `Ψ_k` at a
/// point, given the `x` factors `fx` and `y` factors `fy`.
fn combine_parts<T>(k: usize, fx: &Factors<T>, fy: &Factors<T>) -> (T, T)
where
    T: Copy
        + std::ops::Mul<Output = T>
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>,
{
    let h = FRAC_1_SQRT_2;
    match k {
        1 => (fx.psi * fy.phi, fx.psi_b * fy.phi),
        2 => (fx.psi * fy.phi_b, fx.psi_b * fy.phi_b),
        3 => (fx.phi * fy.psi, fx.phi * fy.psi_b),
        4 => (fx.phi_b * fy.psi, fx.phi_b * fy.psi_b),
        5 => (
            (fx.psi * fy.psi - fx.psi_b * fy.psi_b) * h,
            (fx.psi * fy.psi_b + fx.psi_b * fy.psi) * h,
        ),
        6 => (
            (fx.psi * fy.psi + fx.psi_b * fy.psi_b) * h,
            (fx.psi * fy.psi_b - fx.psi_b * fy.psi) * h,
        ),
        _ => unreachable!("orientation checked by caller"),
    }
}

/// Square render grid: `n x n` samples at `2^octaves` per unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub n: usize,
    pub octaves: u32,
}

/// Dense samples of `Ψ_k` (primal B-spline family), rows along `y`.
pub fn render_wavelet2d(k: usize, p: SplineParams, res: Resolution) -> Result<CMatrix> {
    render_wavelet2d_kind(k, p, WaveletKind::Primal, res)
}

pub fn render_wavelet2d_kind(k: usize, p: SplineParams, kind: WaveletKind, res: Resolution) -> Result<CMatrix> {
    check_orientation(k)?;
    let Resolution { n, octaves } = res;
    let q = p.shifted();
    let f = Factors {
        phi: render_scaling(p, kind, n, octaves)?,
        phi_b: render_scaling(q, kind, n, octaves)?,
        psi: render_real_wavelet(p, kind, n, octaves)?,
        psi_b: render_real_wavelet(q, kind, n, octaves)?,
    };
    let at = |i: usize| Factors {
        phi: f.phi[i],
        phi_b: f.phi_b[i],
        psi: f.psi[i],
        psi_b: f.psi_b[i],
    };
    Ok(CMatrix::from_fn(n, n, |r, c| {
        let (re, im) = combine_parts(k, &at(c), &at(r));
        Complex64::new(re, im)
    }))
}

/// Fourier transforms of `Re(Ψ_k)` and `Im(Ψ_k)` sampled on the dense render
/// grid (natural bin order, rows along `ω_y`).
pub fn wavelet2d_spectra(k: usize, p: SplineParams, kind: WaveletKind, res: Resolution) -> Result<(CMatrix, CMatrix)> {
    check_orientation(k)?;
    let Resolution { n, octaves } = res;
    // validates the resolution
    render_scaling(p, kind, 16 << octaves, octaves)?;
    let q = p.shifted();
    let f = Factors {
        phi: dense_spectrum(n, octaves, |w| scaling_ft(p, kind, w)),
        phi_b: dense_spectrum(n, octaves, |w| scaling_ft(q, kind, w)),
        psi: dense_spectrum(n, octaves, |w| wavelet_ft(p, kind, w)),
        psi_b: dense_spectrum(n, octaves, |w| wavelet_ft(q, kind, w)),
    };
    let at = |i: usize| Factors {
        phi: f.phi[i],
        phi_b: f.phi_b[i],
        psi: f.psi[i],
        psi_b: f.psi_b[i],
    };
    let mut re = CMatrix::zeros(n, n);
    let mut im = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (a, b) = combine_parts(k, &at(c), &at(r));
            re.set(r, c, a);
            im.set(r, c, b);
        }
    }
    Ok((re, im))
}

fn signum0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `max |FT(Im Ψ_k) + j sign(ωᵀu_θ) FT(Re Ψ_k)|` over the dense grid, using
/// an explicit direction `theta`. Bins on the line `ωᵀu_θ = 0` are skipped.
pub fn directional_ht_error(k: usize, p: SplineParams, theta: f64, res: Resolution) -> Result<f64> {
    let (re, im) = wavelet2d_spectra(k, p, WaveletKind::Primal, res)?;
    let (ux, uy) = (theta.cos(), theta.sin());
    let n = res.n;
    let mut worst = 0.0f64;
    for r in 0..n {
        let wy = render_frequency(r, n, res.octaves);
        for c in 0..n {
            let wx = render_frequency(c, n, res.octaves);
            let proj = wx * ux + wy * uy;
            // exact zero for axis-aligned and diagonal directions
            if proj.abs() <= 1e-9 * (wx.abs() + wy.abs()) {
                continue;
            }
            let s = signum0(proj);
            worst = worst.max((im.get(r, c) + Complex64::new(0.0, s) * re.get(r, c)).norm());
        }
    }
    Ok(worst)
}

/// Directional Hilbert relation `Im Ψ_k = H_{θ_k} Re Ψ_k`, checked on the
/// dense spectral grid. For `k = 5` the imaginary part is additionally
/// compared against `-j (sign ω_x + sign ω_y)/√2 ψ̂(ω_x) ψ̂(ω_y)`.
pub fn directional_ht_check(k: usize, p: SplineParams, res: Resolution) -> Result<f64> {
    check_orientation(k)?;
    let theta = DirectionTable::default().theta[k - 1];
    let mut err = directional_ht_error(k, p, theta, res)?;
    if k == 5 {
        let (_, im) = wavelet2d_spectra(5, p, WaveletKind::Primal, res)?;
        let n = res.n;
        let psi = dense_spectrum(n, res.octaves, |w| wavelet_ft(p, WaveletKind::Primal, w));
        for r in 0..n {
            let sy = signum0(render_frequency(r, n, res.octaves));
            for c in 0..n {
                let sx = signum0(render_frequency(c, n, res.octaves));
                let expect = Complex64::new(0.0, -(sx + sy) * FRAC_1_SQRT_2) * psi[c] * psi[r];
                err = err.max((im.get(r, c) - expect).norm());
            }
        }
    }
    Ok(err)
}

/// Whether `(ω_x, ω_y)` lies in the spectral support of `Ψ_k`.
pub fn in_support(k: usize, wx: f64, wy: f64) -> bool {
    match k {
        1 | 2 => wx > 0.0,
        3 | 4 => wy > 0.0,
        5 => wx > 0.0 && wy > 0.0,
        6 => wx < 0.0 && wy > 0.0,
        _ => false,
    }
}

/// Fraction of the spectral energy of `Ψ_k` outside its half-plane/quadrant.
pub fn out_of_support_fraction(k: usize, p: SplineParams, res: Resolution) -> Result<f64> {
    let (re, im) = wavelet2d_spectra(k, p, WaveletKind::Primal, res)?;
    let n = res.n;
    let (mut inside, mut outside) = (0.0, 0.0);
    for r in 0..n {
        let wy = render_frequency(r, n, res.octaves);
        for c in 0..n {
            let wx = render_frequency(c, n, res.octaves);
            let e = (re.get(r, c) + Complex64::i() * im.get(r, c)).norm_sqr();
            if in_support(k, wx, wy) {
                inside += e;
            } else {
                outside += e;
            }
        }
    }
    Ok(outside / (inside + outside))
}

/// 2D DFT of a complex matrix (unnormalized).
pub fn fft2(m: &CMatrix) -> CMatrix {
    let pass = |m: &CMatrix| -> CMatrix {
        let rows: Vec<Vec<Complex64>> = (0..m.rows)
            .into_par_iter()
            .map(|r| {
                let mut row = m.row(r).to_vec();
                fft::forward(&mut row);
                row
            })
            .collect();
        Matrix::from_rows(rows)
    };
    pass(&pass(m).transpose()).transpose()
}
