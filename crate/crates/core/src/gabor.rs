//! Asymptotic Gabor forms of the complex spline wavelets and measures of how
//! closely rendered wavelets approach them.
//!
//! The rendered wavelets and the closed forms use opposite orientations along
//! each wavelet-carrying axis: `Ψ(x) ≈ gabor1d(-x)`. Comparisons apply that
//! reflection; scaling-function axes are compared as is.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::spline::SplineParams;
use crate::transform1d::{render_scaling, render_wavelet, sample_positions, WaveletKind};
use crate::transform2d::{render_wavelet2d, CMatrix, Resolution};

/// Asymptotic constants and the quantities derived from them for one degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaborConstants {
    pub alpha: f64,
    pub m0: f64,
    pub omega0: f64,
    pub delta_omega0: f64,
    /// 1D amplitude.
    pub m: f64,
    /// 1D envelope width.
    pub sigma: f64,
    /// Width of the limiting Gaussian of the B-spline.
    pub sigma_beta: f64,
    pub m1: f64,
    pub m2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl GaborConstants {
    pub const M0: f64 = 0.670;
    pub const OMEGA0: f64 = -5.142;
    pub const DELTA_OMEGA0: f64 = 2.670;

    pub fn new(alpha: f64) -> Self {
        let (m0, d) = (Self::M0, Self::DELTA_OMEGA0);
        let a1 = alpha + 1.0;
        Self {
            alpha,
            m0,
            omega0: Self::OMEGA0,
            delta_omega0: d,
            m: 2.0 * m0.powf(a1) * d / (2.0 * PI * a1).sqrt(),
            sigma: a1.sqrt() / d,
            sigma_beta: a1.sqrt() / (2.0 * 3f64.sqrt()),
            m1: 2.0 * 3f64.sqrt() * m0.powf(a1) * d / (PI * a1),
            m2: 2.0 * m0.powf(2.0 * a1) * d * d / (PI * a1),
            sigma1: a1.sqrt() / d,
            sigma2: (a1 / 6.0).sqrt(),
        }
    }
}

/// `M exp(-(x-½)²/2σ²) exp(j(ω₀x - ω₀/2 - πτ))`.
pub fn gabor1d(p: SplineParams, x: f64) -> Complex64 {
    let c = GaborConstants::new(p.alpha());
    let env = c.m * (-(x - 0.5).powi(2) / (2.0 * c.sigma * c.sigma)).exp();
    env * Complex64::from_polar(1.0, c.omega0 * x - c.omega0 / 2.0 - PI * p.tau())
}

/// Unit-mass Gaussian centered at `τ` with standard deviation `√(α+1)/2√3`.
pub fn gaussian_limit(p: SplineParams, x: f64) -> f64 {
    let s = GaborConstants::new(p.alpha()).sigma_beta;
    (-(x - p.tau()).powi(2) / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s)
}

/// The six 2D closed forms. The `x` envelope along a wavelet-carrying axis
/// uses `2σ₁²`, matching the 1D form.
pub fn gabor2d(k: usize, p: SplineParams, x: f64, y: f64) -> Result<Complex64> {
    let c = GaborConstants::new(p.alpha());
    let tau = p.tau();
    let (w0, s1, s2) = (c.omega0, c.sigma1, c.sigma2);
    let wave = |u: f64, u0: f64| (u - u0).powi(2) / (2.0 * s1 * s1);
    let lowp = |u: f64, u0: f64| (u - u0).powi(2) / (s2 * s2);
    let phase = |u: f64| w0 * u - w0 / 2.0 - PI * tau;
    let (amp, expo, arg) = match k {
        1 => (c.m1, wave(x, 0.5) + lowp(y, tau), phase(x)),
        2 => (c.m1, wave(x, 0.5) + lowp(y, tau + 0.5), phase(x)),
        3 => (c.m1, lowp(x, tau) + wave(y, 0.5), phase(y)),
        4 => (c.m1, lowp(x, tau + 0.5) + wave(y, 0.5), phase(y)),
        5 => (c.m2, wave(x, 0.5) + wave(y, 0.5), w0 * (x + y) - w0 - 2.0 * PI * tau),
        6 => (c.m2, wave(x, 0.5) + wave(y, 0.5), w0 * (y - x)),
        _ => return Err(Error::InvalidOrientation(k)),
    };
    Ok(amp * (-expo).exp() * Complex64::from_polar(1.0, arg))
}

/// Relative edge level tolerated by [`uncertainty_product`].
pub const EDGE_DECAY: f64 = 1e-6;

/// Oversampling of the frequency grid used for the spectral moments.
const SPECTRAL_OVERSAMPLING: usize = 8;

fn centered_spread(pos: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let mass: f64 = pos.clone().map(|(_, w)| w).sum();
    let mean = pos.clone().map(|(x, w)| x * w).sum::<f64>() / mass;
    (pos.map(|(x, w)| (x - mean).powi(2) * w).sum::<f64>() / mass).sqrt()
}

/// Heisenberg product `Δx Δω` of uniformly spaced samples with spacing `dx`,
/// from centroid-referenced second moments of `|f|²` and `|f̂|²`.
pub fn uncertainty_product(samples: &[Complex64], dx: f64) -> Result<f64> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::InvalidLength {
            len: n,
            reason: "need at least four samples",
        });
    }
    let peak = samples.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return Err(Error::InsufficientDecay(f64::NAN));
    }
    let edge = samples[0].norm().max(samples[n - 1].norm()) / peak;
    if edge > EDGE_DECAY {
        return Err(Error::InsufficientDecay(edge));
    }
    let dx_spread = centered_spread(samples.iter().enumerate().map(|(i, z)| (i as f64 * dx, z.norm_sqr())));

    let len = (SPECTRAL_OVERSAMPLING * n).next_power_of_two();
    let mut buf = samples.to_vec();
    buf.resize(len, Complex64::new(0.0, 0.0));
    fft::forward(&mut buf);
    let step = 2.0 * PI / (len as f64 * dx);
    // centre the frequency axis on the spectral peak so that wrapping does not
    // split the band
    let k_peak = (0..len)
        .max_by(|&a, &b| buf[a].norm_sqr().total_cmp(&buf[b].norm_sqr()))
        .unwrap_or(0);
    let freq = |k: usize| {
        let off = (k + len - k_peak + len / 2) % len;
        (off as f64 - (len / 2) as f64) * step
    };
    let dw_spread = centered_spread(buf.iter().enumerate().map(|(k, z)| (freq(k), z.norm_sqr())));
    Ok(dx_spread * dw_spread)
}

/// Least-squares real gain `c` minimizing `|f - c g|`, and the resulting
/// relative sup-norm deviation `max|f - c g| / max|f|`.
pub fn matched_deviation(f: &[Complex64], g: &[Complex64]) -> (f64, f64) {
    let num: f64 = f.iter().zip(g).map(|(a, b)| (a * b.conj()).re).sum();
    let den: f64 = g.iter().map(Complex64::norm_sqr).sum();
    let c = if den > 0.0 { num / den } else { 0.0 };
    let peak = f.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let worst = f.iter().zip(g).fold(0.0f64, |m, (a, b)| m.max((a - c * b).norm()));
    (c, worst / peak)
}

/// Render grid for the Gabor comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportResolution {
    /// 1D samples (power of two).
    pub n: usize,
    pub octaves: u32,
}

impl Default for ReportResolution {
    fn default() -> Self {
        Self { n: 1 << 13, octaves: 5 }
    }
}

/// One row of the 1D convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub alpha: f64,
    /// Amplitude-matched sup deviation from the Gabor form.
    pub sup_dev: f64,
    pub uncertainty: f64,
    /// Least-squares gain applied to the closed form.
    pub gain: f64,
}

/// Deviation of the rendered analytic wavelet from the 1D closed form.
pub fn gabor1d_deviation(p: SplineParams, n: usize, octaves: u32) -> Result<(f64, f64)> {
    let psi = render_wavelet(p, n, octaves)?;
    let g: Vec<Complex64> = sample_positions(n, octaves).iter().map(|&x| gabor1d(p, -x)).collect();
    Ok(matched_deviation(&psi, &g))
}

/// Sup deviation of the rendered B-spline from [`gaussian_limit`], relative
/// to the spline peak.
pub fn gaussian_deviation(p: SplineParams, n: usize, octaves: u32) -> Result<f64> {
    let phi = render_scaling(p, WaveletKind::Primal, n, octaves)?;
    let peak = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let worst = phi
        .iter()
        .zip(sample_positions(n, octaves))
        .fold(0.0f64, |m, (v, x)| m.max((v - gaussian_limit(p, x)).abs()));
    Ok(worst / peak)
}

/// Sup deviation, uncertainty product and gain for each degree.
pub fn convergence_report(alphas: &[f64], tau: f64, res: ReportResolution) -> Result<Vec<ConvergenceRow>> {
    check_increasing(alphas)?;
    alphas
        .iter()
        .map(|&alpha| {
            let p = SplineParams::new(alpha, tau)?;
            let psi = render_wavelet(p, res.n, res.octaves)?;
            let g: Vec<Complex64> = sample_positions(res.n, res.octaves)
                .iter()
                .map(|&x| gabor1d(p, -x))
                .collect();
            let (gain, sup_dev) = matched_deviation(&psi, &g);
            let dx = 1.0 / f64::from(1u32 << res.octaves);
            Ok(ConvergenceRow {
                alpha,
                sup_dev,
                uncertainty: uncertainty_product(&psi, dx)?,
                gain,
            })
        })
        .collect()
}

fn check_increasing(alphas: &[f64]) -> Result<()> {
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("degrees must be strictly increasing".into()));
    }
    Ok(())
}

/// Closed form `𝒢_k` on the render grid, reflected along the wavelet axes.
pub fn gabor2d_grid(k: usize, p: SplineParams, res: Resolution) -> Result<CMatrix> {
    let xs = sample_positions(res.n, res.octaves);
    let (fx, fy) = match k {
        1 | 2 => (-1.0, 1.0),
        3 | 4 => (1.0, -1.0),
        5 | 6 => (-1.0, -1.0),
        _ => return Err(Error::InvalidOrientation(k)),
    };
    let mut out = CMatrix::zeros(res.n, res.n);
    for (r, &y) in xs.iter().enumerate() {
        for (c, &x) in xs.iter().enumerate() {
            out.set(r, c, gabor2d(k, p, fx * x, fy * y)?);
        }
    }
    Ok(out)
}

/// Amplitude-matched deviation of the rendered `Ψ_k` from `𝒢_k`.
pub fn gabor2d_deviation(k: usize, p: SplineParams, res: Resolution) -> Result<(f64, f64)> {
    let psi = render_wavelet2d(k, p, res)?;
    let g = gabor2d_grid(k, p, res)?;
    Ok(matched_deviation(psi.data(), g.data()))
}

/// One row of the 2D convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence2DRow {
    pub alpha: f64,
    /// Deviation for each of the six orientations.
    pub sup_dev: [f64; 6],
}

pub fn convergence_report_2d(alphas: &[f64], tau: f64, res: Resolution) -> Result<Vec<Convergence2DRow>> {
    check_increasing(alphas)?;
    alphas
        .iter()
        .map(|&alpha| {
            let p = SplineParams::new(alpha, tau)?;
            let mut sup_dev = [0.0; 6];
            for (k, d) in sup_dev.iter_mut().enumerate() {
                *d = gabor2d_deviation(k + 1, p, res)?.1;
            }
            Ok(Convergence2DRow { alpha, sup_dev })
        })
        .collect()
}

/// CSV with header `alpha,sup_dev,uncertainty`.
pub fn report_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("alpha,sup_dev,uncertainty\n");
    for r in rows {
        s.push_str(&format!("{},{:.9e},{:.9e}\n", r.alpha, r.sup_dev, r.uncertainty));
    }
    s
}

/// CSV with header `alpha,k1,...,k6`.
pub fn report_2d_csv(rows: &[Convergence2DRow]) -> String {
    let mut s = String::from("alpha,k1,k2,k3,k4,k5,k6\n");
    for r in rows {
        s.push_str(&r.alpha.to_string());
        for d in &r.sup_dev {
            s.push_str(&format!(",{d:.9e}"));
        }
        s.push('\n');
    }
    s
}

/// Whitespace-separated `x re im abs` columns for plotting.
pub fn plot_data(xs: &[f64], values: &[Complex64]) -> String {
    xs.iter()
        .zip(values)
        .map(|(x, v)| format!("{x} {} {} {}\n", v.re, v.im, v.norm()))
        .collect()
}

/// Whether `|values|` rises to a single maximum and then falls, ignoring
/// samples below `floor` times the peak.
pub fn is_unimodal(values: &[Complex64], floor: f64) -> bool {
    let mags: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    let kept: Vec<f64> = mags.into_iter().filter(|&m| m > floor * peak).collect();
    let top = kept.iter().position(|&m| m == peak).unwrap_or(0);
    kept[..=top].windows(2).all(|w| w[1] >= w[0]) && kept[top..].windows(2).all(|w| w[1] <= w[0])
}
