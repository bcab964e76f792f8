//! Periodic FFT-based 1D dual-tree transform and wavelet rendering.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::filters::{g_at, g_tilde_at, ChannelFilters, DualTreeDesign};
use crate::grid::ComplexResponse;
use crate::spline::{autocorr_ft, bspline_ft, SplineParams, AUTOCORR_TOL};

/// Real samples of a finite signal, periodically extended.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    samples: Vec<f64>,
}

impl Signal1D {
    /// Length must be a power of two (at least 4) and all values finite.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidLength {
                len: n,
                reason: "signals need a power-of-two length of at least 4",
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("signal contains non-finite samples".into()));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Output of the 1D dual-tree transform.
///
/// `w[i]` holds the complex subband of level `i + 1` (length `N / 2^{i+1}`),
/// with the first channel in the real part and the second in the imaginary
/// part.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid1D {
    pub levels: usize,
    pub lowpass_a: Vec<f64>,
    pub lowpass_b: Vec<f64>,
    pub w: Vec<Vec<Complex64>>,
}

impl Pyramid1D {
    /// All-zero pyramid for a signal of length `n`.
    pub fn zeros(n: usize, levels: usize) -> Self {
        Self {
            levels,
            lowpass_a: vec![0.0; n >> levels],
            lowpass_b: vec![0.0; n >> levels],
            w: (1..=levels).map(|i| vec![Complex64::new(0.0, 0.0); n >> i]).collect(),
        }
    }

    /// Length of the signal this pyramid was computed from.
    pub fn signal_len(&self) -> usize {
        self.lowpass_a.len() << self.levels
    }

    /// Number of real coefficients (each complex value counts twice).
    pub fn coefficient_count(&self) -> usize {
        self.lowpass_a.len() + self.lowpass_b.len() + 2 * self.w.iter().map(Vec::len).sum::<usize>()
    }

    /// Sum of squared magnitudes over all subbands.
    pub fn energy(&self) -> f64 {
        let low: f64 = self.lowpass_a.iter().chain(&self.lowpass_b).map(|v| v * v).sum();
        low + self.w.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>()
    }

    fn check_shape(&self, n: usize, levels: usize) -> Result<()> {
        let ok = self.levels == levels
            && self.lowpass_a.len() == n >> levels
            && self.lowpass_b.len() == n >> levels
            && self.w.len() == levels
            && self.w.iter().enumerate().all(|(i, w)| w.len() == n >> (i + 1));
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "pyramid does not match a {levels}-level design for length {n}"
            )))
        }
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

/// Circular convolution with a filter given by its frequency samples.
pub fn project(f: &[f64], pre: &ComplexResponse) -> Result<Vec<f64>> {
    check_len(pre.len(), f.len())?;
    let mut x = fft::spectrum(f);
    for (v, p) in x.iter_mut().zip(pre.values()) {
        *v *= p;
    }
    fft::real_inverse(x)
}

/// Inverse of [`project`]: spectral division by the pre-filter.
pub fn unproject(c: &[f64], pre: &ComplexResponse) -> Result<Vec<f64>> {
    check_len(pre.len(), c.len())?;
    let mut x = fft::spectrum(c);
    for (k, (v, p)) in x.iter_mut().zip(pre.values()).enumerate() {
        if p.norm() == 0.0 {
            return Err(Error::SingularPrefilter(k));
        }
        *v /= p;
    }
    fft::real_inverse(x)
}

/// Filter by `filter` and keep every other sample:
/// `Y[k] = ½ (X[k]F[k] + X[k + m/2]F[k + m/2])`.
fn fold(x: &[Complex64], filter: &ComplexResponse) -> Vec<Complex64> {
    let m = x.len();
    let half = m / 2;
    (0..half)
        .map(|k| 0.5 * (x[k] * filter.at(k) + x[k + half] * filter.at(k + half)))
        .collect()
}

/// One analysis step, returning the lowpass and highpass halves.
pub fn analyze_level(c: &[f64], h_tilde: &ComplexResponse, g_tilde: &ComplexResponse) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len(h_tilde.len(), c.len())?;
    check_len(g_tilde.len(), c.len())?;
    let x = fft::spectrum(c);
    let low = fft::real_inverse(fold(&x, h_tilde))?;
    let high = fft::real_inverse(fold(&x, g_tilde))?;
    Ok((low, high))
}

/// One synthesis step: upsample both halves, filter with the time-reversed
/// synthesis filters `H(z⁻¹)`, `G(z⁻¹)` and add, with a gain of 2 that undoes
/// the ½ of the analysis fold.
pub fn synthesize_level(cl: &[f64], ch: &[f64], h: &ComplexResponse, g: &ComplexResponse) -> Result<Vec<f64>> {
    check_len(cl.len(), ch.len())?;
    let m = 2 * cl.len();
    check_len(h.len(), m)?;
    check_len(g.len(), m)?;
    let yl = fft::spectrum(cl);
    let yh = fft::spectrum(ch);
    let half = m / 2;
    let z: Vec<Complex64> = (0..m)
        .map(|k| {
            let r = (m - k) % m;
            2.0 * (yl[k % half] * h.at(r) + yh[k % half] * g.at(r))
        })
        .collect();
    fft::real_inverse(z)
}

/// Run one channel: projection followed by `J` analysis steps.
fn analyze_channel(f: &[f64], ch: &ChannelFilters) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut c = project(f, &ch.prefilter)?;
    let mut highs = Vec::with_capacity(ch.levels.len());
    for lv in &ch.levels {
        let (l, h) = analyze_level(&c, &lv.h_tilde, &lv.g_tilde)?;
        highs.push(h);
        c = l;
    }
    Ok((c, highs))
}

fn synthesize_channel(
    low: &[f64],
    highs: impl DoubleEndedIterator<Item = Vec<f64>>,
    ch: &ChannelFilters,
) -> Result<Vec<f64>> {
    let mut c = low.to_vec();
    for (lv, h) in ch.levels.iter().rev().zip(highs.rev()) {
        c = synthesize_level(&c, &h, &lv.h, &lv.g)?;
    }
    unproject(&c, &ch.prefilter)
}

/// Forward dual-tree transform.
pub fn dtcwt1d_forward(f: &Signal1D, design: &DualTreeDesign) -> Result<Pyramid1D> {
    check_len(design.signal_len, f.len())?;
    let (ra, rb) = rayon::join(
        || analyze_channel(f.samples(), &design.channel_a),
        || analyze_channel(f.samples(), &design.channel_b),
    );
    let (lowpass_a, ha) = ra?;
    let (lowpass_b, hb) = rb?;
    let w = ha
        .into_iter()
        .zip(hb)
        .map(|(a, b)| a.into_iter().zip(b).map(|(re, im)| Complex64::new(re, im)).collect())
        .collect();
    Ok(Pyramid1D {
        levels: design.levels,
        lowpass_a,
        lowpass_b,
        w,
    })
}

/// Left inverse: invert each channel, un-project and average.
pub fn dtcwt1d_inverse(p: &Pyramid1D, design: &DualTreeDesign) -> Result<Signal1D> {
    p.check_shape(design.signal_len, design.levels)?;
    let (ra, rb) = rayon::join(
        || {
            let highs = p.w.iter().map(|w| w.iter().map(|z| z.re).collect::<Vec<_>>());
            synthesize_channel(&p.lowpass_a, highs.collect::<Vec<_>>().into_iter(), &design.channel_a)
        },
        || {
            let highs = p.w.iter().map(|w| w.iter().map(|z| z.im).collect::<Vec<_>>());
            synthesize_channel(&p.lowpass_b, highs.collect::<Vec<_>>().into_iter(), &design.channel_b)
        },
    );
    let (a, b) = (ra?, rb?);
    Signal1D::new(a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect())
}

/// Which member of the biorthogonal pair to render.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveletKind {
    /// B-spline scaling function and wavelet (analysis side).
    Primal,
    /// Dual spline scaling function and wavelet (synthesis side).
    Dual,
}

/// Fourier transform of the scaling function.
pub fn scaling_ft(p: SplineParams, kind: WaveletKind, omega: f64) -> Complex64 {
    let b = bspline_ft(p, omega);
    match kind {
        WaveletKind::Primal => b,
        WaveletKind::Dual => b / autocorr_ft(p.alpha(), omega, AUTOCORR_TOL),
    }
}

/// Fourier transform of the wavelet, `ψ̂(ω) = Q(ω/2) φ̂(ω/2)` with
/// `Q = G̃` for the B-spline wavelet and `Q = G` for its dual.
pub fn wavelet_ft(p: SplineParams, kind: WaveletKind, omega: f64) -> Complex64 {
    let half = omega / 2.0;
    let q = match kind {
        WaveletKind::Primal => g_tilde_at(p, half),
        WaveletKind::Dual => g_at(p, half),
    };
    q * scaling_ft(p, kind, half)
}

/// Sampling density `2^octaves` per unit and window checks for the renderers.
fn check_resolution(n: usize, octaves: u32) -> Result<f64> {
    if !n.is_power_of_two() || !(2..=20).contains(&octaves) || n < (16usize << octaves) {
        return Err(Error::Resolution(format!(
            "need octaves in 2..=20 and a power-of-two n >= 16 * 2^octaves (got n={n}, octaves={octaves})"
        )));
    }
    Ok(f64::from(1u32 << octaves))
}

/// Positions `x_m = (m - n/2) / 2^octaves` of rendered samples.
pub fn sample_positions(n: usize, octaves: u32) -> Vec<f64> {
    let s = f64::from(1u32 << octaves);
    (0..n).map(|m| (m as f64 - (n / 2) as f64) / s).collect()
}

/// Angular frequency of bin `k` on the dense render grid.
pub fn render_frequency(k: usize, n: usize, octaves: u32) -> f64 {
    let s = f64::from(1u32 << octaves);
    let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
    2.0 * PI * signed * s / n as f64
}

/// Continuous spectrum sampled on the render grid (natural bin order).
pub fn dense_spectrum(n: usize, octaves: u32, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    (0..n).map(|k| f(render_frequency(k, n, octaves))).collect()
}

/// Samples of the function whose Fourier transform is `spec`, at
/// [`sample_positions`]. The Nyquist bin is dropped so that real functions
/// render to real samples.
fn render_from_spectrum(spec: &[Complex64], s: f64) -> Vec<Complex64> {
    let n = spec.len();
    let mut buf: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
        .collect();
    buf[n / 2] = Complex64::new(0.0, 0.0);
    fft::inverse(&mut buf);
    for v in buf.iter_mut() {
        *v *= s;
    }
    buf
}

fn render_real(n: usize, octaves: u32, f: impl Fn(f64) -> Complex64) -> Result<Vec<f64>> {
    let s = check_resolution(n, octaves)?;
    let spec = dense_spectrum(n, octaves, f);
    let out = render_from_spectrum(&spec, s);
    let peak = out.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let resid = out.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if resid > fft::IMAG_RESIDUE_TOL * peak.max(1.0) {
        return Err(Error::ImaginaryResidue(resid));
    }
    Ok(out.into_iter().map(|z| z.re).collect())
}

/// Dense samples of the scaling function `φ` (B-spline or dual spline).
pub fn render_scaling(p: SplineParams, kind: WaveletKind, n: usize, octaves: u32) -> Result<Vec<f64>> {
    render_real(n, octaves, |w| scaling_ft(p, kind, w))
}

/// Dense samples of the real wavelet `ψ^α_τ` (B-spline or dual).
pub fn render_real_wavelet(p: SplineParams, kind: WaveletKind, n: usize, octaves: u32) -> Result<Vec<f64>> {
    render_real(n, octaves, |w| wavelet_ft(p, kind, w))
}

/// Dense samples of `ψ_τ + j ψ_{τ+½}` for the requested kind.
pub fn render_analytic(p: SplineParams, kind: WaveletKind, n: usize, octaves: u32) -> Result<Vec<Complex64>> {
    let (re, im) = rayon::join(
        || render_real_wavelet(p, kind, n, octaves),
        || render_real_wavelet(p.shifted(), kind, n, octaves),
    );
    Ok(re?.into_iter().zip(im?).map(|(a, b)| Complex64::new(a, b)).collect())
}

/// Dense samples of the analytic B-spline wavelet `Ψ^α_τ = ψ^α_τ + j ψ^α_{τ+½}`
/// at [`sample_positions`].
pub fn render_wavelet(p: SplineParams, n: usize, octaves: u32) -> Result<Vec<Complex64>> {
    render_analytic(p, WaveletKind::Primal, n, octaves)
}

/// `max |ψ̂_{τ+½}(ω) + j sign(ω) ψ̂_τ(ω)|` over the dense render grid.
pub fn ht_pair_error(p: SplineParams, kind: WaveletKind, n: usize, octaves: u32) -> Result<f64> {
    check_resolution(n, octaves)?;
    let a = dense_spectrum(n, octaves, |w| wavelet_ft(p, kind, w));
    let b = dense_spectrum(n, octaves, |w| wavelet_ft(p.shifted(), kind, w));
    Ok((0..n)
        .map(|k| {
            let s = render_frequency(k, n, octaves).signum();
            let s = if render_frequency(k, n, octaves) == 0.0 { 0.0 } else { s };
            (b[k] + Complex64::new(0.0, s) * a[k]).norm()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(alpha: f64, tau: f64) -> SplineParams {
        SplineParams::new(alpha, tau).unwrap()
    }

    fn random_signal(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn signal_validation() {
        assert!(Signal1D::new(vec![0.0; 12]).is_err());
        assert!(Signal1D::new(vec![0.0, 1.0, f64::NAN, 0.0]).is_err());
        assert_eq!(Signal1D::new(vec![1.0; 8]).unwrap().len(), 8);
    }

    #[test]
    fn projection_examples() {
        let grid = FrequencyGrid::new(32).unwrap();
        let f = random_signal(32, 1);
        let ident = ComplexResponse::constant(grid, Complex64::new(1.0, 0.0));
        assert!(max_diff(&project(&f, &ident).unwrap(), &f) < 1e-15);

        let d = DualTreeDesign::new(params(3.0, 0.0), 32, 2).unwrap();
        let ones = vec![1.0; 32];
        let c = project(&ones, &d.channel_a.prefilter).unwrap();
        assert!(c.iter().all(|v| (v - 1.0).abs() < 1e-14));

        for ch in [&d.channel_a, &d.channel_b] {
            let c = project(&f, &ch.prefilter).unwrap();
            let back = unproject(&c, &ch.prefilter).unwrap();
            assert!(max_diff(&back, &f) < 1e-12);
        }
        assert!(matches!(project(&f[..16], &ident), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn single_level_round_trip_and_dc() {
        let d = DualTreeDesign::new(params(3.0, 0.25), 64, 1).unwrap();
        for ch in [&d.channel_a, &d.channel_b] {
            let lv = &ch.levels[0];
            let x = random_signal(64, 7);
            let (l, h) = analyze_level(&x, &lv.h_tilde, &lv.g_tilde).unwrap();
            let y = synthesize_level(&l, &h, &lv.h, &lv.g).unwrap();
            assert!(max_diff(&x, &y) < 1e-12);

            let (_, h) = analyze_level(&vec![3.0; 64], &lv.h_tilde, &lv.g_tilde).unwrap();
            assert!(h.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn analysis_is_linear() {
        let d = DualTreeDesign::new(params(2.0, 0.0), 32, 1).unwrap();
        let lv = &d.channel_a.levels[0];
        let x = random_signal(32, 2);
        let y = random_signal(32, 3);
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let (lx, hx) = analyze_level(&x, &lv.h_tilde, &lv.g_tilde).unwrap();
        let (ly, hy) = analyze_level(&y, &lv.h_tilde, &lv.g_tilde).unwrap();
        let (lz, hz) = analyze_level(&z, &lv.h_tilde, &lv.g_tilde).unwrap();
        for i in 0..16 {
            assert!((lz[i] - (2.0 * lx[i] - 0.5 * ly[i])).abs() < 1e-14);
            assert!((hz[i] - (2.0 * hx[i] - 0.5 * hy[i])).abs() < 1e-14);
        }
    }

    #[test]
    fn pyramid_shape_and_redundancy() {
        let d = DualTreeDesign::new(params(3.0, 0.0), 256, 3).unwrap();
        let f = Signal1D::new(random_signal(256, 4)).unwrap();
        let p = dtcwt1d_forward(&f, &d).unwrap();
        assert_eq!(p.coefficient_count(), 512);
        assert_eq!(p.w.iter().map(Vec::len).collect::<Vec<_>>(), vec![128, 64, 32]);
        assert_eq!(p.lowpass_a.len(), 32);
        assert_eq!(p.signal_len(), 256);
    }

    #[test]
    fn zero_in_zero_out() {
        let d = DualTreeDesign::new(params(3.0, 0.0), 64, 2).unwrap();
        let p = dtcwt1d_forward(&Signal1D::new(vec![0.0; 64]).unwrap(), &d).unwrap();
        assert_eq!(p, Pyramid1D::zeros(64, 2));
        let f = dtcwt1d_inverse(&Pyramid1D::zeros(64, 2), &d).unwrap();
        assert!(f.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn perfect_reconstruction_grid() {
        for &alpha in &[1.0, 2.0, 3.0, 6.0] {
            for &tau in &[0.0, 0.25] {
                for &n in &[128usize, 256] {
                    for j in 1..=3 {
                        let d = DualTreeDesign::new(params(alpha, tau), n, j).unwrap();
                        for seed in 0..10 {
                            let f = random_signal(n, seed);
                            let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                            let p = dtcwt1d_forward(&Signal1D::new(f.clone()).unwrap(), &d).unwrap();
                            let g = dtcwt1d_inverse(&p, &d).unwrap();
                            let err = max_diff(&f, g.samples());
                            assert!(err <= 1e-10 * scale, "alpha={alpha} tau={tau} n={n} J={j}: {err}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn forward_of_inverse_on_range() {
        let d = DualTreeDesign::new(params(3.0, 0.0), 128, 3).unwrap();
        let p = dtcwt1d_forward(&Signal1D::new(random_signal(128, 9)).unwrap(), &d).unwrap();
        let q = dtcwt1d_forward(&dtcwt1d_inverse(&p, &d).unwrap(), &d).unwrap();
        let mut worst = max_diff(&p.lowpass_a, &q.lowpass_a).max(max_diff(&p.lowpass_b, &q.lowpass_b));
        for (a, b) in p.w.iter().zip(&q.w) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).norm());
            }
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let d = DualTreeDesign::new(params(3.0, 0.0), 64, 2).unwrap();
        assert!(matches!(
            dtcwt1d_inverse(&Pyramid1D::zeros(64, 3), &d),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(dtcwt1d_forward(&Signal1D::new(vec![0.0; 32]).unwrap(), &d).is_err());
    }

    #[test]
    fn constant_signal_has_no_detail() {
        let d = DualTreeDesign::new(params(3.0, 0.0), 128, 3).unwrap();
        let p = dtcwt1d_forward(&Signal1D::new(vec![2.5; 128]).unwrap(), &d).unwrap();
        for w in &p.w {
            assert!(w.iter().all(|z| z.norm() <= 1e-12));
        }
    }

    #[test]
    fn magnitude_is_shift_invariant_for_sinusoids() {
        let n = 128;
        let d = DualTreeDesign::new(params(3.0, 0.0), n, 1).unwrap();
        let k0 = 45.0;
        let signal = |shift: usize| -> Vec<f64> {
            (0..n)
                .map(|i| (2.0 * PI * k0 * ((i + shift) % n) as f64 / n as f64 + 0.3).cos())
                .collect()
        };
        let base = dtcwt1d_forward(&Signal1D::new(signal(0)).unwrap(), &d).unwrap();
        let reference: Vec<f64> = base.w[0].iter().map(|z| z.norm()).collect();
        let peak = reference.iter().fold(0.0f64, |m, v| m.max(*v));
        let mut re_change = 0.0f64;
        for shift in 1..8 {
            let p = dtcwt1d_forward(&Signal1D::new(signal(shift)).unwrap(), &d).unwrap();
            for (i, z) in p.w[0].iter().enumerate() {
                assert!((z.norm() - reference[i]).abs() <= 0.01 * peak);
                re_change = re_change.max((z.re - base.w[0][i].re).abs());
            }
        }
        assert!(re_change > 0.1 * peak);
    }

    #[test]
    fn rendered_wavelets_form_ht_pairs() {
        for kind in [WaveletKind::Primal, WaveletKind::Dual] {
            for &(a, t) in &[(3.0, 0.0), (1.0, 0.25), (6.0, 0.0)] {
                let err = ht_pair_error(params(a, t), kind, 1 << 13, 5).unwrap();
                assert!(err <= 1e-10, "{kind:?} alpha={a}: {err}");
            }
        }
    }

    #[test]
    fn rendered_wavelet_moments() {
        let p = params(3.0, 0.0);
        let psi = render_wavelet(p, 1 << 13, 5).unwrap();
        let peak = psi.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let sum_re: f64 = psi.iter().map(|z| z.re).sum();
        let sum_im: f64 = psi.iter().map(|z| z.im).sum();
        assert!(sum_re.abs() <= 1e-8 * peak && sum_im.abs() <= 1e-8 * peak);
        let e_re: f64 = psi.iter().map(|z| z.re * z.re).sum();
        let e_im: f64 = psi.iter().map(|z| z.im * z.im).sum();
        assert!(((e_re - e_im) / e_re).abs() <= 1e-10, "{e_re} {e_im}");
    }

    #[test]
    fn rendered_scaling_function_matches_linear_bspline() {
        // causal linear B-spline: hat on [0, 2]
        let (n, oct) = (1 << 13, 6);
        let phi = render_scaling(params(1.0, 1.0), WaveletKind::Primal, n, oct).unwrap();
        let xs = sample_positions(n, oct);
        let err = phi
            .iter()
            .zip(&xs)
            .map(|(v, &x)| (v - (1.0 - (x - 1.0).abs()).max(0.0)).abs())
            .fold(0.0, f64::max);
        assert!(err < 5e-3, "{err}");
    }

    #[test]
    fn render_rejects_coarse_grids() {
        assert!(matches!(
            render_wavelet(params(3.0, 0.0), 64, 3),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            render_wavelet(params(3.0, 0.0), 1000, 2),
            Err(Error::Resolution(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn round_trip_random_parameters(alpha in 0.5f64..7.0, tau in -0.5f64..0.5, seed in 0u64..1000, j in 1usize..4) {
            let d = DualTreeDesign::new(params(alpha, tau), 64, j).unwrap();
            let f = random_signal(64, seed);
            let p = dtcwt1d_forward(&Signal1D::new(f.clone()).unwrap(), &d).unwrap();
            let g = dtcwt1d_inverse(&p, &d).unwrap();
            prop_assert!(max_diff(&f, g.samples()) <= 1e-10);
        }
    }
}
