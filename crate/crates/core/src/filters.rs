//! Semi-orthogonal spline filter banks sampled on DFT grids.
//!
//! For a channel with parameters `(α, τ)` the four filters are
//!
//! ```text
//! H̃(ω) = H^α_τ(e^{jω})
//! G̃(ω) = e^{jω} A(ω+π) H̃(π-ω)
//! H(ω)  = H̃(ω) A(ω) / A(2ω)
//! G(ω)  = G̃(ω) / (A(2ω) A(ω+π))
//! ```
//!
//! and they satisfy `G(-ω)G̃(ω) + H(-ω)H̃(ω) = 1` and
//! `G(-ω)G̃(ω+π) + H(-ω)H̃(ω+π) = 0` exactly. The Hilbert-pair channel at
//! `τ + ½` is obtained by modulating these with the discrete Hilbert filter.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{bin_angle, cis, wrap_angle, ComplexResponse, FrequencyGrid};
use crate::spline::{autocorr_ft, bspline_ft, ht_response, refinement_ft, SplineParams, AUTOCORR_TOL};

/// Designs whose autocorrelation dips below this value are rejected.
pub const RIESZ_FLOOR: f64 = 1e-8;

/// Analysis and synthesis filters of one decomposition level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFilters {
    pub h_tilde: ComplexResponse,
    pub g_tilde: ComplexResponse,
    pub h: ComplexResponse,
    pub g: ComplexResponse,
}

impl LevelFilters {
    pub fn grid(&self) -> FrequencyGrid {
        self.h_tilde.grid()
    }
}

/// Filters of one dual-tree channel. Level `i` (0-based) lives on a grid of
/// length `n / 2^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFilters {
    pub params: SplineParams,
    pub levels: Vec<LevelFilters>,
    pub prefilter: ComplexResponse,
}

impl ChannelFilters {
    pub fn len(&self) -> usize {
        self.prefilter.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefilter.is_empty()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> &LevelFilters {
        &self.levels[i]
    }
}

fn check_sizes(n: usize, levels: usize) -> Result<FrequencyGrid> {
    let grid = FrequencyGrid::new(n)?;
    if levels == 0 {
        return Err(Error::InvalidLength {
            len: levels,
            reason: "at least one decomposition level is required",
        });
    }
    if levels >= usize::BITS as usize || n >> levels < 4 {
        return Err(Error::InvalidLength {
            len: n,
            reason: "length must be divisible by 2^J with at least 4 samples left at the coarsest level",
        });
    }
    Ok(grid)
}

/// Autocorrelation sampled on a grid, with the Riesz guard applied.
fn sampled_autocorr(alpha: f64, grid: FrequencyGrid) -> Result<Vec<f64>> {
    let n = grid.len();
    let a: Vec<f64> = grid.omegas().map(|w| autocorr_ft(alpha, w, AUTOCORR_TOL)).collect();
    let (bin, value) =
        a.iter().copied().enumerate().fold(
            (0, f64::INFINITY),
            |acc, x| if x.1 < acc.1 || x.1.is_nan() { x } else { acc },
        );
    if value.is_nan() || value < RIESZ_FLOOR {
        return Err(Error::RieszBound { bin, n, value });
    }
    Ok(a)
}

fn level_filters(p: SplineParams, grid: FrequencyGrid) -> Result<LevelFilters> {
    let m = grid.len();
    let a = sampled_autocorr(p.alpha(), grid)?;
    let ht: Vec<Complex64> = grid.omegas().map(|w| refinement_ft(p, w)).collect();
    let mut gt = Vec::with_capacity(m);
    let mut h = Vec::with_capacity(m);
    let mut g = Vec::with_capacity(m);
    for k in 0..m {
        let a_mod = a[grid.modulated(k)];
        let a_dbl = a[(2 * k) % m];
        let gtk = cis(grid.omega(k)) * a_mod * ht[grid.conjugate_mirror(k)];
        gt.push(gtk);
        h.push(ht[k] * (a[k] / a_dbl));
        g.push(gtk / (a_dbl * a_mod));
    }
    Ok(LevelFilters {
        h_tilde: ComplexResponse::new(grid, ht, true)?,
        g_tilde: ComplexResponse::new(grid, gt, true)?,
        h: ComplexResponse::new(grid, h, true)?,
        g: ComplexResponse::new(grid, g, true)?,
    })
}

/// Sample the four filters of one channel on the grids of lengths
/// `n, n/2, ..., n/2^{J-1}` together with the projection pre-filter.
pub fn design_channel(p: SplineParams, n: usize, levels: usize) -> Result<ChannelFilters> {
    let grid = check_sizes(n, levels)?;
    let mut out = Vec::with_capacity(levels);
    let mut g = grid;
    for i in 0..levels {
        out.push(level_filters(p, g)?);
        if i + 1 < levels {
            g = g.halved()?;
        }
    }
    Ok(ChannelFilters {
        params: p,
        levels: out,
        prefilter: prefilter_response(p, n)?,
    })
}

/// Discrete Hilbert filter `D(e^{jω})` sampled on a grid.
fn ht_samples(grid: FrequencyGrid) -> Vec<Complex64> {
    grid.omegas().map(ht_response).collect()
}

/// Its conjugate-mirrored version `D(-e^{-jω})`.
fn ht_mirror_samples(grid: FrequencyGrid) -> Vec<Complex64> {
    (0..grid.len())
        .map(|k| ht_response(grid.omega(grid.conjugate_mirror(k))))
        .collect()
}

fn modulate(r: &ComplexResponse, by: &[Complex64]) -> ComplexResponse {
    let values = r.values().iter().zip(by).map(|(a, b)| a * b).collect();
    ComplexResponse::new(r.grid(), values, true).expect("same grid")
}

/// Build the `τ + ½` channel from a `τ` channel:
/// `G̃' = D G̃`, `G' = D G`, `H̃' = D(-e^{-jω}) H̃`, `H' = D(-e^{-jω}) H`.
pub fn ht_pair_channel(ch: &ChannelFilters) -> Result<ChannelFilters> {
    let levels = ch
        .levels
        .iter()
        .map(|lv| {
            let grid = lv.grid();
            let d = ht_samples(grid);
            let dm = ht_mirror_samples(grid);
            LevelFilters {
                h_tilde: modulate(&lv.h_tilde, &dm),
                g_tilde: modulate(&lv.g_tilde, &d),
                h: modulate(&lv.h, &dm),
                g: modulate(&lv.g, &d),
            }
        })
        .collect();
    let shifted = ch.params.shifted();
    Ok(ChannelFilters {
        params: shifted,
        levels,
        prefilter: prefilter_response(shifted, ch.len())?,
    })
}

/// Bin-wise distance between a channel designed directly at `τ + ½` and the
/// modulated `τ` channel (`G̃' = D G̃`, `G' = D G`, and the mirrored relation
/// for the lowpass filters), over every level and the pre-filter.
pub fn ht_modulation_error(p: SplineParams, n: usize, levels: usize) -> Result<f64> {
    let base = design_channel(p, n, levels)?;
    let direct = design_channel(p.shifted(), n, levels)?;
    let modulated = ht_pair_channel(&base)?;
    let mut worst = direct.prefilter.max_distance(&modulated.prefilter);
    for (a, b) in direct.levels.iter().zip(&modulated.levels) {
        worst = worst
            .max(a.h_tilde.max_distance(&b.h_tilde))
            .max(a.g_tilde.max_distance(&b.g_tilde))
            .max(a.h.max_distance(&b.h))
            .max(a.g.max_distance(&b.g));
    }
    Ok(worst)
}

/// Largest deviation from the perfect-reconstruction identities over every
/// level and bin:
/// `|G(-ω)G̃(ω) + H(-ω)H̃(ω) - 1|` and `|G(-ω)G̃(ω+π) + H(-ω)H̃(ω+π)|`.
pub fn verify_pr(ch: &ChannelFilters) -> f64 {
    ch.levels.iter().map(verify_pr_level).fold(0.0, f64::max)
}

pub fn verify_pr_level(lv: &LevelFilters) -> f64 {
    let grid = lv.grid();
    let mut worst = 0.0f64;
    for k in 0..grid.len() {
        let r = grid.mirror(k);
        let q = grid.modulated(k);
        let g_rev = lv.g.at(r);
        let h_rev = lv.h.at(r);
        let direct = g_rev * lv.g_tilde.at(k) + h_rev * lv.h_tilde.at(k) - 1.0;
        let alias = g_rev * lv.g_tilde.at(q) + h_rev * lv.h_tilde.at(q);
        worst = worst.max(direct.norm()).max(alias.norm());
    }
    worst
}

/// Projection pre-filter `P(ω) = β̂^α_τ(ω) / A^α(ω)`.
///
/// At the Nyquist bin the value is replaced by the real number with the same
/// modulus and the sign of its real part (`+` when the real part vanishes),
/// so the time-domain filter stays real and invertible for every `τ`.
pub fn prefilter_response(p: SplineParams, n: usize) -> Result<ComplexResponse> {
    let grid = FrequencyGrid::new(n)?;
    let a = sampled_autocorr(p.alpha(), grid)?;
    let mut values: Vec<Complex64> = grid.omegas().zip(&a).map(|(w, &ak)| bspline_ft(p, w) / ak).collect();
    let ny = grid.nyquist();
    let v = values[ny];
    let sign = if v.re < 0.0 { -1.0 } else { 1.0 };
    values[ny] = Complex64::new(sign * v.norm(), 0.0);
    for (k, v) in values.iter().enumerate() {
        if v.norm() == 0.0 {
            return Err(Error::SingularPrefilter(k));
        }
    }
    ComplexResponse::new(grid, values, true)
}

/// The pair of channels of a 1D dual-tree transform.
#[derive(Debug, Clone, PartialEq)]
pub struct DualTreeDesign {
    pub channel_a: ChannelFilters,
    pub channel_b: ChannelFilters,
    pub levels: usize,
    pub signal_len: usize,
}

type CacheKey = (u64, u64, usize, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<DualTreeDesign>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<DualTreeDesign>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl DualTreeDesign {
    pub fn new(p: SplineParams, n: usize, levels: usize) -> Result<Self> {
        let channel_a = design_channel(p, n, levels)?;
        let channel_b = ht_pair_channel(&channel_a)?;
        Ok(Self {
            channel_a,
            channel_b,
            levels,
            signal_len: n,
        })
    }

    /// Shared design for `(α, τ, N, J)`, computed once per process.
    pub fn cached(p: SplineParams, n: usize, levels: usize) -> Result<Arc<Self>> {
        let key = (p.alpha().to_bits(), p.tau().to_bits(), n, levels);
        if let Some(d) = cache().lock().expect("design cache poisoned").get(&key) {
            return Ok(Arc::clone(d));
        }
        let design = Arc::new(Self::new(p, n, levels)?);
        let mut map = cache().lock().expect("design cache poisoned");
        Ok(Arc::clone(map.entry(key).or_insert(design)))
    }

    pub fn params(&self) -> SplineParams {
        self.channel_a.params
    }

    pub fn channel(&self, b: bool) -> &ChannelFilters {
        if b {
            &self.channel_b
        } else {
            &self.channel_a
        }
    }
}

/// Analytic wavelet filter `P_a = P G̃ + j P' G̃'` on the level-1 grid.
pub fn analytic_filter(design: &DualTreeDesign) -> ComplexResponse {
    analytic_filter_level(design, 0)
}

/// Equivalent filter producing the complex subband of level `i` (0-based)
/// from the input signal, on the level-1 grid:
/// `P(ω) Π_{l<i} H̃_l(2^l ω) G̃_i(2^i ω) + j (same for the second channel)`.
pub fn analytic_filter_level(design: &DualTreeDesign, i: usize) -> ComplexResponse {
    let n = design.signal_len;
    let grid = design.channel_a.prefilter.grid();
    let chain = |ch: &ChannelFilters, k: usize| -> Complex64 {
        let mut v = ch.prefilter.at(k);
        for l in 0..i {
            v *= ch.levels[l].h_tilde.at(k % (n >> l));
        }
        v * ch.levels[i].g_tilde.at(k % (n >> i))
    };
    let values = (0..n)
        .map(|k| chain(&design.channel_a, k) + Complex64::i() * chain(&design.channel_b, k))
        .collect();
    ComplexResponse::new(grid, values, false).expect("grid length")
}

// Continuous-frequency versions of the filters, used to render wavelets.

/// `G̃(e^{jω})` at an arbitrary frequency.
pub fn g_tilde_at(p: SplineParams, omega: f64) -> Complex64 {
    let w = wrap_angle(omega);
    cis(w) * autocorr_ft(p.alpha(), w + PI, AUTOCORR_TOL) * refinement_ft(p, PI - w)
}

/// `H(e^{jω})` at an arbitrary frequency.
pub fn h_at(p: SplineParams, omega: f64) -> Complex64 {
    let a = |w: f64| autocorr_ft(p.alpha(), w, AUTOCORR_TOL);
    refinement_ft(p, omega) * (a(omega) / a(2.0 * omega))
}

/// `G(e^{jω})` at an arbitrary frequency.
pub fn g_at(p: SplineParams, omega: f64) -> Complex64 {
    let a = |w: f64| autocorr_ft(p.alpha(), w, AUTOCORR_TOL);
    g_tilde_at(p, omega) / (a(2.0 * omega) * a(omega + PI))
}

/// Frequency bin angle re-exported for callers working with raw indices.
pub fn omega_of(k: usize, n: usize) -> f64 {
    bin_angle(k, n)
}
