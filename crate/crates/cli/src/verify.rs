//! The `verify` harness: invariants of every module plus the acceptance
//! criteria, each reported with its measured value and tolerance.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use gaborlet::filters::{analytic_filter_level, ht_modulation_error, verify_pr};
use gaborlet::gabor::{convergence_report, convergence_report_2d, ReportResolution};
use gaborlet::spline::{autocorr_ft, AUTOCORR_TOL};
use gaborlet::transform1d::{dtcwt1d_forward, dtcwt1d_inverse, ht_pair_error, WaveletKind};
use gaborlet::transform2d::{
    build_channel_table, directional_ht_check, dtcwt2d_forward, dtcwt2d_inverse, out_of_support_fraction,
    MixingMatrices, Resolution,
};
use gaborlet::{DualTreeDesign, Matrix, Signal1D, SplineParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{decode_c64, decode_csv, decode_f64, encode_c64, encode_csv, encode_f64};
use crate::commands::Outcome;
use crate::config::RunConfig;
use crate::error::CliResult;

/// Comparison direction of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: Bound,
    pub limit: f64,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: Bound::AtMost,
            limit,
        }
    }

    fn at_least(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: Bound::AtLeast,
            limit,
        }
    }

    /// A yes/no property reported as 1 (holds) or 0.
    fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.limit,
            Bound::AtLeast => self.measured >= self.limit,
        }
    }

    pub fn line(&self) -> String {
        let op = if self.bound == Bound::AtMost { "<=" } else { ">=" };
        format!(
            "{} {}: {:.3e} ({op} {:.3e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.limit
        )
    }
}

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn spline_checks(p: SplineParams, out: &mut Vec<Check>) {
    // linear spline: A(ω) = 2/3 + cos(ω)/3
    let worst = (0..64)
        .map(|k| {
            let w = -PI + 2.0 * PI * k as f64 / 64.0;
            (autocorr_ft(1.0, w, AUTOCORR_TOL) - (2.0 + w.cos()) / 3.0).abs()
        })
        .fold(0.0, f64::max);
    out.push(Check::at_most("autocorrelation closed form (linear)", worst, 1e-12));
    let lo = (0..256)
        .map(|k| autocorr_ft(p.alpha(), -PI + 2.0 * PI * k as f64 / 256.0, AUTOCORR_TOL))
        .fold(f64::INFINITY, f64::min);
    out.push(Check::at_least("Riesz lower bound", lo, 1e-8));
}

fn filter_checks(cfg: &RunConfig, out: &mut Vec<Check>) -> CliResult<()> {
    let p = cfg.params;
    let d = DualTreeDesign::new(p, cfg.length, cfg.levels)?;
    out.push(Check::at_most(
        "PR identity, both channels",
        verify_pr(&d.channel_a).max(verify_pr(&d.channel_b)),
        1e-12,
    ));
    out.push(Check::at_most(
        "Hilbert-pair filter relations",
        ht_modulation_error(p, cfg.length, cfg.levels)?,
        1e-12,
    ));
    let n = d.signal_len;
    let mut neg = 0.0f64;
    for i in 0..cfg.levels {
        let pa = analytic_filter_level(&d, i);
        for k in n / 2 + 1..n {
            neg = neg.max(pa.at(k).norm());
        }
    }
    out.push(Check::at_most("analytic filter negative band", neg, 1e-10));
    let herm = [&d.channel_a, &d.channel_b]
        .iter()
        .flat_map(|c| c.levels.iter())
        .flat_map(|l| [&l.h_tilde, &l.g_tilde, &l.h, &l.g])
        .map(|r| r.hermitian_deviation())
        .fold(0.0, f64::max);
    out.push(Check::at_most("filter Hermitian symmetry", herm, 1e-14));
    Ok(())
}

fn transform_checks(cfg: &RunConfig, out: &mut Vec<Check>) -> CliResult<()> {
    let tol = cfg.tol.unwrap_or(1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let design = DualTreeDesign::cached(cfg.params, cfg.length, cfg.levels)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let f = Signal1D::new(random_vec(cfg.length, &mut rng))?;
        let back = dtcwt1d_inverse(&dtcwt1d_forward(&f, &design)?, &design)?;
        worst = worst.max(max_diff(f.samples(), back.samples()));
    }
    out.push(Check::at_most("1D perfect reconstruction", worst, tol));

    let mut worst = 0.0f64;
    for size in [64usize, 128] {
        let table = build_channel_table(cfg.params, size, size, 2)?;
        let img = Matrix::from_vec(size, size, random_vec(size * size, &mut rng)).expect("sized");
        let back = dtcwt2d_inverse(&dtcwt2d_forward(&img, &table)?, &table)?;
        worst = worst.max(max_diff(img.data(), back.data()));
    }
    out.push(Check::at_most("2D perfect reconstruction", worst, tol));
    out.push(Check::at_most(
        "mixing orthonormality",
        MixingMatrices::default().orthonormality_error(),
        1e-15,
    ));

    let img = Matrix::from_vec(512, 512, random_vec(512 * 512, &mut rng)).expect("sized");
    let start = Instant::now();
    let table = build_channel_table(cfg.params, 512, 512, 1)?;
    dtcwt2d_inverse(&dtcwt2d_forward(&img, &table)?, &table)?;
    out.push(Check::at_most(
        "512x512 one-level round trip [s]",
        start.elapsed().as_secs_f64(),
        5.0,
    ));
    Ok(())
}

fn wavelet_checks(cfg: &RunConfig, out: &mut Vec<Check>) -> CliResult<()> {
    let p = cfg.params;
    let dense =
        ht_pair_error(p, WaveletKind::Primal, 1 << 13, 5)?.max(ht_pair_error(p, WaveletKind::Dual, 1 << 13, 5)?);
    out.push(Check::at_most("Hilbert pair, dense spectrum", dense, 1e-10));
    let res = Resolution { n: 256, octaves: 3 };
    let mut ht = 0.0f64;
    let mut support = 0.0f64;
    for k in 1..=6 {
        ht = ht.max(directional_ht_check(k, p, res)?);
        support = support.max(out_of_support_fraction(k, p, res)?);
    }
    out.push(Check::at_most("directional Hilbert relation", ht, 1e-10));
    out.push(Check::at_most("out-of-support energy fraction", support, 1e-8));

    let n = 64;
    let table = build_channel_table(p, n, n, 1)?;
    let mut worst_share = f64::INFINITY;
    for (kx, ky, target) in [
        (26.0, 0.0, &[0usize, 1][..]),
        (26.0, 26.0, &[4]),
        (0.0, 26.0, &[2, 3]),
        (-26.0, 26.0, &[5]),
    ] {
        let img = Matrix::from_fn(n, n, |r, c| {
            (2.0 * PI * (kx * c as f64 + ky * r as f64) / n as f64).cos()
        });
        let pyr = dtcwt2d_forward(&img, &table)?;
        let e: Vec<f64> = pyr.w[0].iter().map(|m| m.energy()).collect();
        let total: f64 = e.iter().sum();
        worst_share = worst_share.min(target.iter().map(|&k| e[k]).sum::<f64>() / total);
    }
    out.push(Check::at_least("plane-wave orientation energy share", worst_share, 0.9));
    Ok(())
}

fn gabor_checks(cfg: &RunConfig, out: &mut Vec<Check>) -> CliResult<()> {
    let tau = cfg.params.tau();
    let rows = convergence_report(&[3.0, 6.0, 10.0], tau, ReportResolution::default())?;
    out.push(Check::at_most("uncertainty product, cubic", rows[0].uncertainty, 0.515));
    let u: Vec<f64> = rows.iter().map(|r| r.uncertainty).collect();
    out.push(Check::holds("uncertainty decreasing in degree", decreasing(&u)));
    out.push(Check::at_least(
        "Heisenberg bound",
        u.iter().cloned().fold(f64::INFINITY, f64::min),
        0.5 - 1e-6,
    ));

    let rows = convergence_report(&[4.0, 6.0, 10.0], tau, ReportResolution::default())?;
    let d: Vec<f64> = rows.iter().map(|r| r.sup_dev).collect();
    out.push(Check::holds("1D Gabor deviation decreasing", decreasing(&d)));
    out.push(Check::at_most("1D Gabor deviation, degree 6", d[1], 0.05));
    let rows2 = convergence_report_2d(&[4.0, 6.0, 10.0], tau, Resolution { n: 256, octaves: 3 })?;
    let ok = (0..6).all(|k| decreasing(&rows2.iter().map(|r| r.sup_dev[k]).collect::<Vec<_>>()));
    out.push(Check::holds("2D Gabor deviation decreasing", ok));
    Ok(())
}

fn codec_checks(cfg: &RunConfig, out: &mut Vec<Check>) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let v: Vec<f64> = (0..256)
        .map(|_| rng.gen::<f64>() * 10f64.powi(rng.gen_range(-300..300)))
        .collect();
    let bits = |x: &[f64]| x.iter().map(|f| f.to_bits()).collect::<Vec<_>>();
    let raw = bits(&decode_f64(&encode_f64(&v))?) == bits(&v);
    let csv = bits(&decode_csv(&encode_csv(&v))?) == bits(&v);
    let c: Vec<_> = v.chunks(2).map(|p| gaborlet::Complex64::new(p[0], p[1])).collect();
    let cx = decode_c64(&encode_c64(&c))? == c;
    out.push(Check::holds("codec bit-identical round trip", raw && csv && cx));
    Ok(())
}

/// Run every check; passes only when all do.
pub fn run_checks(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    spline_checks(cfg.params, &mut out);
    filter_checks(cfg, &mut out)?;
    transform_checks(cfg, &mut out)?;
    wavelet_checks(cfg, &mut out)?;
    gabor_checks(cfg, &mut out)?;
    codec_checks(cfg, &mut out)?;
    Ok(out)
}

pub fn cmd_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let checks = run_checks(cfg)?;
    let mut report = String::new();
    let _ = writeln!(
        report,
        "checks for alpha={} tau={} length={} levels={} seed={}",
        cfg.params.alpha(),
        cfg.params.tau(),
        cfg.length,
        cfg.levels,
        cfg.seed
    );
    for c in &checks {
        let _ = writeln!(report, "{}", c.line());
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(report, "{} of {} checks passed", checks.len() - failed, checks.len());
    Ok(Outcome {
        passed: failed == 0,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lines() {
        let c = Check::at_most("x", 1e-13, 1e-12);
        assert!(c.passed());
        assert!(c.line().starts_with("PASS x: "));
        let c = Check::at_least("y", 0.5, 0.9);
        assert!(!c.passed());
        assert!(c.line().starts_with("FAIL y: "));
        assert!(!Check::holds("z", false).passed());
    }
}
