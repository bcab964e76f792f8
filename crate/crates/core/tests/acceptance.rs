//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use gaborlet::filters::{analytic_filter_level, ht_modulation_error, verify_pr};
use gaborlet::gabor::{convergence_report, convergence_report_2d, ReportResolution};
use gaborlet::transform1d::{dtcwt1d_forward, dtcwt1d_inverse, ht_pair_error, WaveletKind};
use gaborlet::transform2d::{
    build_channel_table, directional_ht_check, dtcwt2d_forward, dtcwt2d_inverse, out_of_support_fraction, CMatrix,
    Resolution,
};
use gaborlet::{DualTreeDesign, Matrix, Signal1D, SplineParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), gaborlet::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(alpha: f64, tau: f64) -> SplineParams {
    SplineParams::new(alpha, tau).expect("valid parameters")
}

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn random_image(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_vec(rows, cols, random_vec(rows * cols, rng)).expect("sized")
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn reconstruction_1d() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for &alpha in &[1.0, 3.0, 6.0] {
        for &tau in &[0.0, 0.25] {
            let design = DualTreeDesign::new(params(alpha, tau), 256, 3)?;
            for _ in 0..10 {
                let f = Signal1D::new(random_vec(256, &mut rng))?;
                let back = dtcwt1d_inverse(&dtcwt1d_forward(&f, &design)?, &design)?;
                worst = worst.max(max_diff(f.samples(), back.samples()));
            }
        }
    }
    let t = start.elapsed();
    Ok((
        worst <= 1e-10 && t < Duration::from_secs(1),
        format!(
            "max error {worst:.2e} (tol 1e-10), {:.3} s (limit 1 s)",
            t.as_secs_f64()
        ),
    ))
}

fn reconstruction_2d() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for &size in &[64usize, 128] {
        let table = build_channel_table(params(3.0, 0.0), size, size, 2)?;
        let img = random_image(size, size, &mut rng);
        let back = dtcwt2d_inverse(&dtcwt2d_forward(&img, &table)?, &table)?;
        worst = worst.max(max_diff(img.data(), back.data()));
    }
    let t = start.elapsed();
    Ok((
        worst <= 1e-10 && t < Duration::from_secs(5),
        format!(
            "max error {worst:.2e} (tol 1e-10), {:.3} s (limit 5 s)",
            t.as_secs_f64()
        ),
    ))
}

fn pr_identity() -> Outcome {
    let mut worst = 0.0f64;
    for &alpha in &[1.0, 3.0, 6.0] {
        for &tau in &[0.0, 0.25] {
            let d = DualTreeDesign::new(params(alpha, tau), 256, 3)?;
            worst = worst.max(verify_pr(&d.channel_a)).max(verify_pr(&d.channel_b));
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max deviation {worst:.2e} over both channels (tol 1e-12)"),
    ))
}

fn ht_exactness() -> Outcome {
    let mut dense = 0.0f64;
    let mut filt = 0.0f64;
    for &alpha in &[1.0, 3.0, 6.0] {
        for &tau in &[0.0, 0.25] {
            let p = params(alpha, tau);
            dense = dense.max(ht_pair_error(p, WaveletKind::Primal, 1 << 13, 5)?);
            dense = dense.max(ht_pair_error(p, WaveletKind::Dual, 1 << 13, 5)?);
            filt = filt.max(ht_modulation_error(p, 256, 3)?);
        }
    }
    Ok((
        dense <= 1e-10 && filt <= 1e-12,
        format!("dense grid {dense:.2e} (tol 1e-10), filter relations {filt:.2e} (tol 1e-12)"),
    ))
}

fn one_sidedness() -> Outcome {
    let d = DualTreeDesign::new(params(3.0, 0.0), 256, 3)?;
    let mut worst = 0.0f64;
    let mut data = String::from("# omega |P_a| per level\n");
    let levels: Vec<_> = (0..3).map(|i| analytic_filter_level(&d, i)).collect();
    let n = d.signal_len;
    for k in 0..n {
        let w = 2.0 * PI * (k as f64 - (n / 2) as f64) / n as f64;
        let bin = (k + n / 2) % n;
        let _ = write!(data, "{w:.6}");
        for pa in &levels {
            let _ = write!(data, " {:.9e}", pa.at(bin).norm());
        }
        data.push('\n');
        if w < 0.0 && w > -PI {
            for pa in &levels {
                worst = worst.max(pa.at(bin).norm());
            }
        }
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("analytic_filter.dat");
    let note = match std::fs::write(&path, data) {
        Ok(()) => format!("data in {}", path.display()),
        Err(e) => format!("data file not written: {e}"),
    };
    Ok((
        worst <= 1e-10,
        format!("max negative-frequency |P_a| {worst:.2e} (tol 1e-10); {note}"),
    ))
}

fn uncertainty() -> Outcome {
    let rows = convergence_report(&[3.0, 6.0, 10.0], 0.0, ReportResolution::default())?;
    let u: Vec<f64> = rows.iter().map(|r| r.uncertainty).collect();
    let ok = u[0] <= 1.03 * 0.5 && strictly_decreasing(&u) && u.iter().all(|&v| v >= 0.5 - 1e-6);
    Ok((
        ok,
        format!(
            "alpha 3/6/10 -> {:.5} / {:.5} / {:.5} (limit 0.515 at alpha 3)",
            u[0], u[1], u[2]
        ),
    ))
}

fn gabor_convergence() -> Outcome {
    let alphas = [4.0, 6.0, 10.0];
    let rows = convergence_report(&alphas, 0.0, ReportResolution::default())?;
    let d1: Vec<f64> = rows.iter().map(|r| r.sup_dev).collect();
    let rows2 = convergence_report_2d(&alphas, 0.0, Resolution { n: 256, octaves: 3 })?;
    let mut ok = strictly_decreasing(&d1);
    let mut msg = format!("1D {:.4}/{:.4}/{:.4}", d1[0], d1[1], d1[2]);
    for k in 0..6 {
        let d: Vec<f64> = rows2.iter().map(|r| r.sup_dev[k]).collect();
        ok &= strictly_decreasing(&d);
        let _ = write!(msg, "; k{} {:.4}/{:.4}/{:.4}", k + 1, d[0], d[1], d[2]);
    }
    Ok((ok, msg))
}

fn level1_shares(kx: f64, ky: f64) -> Result<Vec<f64>, gaborlet::Error> {
    let n = 64;
    let table = build_channel_table(params(3.0, 0.0), n, n, 1)?;
    let img = Matrix::from_fn(n, n, |r, c| {
        (2.0 * PI * (kx * c as f64 + ky * r as f64) / n as f64).cos()
    });
    let p = dtcwt2d_forward(&img, &table)?;
    let e: Vec<f64> = p.w[0].iter().map(CMatrix::energy).collect();
    let total: f64 = e.iter().sum();
    Ok(e.iter().map(|v| v / total).collect())
}

fn directional() -> Outcome {
    // orientation classes: 0° -> {1, 2}, 90° -> {3, 4}, 45° -> {5}, 135° -> {6}
    let cases: [(&str, f64, f64, &[usize]); 4] = [
        ("0", 26.0, 0.0, &[0, 1]),
        ("45", 26.0, 26.0, &[4]),
        ("90", 0.0, 26.0, &[2, 3]),
        ("135", -26.0, 26.0, &[5]),
    ];
    let mut ok = true;
    let mut msg = String::new();
    for (name, kx, ky, target) in cases {
        let s = level1_shares(kx, ky)?;
        let share: f64 = target.iter().map(|&k| s[k]).sum();
        ok &= share > 0.9;
        let _ = write!(msg, "{name}deg {:.2}% ", 100.0 * share);
    }
    let mut ht = 0.0f64;
    for k in 1..=6 {
        ht = ht.max(directional_ht_check(
            k,
            params(3.0, 0.0),
            Resolution { n: 256, octaves: 3 },
        )?);
    }
    ok &= ht <= 1e-10;
    let _ = write!(msg, "(need > 90%); directional HT {ht:.2e} (tol 1e-10)");
    Ok((ok, msg))
}

fn spectral_support() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=6 {
        worst = worst.max(out_of_support_fraction(
            k,
            params(3.0, 0.0),
            Resolution { n: 256, octaves: 3 },
        )?);
    }
    Ok((
        worst <= 1e-8,
        format!("max out-of-support energy fraction {worst:.2e} (tol 1e-8)"),
    ))
}

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let img = random_image(512, 512, &mut rng);
    let start = Instant::now();
    let table = build_channel_table(params(3.0, 0.0), 512, 512, 1)?;
    let back = dtcwt2d_inverse(&dtcwt2d_forward(&img, &table)?, &table)?;
    let t = start.elapsed();
    let err = max_diff(img.data(), back.data());
    Ok((
        t <= Duration::from_secs(5) && err <= 1e-10,
        format!(
            "512x512 one level analysis + synthesis {:.3} s (limit 5 s), error {err:.2e}",
            t.as_secs_f64()
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("perfect reconstruction 1D", reconstruction_1d),
        ("perfect reconstruction 2D", reconstruction_2d),
        ("PR filter identity", pr_identity),
        ("Hilbert pair exactness", ht_exactness),
        ("analytic filter one-sided", one_sidedness),
        ("uncertainty product", uncertainty),
        ("Gabor convergence", gabor_convergence),
        ("directional selectivity", directional),
        ("spectral support", spectral_support),
        ("performance", performance),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {} ({name}): {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
