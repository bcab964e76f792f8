//! Implementation of each subcommand.

use std::fmt::Write as _;
use std::path::Path;

use gaborlet::filters::verify_pr;
use gaborlet::gabor::{
    convergence_report, convergence_report_2d, plot_data, report_2d_csv, report_csv, ReportResolution,
};
use gaborlet::transform1d::{
    dtcwt1d_forward, dtcwt1d_inverse, render_scaling, render_wavelet, sample_positions, WaveletKind,
};
use gaborlet::transform2d::{build_channel_table, dtcwt2d_forward, dtcwt2d_inverse, render_wavelet2d, Resolution};
use gaborlet::{ChannelFilters, Complex64, DualTreeDesign, Matrix, Pyramid1D, Pyramid2D, Signal1D, SplineParams};

use crate::codec::{
    read_complex, read_image, read_manifest, read_real, read_signal, write_bytes, write_image, write_manifest,
    write_signal, ArrayData, BundleWriter, Format, Manifest, FORMAT_VERSION,
};
use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::verify;

/// Result of a command: whether its checks passed and a report for stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub report: String,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Self { passed: true, report }
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    match cfg.command {
        Command::Design => cmd_design(cfg),
        Command::Xform1d => cmd_xform1d(cfg),
        Command::Ixform1d => cmd_ixform1d(cfg),
        Command::Xform2d => cmd_xform2d(cfg),
        Command::Ixform2d => cmd_ixform2d(cfg),
        Command::Render => cmd_render(cfg),
        Command::Verify => verify::cmd_verify(cfg),
        Command::GaborCompare => cmd_gabor_compare(cfg),
    }
}

fn encoding(cfg: &RunConfig) -> Format {
    cfg.format.unwrap_or(Format::Raw).array_encoding()
}

fn manifest(cfg: &RunConfig, kind: &str, dims: Vec<usize>, levels: usize, w: BundleWriter) -> Manifest {
    Manifest {
        format_version: FORMAT_VERSION,
        kind: kind.into(),
        alpha: cfg.params.alpha(),
        tau: cfg.params.tau(),
        dims,
        levels,
        encoding: w.encoding(),
        arrays: w.finish(),
        pr_deviation: None,
    }
}

fn add_channel(w: &mut BundleWriter, tag: &str, ch: &ChannelFilters) -> CliResult<()> {
    let v = |r: &gaborlet::ComplexResponse| ArrayData::Complex(r.values().to_vec());
    w.add(&format!("{tag}_prefilter"), vec![ch.len()], &v(&ch.prefilter))?;
    for (i, lv) in ch.levels.iter().enumerate() {
        let n = lv.h.len();
        for (name, r) in [
            ("h_tilde", &lv.h_tilde),
            ("g_tilde", &lv.g_tilde),
            ("h", &lv.h),
            ("g", &lv.g),
        ] {
            w.add(&format!("{tag}_level{}_{name}", i + 1), vec![n], &v(r))?;
        }
    }
    Ok(())
}

/// Writes `2 (4 J + 1)` frequency-response arrays plus a manifest.
pub fn cmd_design(cfg: &RunConfig) -> CliResult<Outcome> {
    let design = DualTreeDesign::new(cfg.params, cfg.length, cfg.levels)?;
    let out = cfg.output();
    let mut w = BundleWriter::new(out, encoding(cfg))?;
    add_channel(&mut w, "tau", &design.channel_a)?;
    add_channel(&mut w, "tau_half", &design.channel_b)?;
    let pr = verify_pr(&design.channel_a).max(verify_pr(&design.channel_b));
    let mut m = manifest(cfg, "design", vec![cfg.length], cfg.levels, w);
    m.pr_deviation = Some(pr);
    let count = m.arrays.len();
    write_manifest(out, &m)?;
    Ok(Outcome::ok(format!(
        "wrote {count} arrays to {} (PR deviation {pr:.3e})\n",
        out.display()
    )))
}

fn params_of(m: &Manifest, kind: &str) -> CliResult<SplineParams> {
    if m.kind != kind {
        return Err(CliError::Format(format!(
            "expected a {kind} bundle, found {:?}",
            m.kind
        )));
    }
    Ok(SplineParams::new(m.alpha, m.tau)?)
}

pub fn cmd_xform1d(cfg: &RunConfig) -> CliResult<Outcome> {
    let f = Signal1D::new(read_signal(cfg.input(), None)?)?;
    let n = f.len();
    let design = DualTreeDesign::cached(cfg.params, n, cfg.levels)?;
    let p = dtcwt1d_forward(&f, &design)?;
    let out = cfg.output();
    let mut w = BundleWriter::new(out, encoding(cfg))?;
    w.add(
        "lowpass_a",
        vec![p.lowpass_a.len()],
        &ArrayData::Real(p.lowpass_a.clone()),
    )?;
    w.add(
        "lowpass_b",
        vec![p.lowpass_b.len()],
        &ArrayData::Real(p.lowpass_b.clone()),
    )?;
    for (i, wi) in p.w.iter().enumerate() {
        w.add(&format!("w{}", i + 1), vec![wi.len()], &ArrayData::Complex(wi.clone()))?;
    }
    write_manifest(out, &manifest(cfg, "pyramid1d", vec![n], cfg.levels, w))?;
    Ok(Outcome::ok(format!(
        "{}-level pyramid of a {n}-sample signal written to {}\n",
        cfg.levels,
        out.display()
    )))
}

pub fn read_pyramid1d(dir: &Path) -> CliResult<(Manifest, Pyramid1D)> {
    let m = read_manifest(dir)?;
    params_of(&m, "pyramid1d")?;
    let p = Pyramid1D {
        levels: m.levels,
        lowpass_a: read_real(dir, &m, "lowpass_a")?,
        lowpass_b: read_real(dir, &m, "lowpass_b")?,
        w: (1..=m.levels)
            .map(|i| read_complex(dir, &m, &format!("w{i}")))
            .collect::<CliResult<_>>()?,
    };
    Ok((m, p))
}

pub fn cmd_ixform1d(cfg: &RunConfig) -> CliResult<Outcome> {
    let (m, p) = read_pyramid1d(cfg.input())?;
    let n = *m
        .dims
        .first()
        .ok_or_else(|| CliError::Format("manifest has no length".into()))?;
    let design = DualTreeDesign::cached(params_of(&m, "pyramid1d")?, n, m.levels)?;
    let f = dtcwt1d_inverse(&p, &design)?;
    write_signal(cfg.output(), f.samples(), cfg.format)?;
    Ok(Outcome::ok(format!(
        "{n}-sample signal written to {}\n",
        cfg.output().display()
    )))
}

pub fn cmd_xform2d(cfg: &RunConfig) -> CliResult<Outcome> {
    let img = read_image(cfg.input(), None)?;
    let (rows, cols) = img.dims();
    let table = build_channel_table(cfg.params, rows, cols, cfg.levels)?;
    let p = dtcwt2d_forward(&img, &table)?;
    let out = cfg.output();
    let mut w = BundleWriter::new(out, encoding(cfg))?;
    for (n, low) in p.lowpass.iter().enumerate() {
        w.add(
            &format!("lowpass{}", n + 1),
            vec![low.rows(), low.cols()],
            &ArrayData::Real(low.data().to_vec()),
        )?;
    }
    for (i, level) in p.w.iter().enumerate() {
        for (k, wk) in level.iter().enumerate() {
            w.add(
                &format!("w{}_{}", i + 1, k + 1),
                vec![wk.rows(), wk.cols()],
                &ArrayData::Complex(wk.data().to_vec()),
            )?;
        }
    }
    write_manifest(out, &manifest(cfg, "pyramid2d", vec![rows, cols], cfg.levels, w))?;
    Ok(Outcome::ok(format!(
        "{}-level pyramid of a {rows}x{cols} image written to {}\n",
        cfg.levels,
        out.display()
    )))
}

pub fn read_pyramid2d(dir: &Path) -> CliResult<(Manifest, Pyramid2D)> {
    let m = read_manifest(dir)?;
    params_of(&m, "pyramid2d")?;
    let (rows, cols) = match m.dims[..] {
        [r, c] => (r, c),
        _ => return Err(CliError::Format("2D manifest needs two dimensions".into())),
    };
    let j = m.levels;
    let lowpass = (1..=4)
        .map(|n| {
            Ok(Matrix::from_vec(
                rows >> j,
                cols >> j,
                read_real(dir, &m, &format!("lowpass{n}"))?,
            )?)
        })
        .collect::<CliResult<_>>()?;
    let w = (1..=j)
        .map(|i| {
            (1..=6)
                .map(|k| {
                    Ok(Matrix::from_vec(
                        rows >> i,
                        cols >> i,
                        read_complex(dir, &m, &format!("w{i}_{k}"))?,
                    )?)
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<_>>()?;
    Ok((m, Pyramid2D { levels: j, lowpass, w }))
}

pub fn cmd_ixform2d(cfg: &RunConfig) -> CliResult<Outcome> {
    let (m, p) = read_pyramid2d(cfg.input())?;
    let table = build_channel_table(params_of(&m, "pyramid2d")?, m.dims[0], m.dims[1], m.levels)?;
    let img = dtcwt2d_inverse(&p, &table)?;
    write_image(cfg.output(), &img, cfg.format)?;
    Ok(Outcome::ok(format!(
        "{}x{} image written to {}\n",
        img.rows(),
        img.cols(),
        cfg.output().display()
    )))
}

fn image_extension(f: Format) -> &'static str {
    match f {
        Format::Pgm => "pgm",
        Format::Pfm => "pfm",
        Format::Csv => "csv",
        Format::Raw => "f64",
    }
}

/// 1D data files (`x re im abs`) and the six 2D wavelets as images.
pub fn cmd_render(cfg: &RunConfig) -> CliResult<Outcome> {
    let (n, oct) = (cfg.length, cfg.octaves);
    let out = cfg.output();
    crate::codec::create_dir(out)?;
    let xs = sample_positions(n, oct);
    let psi = render_wavelet(cfg.params, n, oct)?;
    write_bytes(&out.join("wavelet1d.dat"), plot_data(&xs, &psi).as_bytes())?;
    let phi: Vec<Complex64> = render_scaling(cfg.params, WaveletKind::Primal, n, oct)?
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    write_bytes(&out.join("scaling1d.dat"), plot_data(&xs, &phi).as_bytes())?;

    let fmt = cfg.format.unwrap_or(Format::Pfm);
    let ext = image_extension(fmt);
    let res = Resolution { n, octaves: oct };
    for k in 1..=6 {
        let w = render_wavelet2d(k, cfg.params, res)?;
        for (part, img) in [("re", w.re()), ("im", w.im()), ("abs", w.map(|z| z.norm()))] {
            write_image(&out.join(format!("psi2d_k{k}_{part}.{ext}")), &img, Some(fmt))?;
        }
    }
    Ok(Outcome::ok(format!(
        "rendered 1D data files and 18 {ext} images ({n} samples, {} per unit) to {}\n",
        1u32 << oct,
        out.display()
    )))
}

/// Convergence tables; passes when the deviations decrease strictly with the
/// degree and every uncertainty product respects the Heisenberg bound.
pub fn cmd_gabor_compare(cfg: &RunConfig) -> CliResult<Outcome> {
    let tau = cfg.params.tau();
    let rows = convergence_report(&cfg.alphas, tau, ReportResolution::default())?;
    let rows2 = convergence_report_2d(&cfg.alphas, tau, Resolution { n: 256, octaves: 3 })?;
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let d1: Vec<f64> = rows.iter().map(|r| r.sup_dev).collect();
    let mut passed = decreasing(&d1) && rows.iter().all(|r| r.uncertainty >= 0.5 - 1e-6);
    for k in 0..6 {
        let d: Vec<f64> = rows2.iter().map(|r| r.sup_dev[k]).collect();
        passed &= decreasing(&d);
    }
    let csv = report_csv(&rows);
    let csv2 = report_2d_csv(&rows2);
    if let Some(out) = &cfg.output {
        crate::codec::create_dir(out)?;
        write_bytes(&out.join("convergence.csv"), csv.as_bytes())?;
        write_bytes(&out.join("convergence2d.csv"), csv2.as_bytes())?;
        let res = ReportResolution::default();
        let xs = sample_positions(res.n, res.octaves);
        for &alpha in &cfg.alphas {
            let psi = render_wavelet(SplineParams::new(alpha, tau)?, res.n, res.octaves)?;
            write_bytes(
                &out.join(format!("wavelet_alpha{alpha}.dat")),
                plot_data(&xs, &psi).as_bytes(),
            )?;
        }
    }
    let mut report = csv;
    report.push('\n');
    report.push_str(&csv2);
    let _ = writeln!(report, "{}", if passed { "monotone: yes" } else { "monotone: NO" });
    Ok(Outcome { passed, report })
}
