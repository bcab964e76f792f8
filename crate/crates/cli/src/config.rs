//! Command-line parsing and validation.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gaborlet::SplineParams;

use crate::codec::Format;
use crate::error::{CliError, CliResult};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "GABORLET_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gaborlet", version, about = "Dual-tree complex spline wavelet transforms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Write the sampled filter bank of both channels to a directory.
    Design,
    /// Forward 1D transform of a signal file into a pyramid directory.
    Xform1d,
    /// Inverse 1D transform of a pyramid directory.
    Ixform1d,
    /// Forward 2D transform of an image into a pyramid directory.
    Xform2d,
    /// Inverse 2D transform of a pyramid directory.
    Ixform2d,
    /// Render scaling functions and wavelets (1D data files, 2D images).
    Render,
    /// Run the invariant and acceptance checks.
    Verify,
    /// Compare rendered wavelets with their Gabor approximations.
    GaborCompare,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Spline degree (>= 0).
    #[arg(long, global = true, default_value_t = 3.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Spline shift.
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau: f64,
    /// Number of decomposition levels.
    #[arg(long, global = true, default_value_t = 3)]
    pub levels: usize,
    /// Grid length (filters) or render size.
    #[arg(long, global = true, default_value_t = 256)]
    pub length: usize,
    /// Render oversampling: 2^octaves samples per unit.
    #[arg(long, global = true, default_value_t = 3)]
    pub octaves: u32,
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override the reconstruction tolerance used by checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for random test signals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Degrees compared by gabor-compare.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "4,6,10",
        allow_hyphen_values = true
    )]
    pub alphas: Vec<f64>,
}

/// Validated configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: SplineParams,
    pub levels: usize,
    pub length: usize,
    pub octaves: u32,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub format: Option<Format>,
    pub alphas: Vec<f64>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let o = cli.options;
        let params = SplineParams::new(o.alpha, o.tau).map_err(|e| CliError::Usage(e.to_string()))?;
        if o.levels == 0 {
            return Err(CliError::Usage("--levels must be at least 1".into()));
        }
        if o.length < 4 || !o.length.is_power_of_two() {
            return Err(CliError::Usage(format!(
                "--length {} must be a power of two >= 4",
                o.length
            )));
        }
        if !(2..=20).contains(&o.octaves) {
            return Err(CliError::Usage(format!("--octaves {} must lie in 2..=20", o.octaves)));
        }
        if let Some(t) = o.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("--tol {t} must be positive")));
            }
        }
        if o.alphas.is_empty() || o.alphas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage("--alphas must be strictly increasing".into()));
        }
        for &a in &o.alphas {
            SplineParams::new(a, o.tau).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        let cfg = Self {
            command: cli.command,
            params,
            levels: o.levels,
            length: o.length,
            octaves: o.octaves,
            input: o.input,
            output: o.out,
            tol: o.tol,
            seed: o.seed,
            format: o.format,
            alphas: o.alphas,
        };
        cfg.check_paths()?;
        Ok(cfg)
    }

    fn check_paths(&self) -> CliResult<()> {
        use Command::*;
        let (needs_in, needs_out) = match self.command {
            Design | Render => (false, true),
            Xform1d | Ixform1d | Xform2d | Ixform2d => (true, true),
            Verify | GaborCompare => (false, false),
        };
        if needs_in && self.input.is_none() {
            return Err(CliError::Usage("--in is required".into()));
        }
        if needs_out && self.output.is_none() {
            return Err(CliError::Usage("--out is required".into()));
        }
        Ok(())
    }

    pub fn input(&self) -> &Path {
        self.input.as_deref().expect("checked in from_cli")
    }

    pub fn output(&self) -> &Path {
        self.output.as_deref().expect("checked in from_cli")
    }
}

/// Thread count from the environment, if set.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV}={s:?} is not a positive integer"
            ))),
        },
    }
}
