use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spline parameters: {0}")]
    InvalidParams(String),

    #[error("fractional power of zero with non-positive exponent {0}")]
    ZeroPower(f64),

    #[error("invalid length {len}: {reason}")]
    InvalidLength { len: usize, reason: &'static str },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("Riesz bound violated: autocorrelation {value:e} at bin {bin} of a {n}-point grid")]
    RieszBound { bin: usize, n: usize, value: f64 },

    #[error("pre-filter vanishes at bin {0}")]
    SingularPrefilter(usize),

    #[error("imaginary residue {0:e} after inverse DFT exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("invalid orientation index {0} (expected 1..=6)")]
    InvalidOrientation(usize),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("samples do not decay at the window edges (edge/peak = {0:e})")]
    InsufficientDecay(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
