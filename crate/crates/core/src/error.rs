use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension {dim} too large for {path} path (cap {cap})")]
    DimensionTooLarge { dim: usize, cap: usize, path: &'static str },

    #[error("Lanczos did not converge after {iterations} iterations (best residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("truncated spectrum: Boltzmann weight bound {bound:.3e} exceeds tolerance {tolerance:.1e} at beta={beta}")]
    TruncationTooLarge { bound: f64, tolerance: f64, beta: f64 },

    #[error("beta_probe={beta} too small: higher-level contamination {contamination:.3e} exceeds {tolerance:.1e}")]
    BetaProbeTooSmall { beta: f64, contamination: f64, tolerance: f64 },

    #[error("first excited multiplet weight {weight:.3e} below 1e-12 (beta_probe too large)")]
    NumericallyDegenerate { weight: f64 },

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("matrix not Hermitian: max asymmetry {0:.3e}")]
    NotHermitian(f64),

    #[error("negative SSE vertex weight {weight:.3e} on bond {bond} (sign problem)")]
    SignViolation { bond: usize, weight: f64 },

    #[error("{bins} bins is too few to report a standard error (need at least 8)")]
    TooFewBins { bins: usize },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 for validation errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_)
            | Error::InvalidArgument(_)
            | Error::DimensionTooLarge { .. }
            | Error::BetaProbeTooSmall { .. }
            | Error::TooFewBins { .. }
            | Error::VerificationFailed(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::Csv(_) => 2,
            Error::NoConvergence { .. }
            | Error::TruncationTooLarge { .. }
            | Error::NumericallyDegenerate { .. }
            | Error::Inconsistent(_)
            | Error::NotHermitian(_)
            | Error::SignViolation { .. } => 3,
        }
    }
}
