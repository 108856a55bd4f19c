use std::path::PathBuf;

/// Everything that can go wrong in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {field}: {reason}")]
    Config { field: String, reason: String },

    #[error("focus singularity: width {width:e} m is below 1e-12 m")]
    FocusSingularity { width: f64 },

    #[error("degenerate overlap: |<phi|psi>| = {magnitude:e} is below 1e-12")]
    DegenerateOverlap { magnitude: f64 },

    #[error("quadrature truncated: integrand at range edge is {ratio:e} of its scale")]
    Truncation { ratio: f64 },

    #[error("angular coverage {span_deg:.3} deg after mirror completion, need at least {required_deg:.3} deg")]
    Coverage { span_deg: f64, required_deg: f64 },

    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
}

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::AxisMismatch(_) => 2,
            Error::FocusSingularity { .. }
            | Error::DegenerateOverlap { .. }
            | Error::Truncation { .. }
            | Error::Coverage { .. }
            | Error::Inconsistent(_) => 3,
            Error::Io { .. } | Error::Format { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
