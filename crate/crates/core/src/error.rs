use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the simulator.
///
/// Variants are grouped by [`ErrorKind`] so front ends can map them onto
/// exit statuses without matching every case.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    #[error(
        "not an imaging configuration: residual {residual:e} mm^-1 exceeds tolerance {tolerance:e}"
    )]
    NotImaging { residual: f64, tolerance: f64 },

    #[error("invalid aperture: {0}")]
    InvalidAperture(String),

    #[error("invalid source: {0}")]
    InvalidSource(String),

    #[error("quadratic form outside the convergent domain: {0}")]
    Domain(String),

    #[error("square-root branch failure: {0}")]
    Branch(String),

    #[error("degenerate Collins kernel (b = 0): {0}")]
    DegenerateKernel(String),

    #[error("quadrature accuracy: {0}")]
    Accuracy(String),

    #[error("coherence-width fit failed: {0}")]
    FitFailed(String),

    #[error("visibility undefined: {0}")]
    UndefinedVisibility(String),

    #[error("quality factor undefined: {0}")]
    UndefinedQuality(String),

    #[error("insufficient fringes: found {found} peaks, need at least {required}")]
    InsufficientFringes { found: usize, required: usize },

    #[error("brute-force engine cannot resolve this scenario: {0}")]
    BruteDomain(String),

    #[error("invalid engine configuration: {0}")]
    EngineConfig(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification of [`Error`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numerical,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config { .. } | Error::EngineConfig(_) => ErrorKind::Config,
            Error::Io { .. } => ErrorKind::Io,
            Error::Context { source, .. } => source.kind(),
            _ => ErrorKind::Numerical,
        }
    }

    /// Wraps the error with the config path (or other location) that caused it.
    pub fn context(self, context: impl Into<String>) -> Error {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping any [`Error::Context`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            e => e,
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Error {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
