use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("backend mismatch: cannot combine a {left} operator with a {right} operator")]
    BackendMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("operator is zero")]
    ZeroOperator,

    #[error("initial operator is not normalized: (O|O) = {0}")]
    NotNormalized(f64),

    #[error("operator is not Hermitian (anti-Hermitian part has norm {0:e})")]
    NotHermitian(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("not enough Lanczos coefficients: {0}")]
    InsufficientCoefficients(String),

    #[error("Krylov basis was not retained; rerun with keep_basis")]
    BasisNotRetained,

    #[error("AGP norm diverges: {0}")]
    Divergent(String),

    #[error("integral did not converge: partial value {value:e} with error estimate {error:e}")]
    NonConvergent { value: f64, error: f64 },

    #[error("family `{0}` has no closed form")]
    UnsupportedFamily(String),

    #[error("configuration error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: &str, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
