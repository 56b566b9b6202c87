use thiserror::Error;

/// Errors raised by the physics models and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wavelength {wavelength_nm} nm outside supported domain [{min_nm}, {max_nm}] nm")]
    WavelengthDomain {
        wavelength_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    #[error("unsupported exposure regime: {0}")]
    UnsupportedRegime(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("configuration error at line {line}, key `{key}`: {message}")]
    Config { key: String, line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the CLI: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidParameter { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
