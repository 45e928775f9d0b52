use thiserror::Error;

/// Errors raised by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func} did not converge after {iterations} iterations")]
    NoConvergence { func: &'static str, iterations: usize },

    #[error("pole of the gamma function at {0}")]
    GammaPole(f64),

    #[error("parameter outside the proven range of {bound}: {detail}")]
    OutOfProvenRange { bound: &'static str, detail: String },

    #[error("evaluation at distance {distance:.3e} from a singularity (minimum {min:.3e})")]
    NearSingularity { distance: f64, min: f64 },

    #[error("arg z = {theta:.6} lies outside the open right half-plane")]
    OutsideSector { theta: f64 },

    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("quadrature failed to reach tolerance: error estimate {estimate:.3e} after {intervals} intervals")]
    Quadrature { estimate: f64, intervals: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed record on line {line}: {detail}")]
    Format { line: u64, detail: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        detail: detail.into(),
    }
}

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
