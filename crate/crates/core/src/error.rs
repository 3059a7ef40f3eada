use thiserror::Error;

/// Errors raised by statistics, inference, simulation and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("zero variance: {0}")]
    ZeroVariance(String),

    #[error("degenerate bandwidth: all pairwise distances are zero")]
    DegenerateBandwidth,

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("simulation spec error: {0}")]
    Spec(String),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than by the computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidData(_)
                | Error::Size(_)
                | Error::Dimension(_)
                | Error::Spec(_)
                | Error::Parse { .. }
                | Error::Config(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
