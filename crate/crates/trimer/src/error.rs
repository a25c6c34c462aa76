use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("subsystem {0} is not part of this density matrix")]
    MissingSubsystem(&'static str),
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("observables are not physical (min eigenvalue {min_eigenvalue:e}, residual {residual:e})")]
    NonPhysical { min_eigenvalue: f64, residual: f64 },
    #[error("no bracket found: {0}")]
    NoBracket(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {x}")))
    }
}
