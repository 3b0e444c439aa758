use thiserror::Error;

/// Errors shared by every crate of the lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical blowup at t = {t}: max |u| = {max_abs}")]
    NumericalBlowup { t: f64, max_abs: f64 },
    #[error("vacuum crossing: min |psi| = {min_abs} below {threshold}")]
    VacuumCrossing { min_abs: f64, threshold: f64 },
    #[error("field does not decay at the box edges (edge value {edge})")]
    NoDecay { edge: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("{0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
