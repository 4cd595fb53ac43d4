use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("basis depth exceeded: index {needed} requested, basis built to {built}")]
    BasisDepthExceeded { needed: usize, built: usize },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("inadmissible domain: {0}")]
    InadmissibleDomain(String),
    #[error("kappa = -1/2 is excluded for the length-two complex")]
    KappaMinusHalf,
    #[error("degree {r} out of range for cone dimension {n}")]
    DegreeOutOfRange { r: i64, n: i64 },
    #[error("missing betti data: {0}")]
    MissingBetti(String),
    #[error("mismatched s: {0} vs {1}")]
    MismatchedS(f64, f64),
    #[error("missing sphere data for S^{0}")]
    MissingSphereData(usize),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    #[error("boundary exponent missing: {0}")]
    BoundaryExponentMissing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
