use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constraint violated: alpha*gamma - beta*delta - 1 = {residual:e}")]
    ConstraintViolation { residual: f64 },
    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),
    #[error("delta is indefinite on the beta = 0 line")]
    DegenerateDelta,
    #[error("parameters sit on the singular point (1/gamma0, 0)")]
    SingularPoint,
    #[error("gamma0 must be non-zero")]
    InvalidGamma0,
    #[error("path passes within {eps:e} of the singular point")]
    PathThroughSingularity { eps: f64 },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{below} eigenvalue(s) lie below the energy floor {floor}")]
    FloorTooHigh { floor: f64, below: usize },
    #[error("root refinement did not converge near E = {near}")]
    NoConvergence { near: f64 },
    #[error("eigenvalue count check failed up to E = {energy} (found {found}, decoupled reference {reference})")]
    MissedRoots { energy: f64, found: usize, reference: usize },
    #[error("E = {energy} is not an eigenvalue (boundary residual {residual:e})")]
    NotAnEigenvalue { energy: f64, residual: f64 },
    #[error("position {0} lies outside the box")]
    OutOfDomain(f64),
    #[error("wavefunctions live on different domains")]
    DomainMismatch,
    #[error("three-delta schedule needs beta != 0 and delta != 0")]
    UnrepresentableParams,
    #[error("tangent pole within {eps:e} at k = {k}")]
    NearPole { k: f64, eps: f64 },
    #[error("step fell below {min_step:e} at path position {position}")]
    StepUnderflow { position: f64, min_step: f64 },
    #[error("endpoint spectra disagree: {0}")]
    SpectraMismatch(String),
    #[error("overlap magnitude {overlap} below 0.5 for level {level}")]
    GaugeAmbiguity { level: usize, overlap: f64 },
    #[error("state {level} left the tracked window (row norm {norm})")]
    TruncationLeak { level: usize, norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
