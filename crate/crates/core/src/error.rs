use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variants are grouped by how the command line maps them to exit codes:
/// malformed input and violated preconditions, mathematical failures (the
/// input is well formed but the requested object does not exist), and
/// exhausted evaluation caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // input / precondition
    #[error("malformed ring spec: {0}")]
    MalformedSpec(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("ring is not finite: {0}")]
    RingNotFinite(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    // mathematical failures
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("ring is not connected: {0}")]
    NotConnected(String),
    #[error("ring is not local: {0}")]
    NotLocal(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("witness invalid: {0}")]
    WitnessInvalid(String),
    #[error("monic lift failed: {0}")]
    LiftFailed(String),
    #[error("ideal is not principal: {0}")]
    NotPrincipalDetected(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("rank is not one: {0}")]
    RankNotOne(String),
    #[error("module is not free: {0}")]
    NonFree(String),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("vector is not unimodular")]
    NotUnimodular,
    #[error("quadric relation violated: {0}")]
    QuadricViolated(String),
    #[error("no affine chart contains the point")]
    NoChart,
    #[error("q is not a unit at the point: {0}")]
    QNotUnitAtPoint(String),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("determinant is not a unit: {0}")]
    DetNotUnit(String),

    // caps
    #[error("domain too large: {0}")]
    DomainTooLarge(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    MathFailure,
    CapExceeded,
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedSpec(_) => "MalformedSpec",
            Error::RingMismatch(_) => "RingMismatch",
            Error::Parse(_) => "ParseError",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Precondition(_) => "PreconditionViolated",
            Error::Unsupported(_) => "Unsupported",
            Error::UnsupportedRing(_) => "UnsupportedRing",
            Error::RingNotFinite(_) => "RingNotFinite",
            Error::NotMonic => "NotMonic",
            Error::NotIdempotent => "NotIdempotent",
            Error::NotHomogeneous(_) => "NotHomogeneous",
            Error::DegreeMismatch(_) => "DegreeMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::NotConnected(_) => "NotConnected",
            Error::NotLocal(_) => "NotLocal",
            Error::NotACocycle(_) => "NotACocycle",
            Error::WitnessInvalid(_) => "WitnessInvalid",
            Error::LiftFailed(_) => "LiftFailed",
            Error::NotPrincipalDetected(_) => "NotPrincipalDetected",
            Error::NotDivisible(_) => "NotDivisible",
            Error::RankNotOne(_) => "RankNotOne",
            Error::NonFree(_) => "NonFree",
            Error::ZeroIdeal => "ZeroIdeal",
            Error::NotUnimodular => "NotUnimodular",
            Error::QuadricViolated(_) => "QuadricViolated",
            Error::NoChart => "NoChart",
            Error::QNotUnitAtPoint(_) => "QNotUnitAtPoint",
            Error::CertificateInvalid(_) => "CertificateInvalid",
            Error::DetNotUnit(_) => "DetNotUnit",
            Error::DomainTooLarge(_) => "CapExceeded",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::MalformedSpec(_)
            | Error::RingMismatch(_)
            | Error::Parse(_)
            | Error::InvalidInput(_)
            | Error::Precondition(_)
            | Error::Unsupported(_)
            | Error::UnsupportedRing(_)
            | Error::RingNotFinite(_)
            | Error::NotMonic
            | Error::NotIdempotent
            | Error::NotHomogeneous(_)
            | Error::DegreeMismatch(_) => ErrorClass::InvalidInput,
            Error::DomainTooLarge(_) => ErrorClass::CapExceeded,
            _ => ErrorClass::MathFailure,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
