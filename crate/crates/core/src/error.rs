use thiserror::Error;

/// Errors raised by the library.
///
/// Variant names double as the stable, machine-readable error names reported
/// by the command-line front end (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("two of the given points coincide")]
    DegenerateTuple,
    #[error("cannot sample {needed} distinct coordinates for k = {k} at height {height}")]
    ExhaustedSampleSpace {
        k: usize,
        height: u64,
        needed: usize,
    },
    #[error("difference of identical symbolic points")]
    IdenticalPoints,
    #[error("ambient markings differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("expected a point with {expected} coordinates, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("permutation degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("entry {entry} out of range 1..={max}")]
    OutOfRange { entry: usize, max: usize },
    #[error("entry {0} repeated")]
    RepeatedEntry(usize),
    #[error("degree {degree} exceeds enumeration ceiling {ceiling}")]
    DegreeTooLarge { degree: usize, ceiling: usize },
    #[error("no permutation realizes the given map")]
    NotAGroupElement,
    #[error("generator has no source permutation and none could be found")]
    MissingProvenance,
    #[error("no collision witness found within {0} specializations")]
    BudgetExhausted(usize),
    #[error("no group element extends the given coordinates")]
    NoExtension,
    #[error("target marking n = {n} exceeds source marking m = {m}")]
    TargetLargerThanSource { m: usize, n: usize },
    #[error("no lift of the permutation satisfies the intertwining identity")]
    LiftVerificationFailed,
    #[error("point is not in the configuration space: {0}")]
    NotInOmega(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable name of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateTuple => "DegenerateTuple",
            Error::ExhaustedSampleSpace { .. } => "ExhaustedSampleSpace",
            Error::IdenticalPoints => "IdenticalPoints",
            Error::AmbientMismatch { .. } => "AmbientMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::MalformedInput(_) => "MalformedInput",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::RepeatedEntry(_) => "RepeatedEntry",
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
            Error::NotAGroupElement => "NotAGroupElement",
            Error::MissingProvenance => "MissingProvenance",
            Error::BudgetExhausted(_) => "BudgetExhausted",
            Error::NoExtension => "NoExtension",
            Error::TargetLargerThanSource { .. } => "TargetLargerThanSource",
            Error::LiftVerificationFailed => "LiftVerificationFailed",
            Error::NotInOmega(_) => "NotInOmega",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
