use thiserror::Error;

/// Every failure surfaced by the library. `code()` gives a stable machine-readable tag.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank must be at least 1, got {0}")]
    InvalidRank(usize),
    #[error("operands belong to different quivers")]
    SpecMismatch,
    #[error("block violation: {0}")]
    BlockViolation(String),
    #[error("word is not closed: {0}")]
    NotClosed(String),
    #[error("unknown letter {0}")]
    UnknownLetter(String),
    #[error("the Fourier generator needs an even rank, got {0}")]
    OddRank(usize),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("polynomial matrix is not a unit: {0}")]
    NotUnit(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("commutator sum is nonzero: {0}")]
    NotACocycle(String),
    #[error("no primitive exists: {0}")]
    NotSolvable(String),
    #[error("tau must be nonzero")]
    FreeActionLost,
    #[error("numerical drift: moment residual {0:e}")]
    NumericalDrift(f64),
    #[error("matrix is not regular semisimple (eigenvalue gap {0:e})")]
    NotRegularSemisimple(f64),
    #[error("points are not comparable: neither X nor Y is regular semisimple")]
    NotComparable,
    #[error("flow of a diagonal coupling is not polynomial")]
    NonPolynomialFlow,
    #[error("point is outside the regular locus: neither X nor Y is regular semisimple")]
    NotInR,
    #[error("fiber point violates the nonvanishing row/column condition: {0}")]
    BadFiberPoint(String),
    #[error("interpolation nodes collide")]
    NodesCollide,
    #[error("regularization failed after {0} attempts")]
    RegularizationFailed(usize),
    #[error("rank-one reductions lie in different orbits: {0}")]
    NotConnectedAtRank1(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidRank(_) => "InvalidRank",
            Error::SpecMismatch => "SpecMismatch",
            Error::BlockViolation(_) => "BlockViolation",
            Error::NotClosed(_) => "NotClosed",
            Error::UnknownLetter(_) => "UnknownLetter",
            Error::OddRank(_) => "OddRank",
            Error::NotInvertible(_) => "NotInvertible",
            Error::NotUnit(_) => "NotUnit",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::NotACocycle(_) => "NotACocycle",
            Error::NotSolvable(_) => "NotSolvable",
            Error::FreeActionLost => "FreeActionLost",
            Error::NumericalDrift(_) => "NumericalDrift",
            Error::NotRegularSemisimple(_) => "NotRegularSemisimple",
            Error::NotComparable => "NotComparable",
            Error::NonPolynomialFlow => "NonPolynomialFlow",
            Error::NotInR => "NotInR",
            Error::BadFiberPoint(_) => "BadFiberPoint",
            Error::NodesCollide => "NodesCollide",
            Error::RegularizationFailed(_) => "RegularizationFailed",
            Error::NotConnectedAtRank1(_) => "NotConnectedAtRank1",
            Error::Parse { .. } => "ParseError",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
