use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed rational literal.
    Parse(String),
    /// Label outside `1..=n`, or more labels than a [`crate::LabelSet`] holds.
    LabelOutOfRange { label: u32, n: u32 },
    /// Weight vector or tree sizes disagree.
    SizeMismatch { expected: usize, found: usize },
    InvalidWeights(String),
    InvalidTree(String),
    InvalidInput(String),
    /// `m·d_j` is not an integer.
    NonIntegralMultiple { label: u32 },
    DegenerateDirections(String),
    RankMismatch { left: usize, right: usize },
    UnknownPoint(String),
    UnknownDivisor(String),
    /// A blow-up would consume more intersection than remains between two curves.
    IntersectionBudget { first: String, second: String },
    FiberIdentity(String),
    NotPullback(String),
    FiberDegree(String),
    /// A contracted model received a boundary coefficient above one.
    PushedCoefficient { section: String, value: String },
    Singular,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(s) => write!(f, "cannot parse rational `{s}`"),
            Error::LabelOutOfRange { label, n } => write!(f, "label {label} outside 1..={n}"),
            Error::SizeMismatch { expected, found } => {
                write!(f, "size mismatch: expected {expected}, found {found}")
            }
            Error::InvalidWeights(s) => write!(f, "invalid weights: {s}"),
            Error::InvalidTree(s) => write!(f, "invalid tree: {s}"),
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
            Error::NonIntegralMultiple { label } => {
                write!(f, "m·d_{label} is not an integer")
            }
            Error::DegenerateDirections(s) => write!(f, "degenerate collision data: {s}"),
            Error::RankMismatch { left, right } => {
                write!(f, "class rank mismatch: {left} vs {right}")
            }
            Error::UnknownPoint(s) => write!(f, "unknown special point `{s}`"),
            Error::UnknownDivisor(s) => write!(f, "unknown divisor `{s}`"),
            Error::IntersectionBudget { first, second } => write!(
                f,
                "blow-up center over-consumes the intersection of `{first}` and `{second}`"
            ),
            Error::FiberIdentity(s) => write!(f, "fiber class identity fails: {s}"),
            Error::NotPullback(s) => write!(f, "class is not numerically a pullback: {s}"),
            Error::FiberDegree(s) => write!(f, "fiber degree of K + D is not zero: {s}"),
            Error::PushedCoefficient { section, value } => write!(
                f,
                "pushed coefficient {value} on `{section}` exceeds 1"
            ),
            Error::Singular => write!(f, "singular linear system"),
        }
    }
}

impl core::error::Error for Error {}
