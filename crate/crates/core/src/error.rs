use std::fmt;

/// Errors produced when an operation's domain assumptions are violated or an
/// internal structural guarantee fails to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The zero vector was supplied where a nonzero vector is required.
    ZeroVector,
    /// A vector was required to be primitive (coordinate gcd 1) but is not.
    NotPrimitive,
    /// A generating set spans the zero subgroup.
    ZeroRank,
    /// A full-rank sublattice was required.
    NotFullRank,
    /// Dimensions of the inputs do not agree, or lie outside 1..=3.
    Dimension(String),
    /// A named hypothesis of the operation does not hold for the inputs.
    Domain(String),
    /// The input is exact but too large for the implemented enumeration.
    TooLarge(String),
    /// A structural guarantee the implementation relies on was violated.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroVector => write!(f, "zero vector not allowed"),
            Error::NotPrimitive => write!(f, "vector is not primitive"),
            Error::ZeroRank => write!(f, "generating set has rank zero"),
            Error::NotFullRank => write!(f, "sublattice is not of full rank"),
            Error::Dimension(msg) => write!(f, "dimension error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::TooLarge(msg) => write!(f, "input too large: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
