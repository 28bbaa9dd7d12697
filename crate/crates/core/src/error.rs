use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A word referred to a generator index outside the presentation.
    UnknownGenerator(usize),
    /// An exponent left the configured integer width during collection.
    Overflow,
    /// Presentation data is malformed (shapes, orders, weights, word support).
    InvalidPresentation(String),
    /// A consistency test failed; the presentation is rejected.
    Inconsistent(String),
    /// The presentation does not certify a central series.
    NotNilpotent(String),
    /// Some conjugate of a generator of the candidate kernel escapes it.
    NotNormal,
    /// An exponent was requested for a subgroup of infinite order.
    ExponentRequested,
    /// A finite-group operation was requested on an infinite group.
    InfiniteGroup,
    /// Images of the generators do not respect a defining relation.
    NotAHomomorphism(String),
    /// The quotient is not a finite group of the required prime type.
    BadIndex(String),
    /// The element lies in the isolator, so no separating quotient exists.
    InsideIsolator,
    /// Bounded root extraction proved that no root exists.
    NoRootFound,
    /// A bounded search ran out of candidates; the bounds are reported.
    SearchExhausted(String),
    /// A standing hypothesis of a criterion is violated.
    HypothesisFailed(String),
    /// An enumeration would exceed the configured size limit.
    TooLarge(String),
    /// An element was expected to lie in a given subgroup.
    NotInSubgroup,
    /// An argument falls outside the operation's domain.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownGenerator(i) => write!(f, "unknown generator index {i}"),
            Error::Overflow => write!(f, "exponent overflow beyond 128-bit integers"),
            Error::InvalidPresentation(m) => write!(f, "invalid presentation: {m}"),
            Error::Inconsistent(m) => write!(f, "inconsistent presentation: {m}"),
            Error::NotNilpotent(m) => write!(f, "presentation is not nilpotent: {m}"),
            Error::NotNormal => write!(f, "subgroup is not normal"),
            Error::ExponentRequested => write!(f, "exponent requested for an infinite subgroup"),
            Error::InfiniteGroup => write!(f, "group is infinite"),
            Error::NotAHomomorphism(m) => write!(f, "not a homomorphism: {m}"),
            Error::BadIndex(m) => write!(f, "bad index: {m}"),
            Error::InsideIsolator => write!(f, "element lies in the isolator and cannot be separated"),
            Error::NoRootFound => write!(f, "no root exists"),
            Error::SearchExhausted(m) => write!(f, "search bounds exhausted: {m}"),
            Error::HypothesisFailed(m) => write!(f, "hypothesis failed: {m}"),
            Error::TooLarge(m) => write!(f, "enumeration too large: {m}"),
            Error::NotInSubgroup => write!(f, "element is not in the subgroup"),
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
        }
    }
}

impl core::error::Error for Error {}
