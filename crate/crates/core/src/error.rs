use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input that does not describe a valid object (matroid, family, shape).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Two circuit-hyperplanes whose symmetric difference is smaller than 4.
    #[error("circuit-hyperplanes {first} and {second} have symmetric difference {distance} < 4")]
    SymmetricDifference {
        first: String,
        second: String,
        distance: u32,
    },

    /// A family larger than any circuit-hyperplane family can be.
    #[error("|CH| = {requested} exceeds the upper bound {bound} for m = {m}, d = {d}")]
    BoundExceeded {
        m: u32,
        d: u32,
        requested: String,
        bound: String,
    },

    /// An enumeration or solver limit was hit.
    #[error("resource cap exceeded: {0}")]
    TooLarge(String),

    /// A randomized search gave up. This says nothing about feasibility.
    #[error("search gave up after {attempts} restarts")]
    SearchExhausted { attempts: usize },

    /// An internal consistency check failed; this indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}
