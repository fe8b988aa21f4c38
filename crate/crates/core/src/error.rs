//! Error type shared by every module of the crate.

use thiserror::Error;

/// All failure modes of kernel operations, constructions, and bundle I/O.
///
/// Verification *reports* are not errors: a failing axiom is a value
/// (see [`crate::report::VerificationReport`]). Errors are reserved for
/// violated preconditions, malformed inputs, and impossible constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("inverse of zero")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("bad permutation: {0}")]
    BadPermutation(String),

    #[error("singular matrix")]
    Singular,

    #[error("construction invalid: {subject} fails check {check}")]
    ConstructionInvalid { subject: String, check: String },

    #[error("vector is not group-like: {0}")]
    NotGroupLike(String),

    #[error("counit of the chosen element is not 1 (got {0})")]
    CounitNotOne(String),

    #[error("coalgebra is not cocommutative")]
    NotCocommutative,

    #[error("structure is not commutative: {0}")]
    NotCommutative(String),

    #[error("map is not idempotent")]
    NotIdempotent,

    #[error("map is not a heap endomorphism: fails {0}")]
    NotHeapEndo(String),

    #[error("no unit for the circle product: {0}")]
    NoCircUnit(String),

    #[error("algebra is not commutative")]
    NotCommutativeAlgebra,

    #[error("map is not an algebra map: fails {0}")]
    NotAlgebraMap(String),

    #[error("no antipode: the convolution system is insoluble")]
    NoAntipode,

    #[error("antipode does not commute with the operator")]
    AntipodeCommutationFails,

    #[error("operator does not fix the group-like: B(x) = {0}")]
    FixedPointFails(String),

    #[error("map is not an automorphism")]
    NotAutomorphism,

    #[error("operator does not preserve the counit (fails at basis {0})")]
    CounitCondFails(usize),

    #[error("image of the group-like is not group-like: {0}")]
    ImageNotGroupLike(String),

    #[error("operator is not surjective (rank {rank} < {dim})")]
    NotSurjective { rank: usize, dim: usize },

    #[error("group-like search unsupported at dimension {dim} without hints")]
    UnsupportedDimension { dim: usize },

    #[error("exact solver could not finish: {0}")]
    SolverIncomplete(String),

    #[error("parse error at {position}: {message}")]
    ParseError { position: String, message: String },

    #[error("dangling reference to object `{0}`")]
    DanglingReference(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
