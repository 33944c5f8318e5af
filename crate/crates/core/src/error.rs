use thiserror::Error;

use crate::realize::Verdict;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("field degree {0} outside the supported range 1..=24")]
    FieldDegree(u32),

    #[error("modulus {modulus:#b} does not have degree {degree}")]
    ModulusDegree { degree: u32, modulus: u64 },

    #[error("modulus {modulus:#b} is reducible; it has the factor {factor:#b}")]
    Reducible { modulus: u64, factor: u64 },

    #[error("operands live in different fields")]
    FieldMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero polynomial cannot be factored")]
    ZeroPolynomial,

    #[error("singular Mobius transformation (ad - bc = 0)")]
    SingularMatrix,

    #[error("degenerate cover: reduced right-hand side is the constant {0}")]
    DegenerateCover(String),

    #[error("invalid Klein-four cover: {0}")]
    InvalidCover(String),

    #[error("invalid partition of {g}: {reason}")]
    InvalidPartition { g: i64, reason: String },

    #[error("2-rank {sigma} outside 0..={g}")]
    SigmaRange { g: i64, sigma: i64 },

    #[error("no cover exists: clause {} ({})", .0.clause, .0.citation)]
    Impossible(Verdict),

    #[error("constructed witness does not match its target: {0}")]
    InternalMismatch(String),

    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),

    #[error("extension of degree {0} over GF(2) exceeds the counting bound 24")]
    ExtensionTooLarge(u32),

    #[error("ran out of rational places over GF(2^{0})")]
    OutOfPlaces(u32),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
