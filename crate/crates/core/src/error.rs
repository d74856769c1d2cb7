use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid letter: generator {index} exceeds rank {rank}")]
    InvalidLetter { index: u32, rank: usize },

    #[error("malformed word {0:?}")]
    MalformedWord(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("rank {0} is not supported here")]
    UnsupportedRank(usize),

    #[error("images do not form a basis: {0}")]
    NotABasis(String),

    #[error("word lists differ in shape: {0}")]
    KindMismatch(String),

    #[error("search limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("vertex set is not a translator for the given bases")]
    NotATranslator,

    #[error("edge is not present in the left graph")]
    EdgeAbsent,

    #[error("basis is not a local minimum for the length function")]
    NotLocalMinimum,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A conclusion that the peak-reduction argument guarantees did not
    /// hold. This always indicates a bug in this crate.
    #[error("internal invariant failed: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
