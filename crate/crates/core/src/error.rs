use thiserror::Error;

/// Errors raised while parsing Newick text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("newick error at byte {pos}: {kind}")]
pub struct NewickError {
    pub pos: usize,
    pub kind: NewickErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickErrorKind {
    #[error("unexpected character {0:?}")]
    Unexpected(char),
    #[error("unexpected end of input")]
    Eof,
    #[error("trailing input after ';'")]
    Trailing,
    #[error("missing branch length")]
    MissingLength,
    #[error("invalid branch length {0:?}")]
    BadLength(String),
    #[error("negative branch length {0}")]
    NegativeLength(String),
    #[error("invalid leaf label {0:?}")]
    BadLabel(String),
    #[error("leaf without a label")]
    UnlabeledLeaf,
    #[error("internal node labels are not supported ({0:?})")]
    InternalLabel(String),
    #[error("duplicate leaf label {0}")]
    DuplicateLabel(usize),
    #[error("leaf labels must be exactly 1..={n}; label {missing} is missing")]
    MissingLabel { n: usize, missing: usize },
    #[error("a tree needs at least two leaves")]
    TooFewLeaves,
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Newick(#[from] NewickError),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("{0}")]
    Precondition(String),
    /// A mathematical verdict that prevents the operation, with a witness.
    #[error("{what} (witness {witness})")]
    Violation { what: String, witness: String },
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
