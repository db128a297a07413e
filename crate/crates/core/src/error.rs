use thiserror::Error;

use crate::deptree::{Arc, TreeViolation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arc {head} -> {dep}: {reason}")]
    InvalidArc {
        head: usize,
        dep: usize,
        reason: &'static str,
    },

    #[error("arc {head} -> {dep} out of range for a graph with {n} tokens")]
    ArcOutOfRange { head: usize, dep: usize, n: usize },

    #[error("duplicate arc {0}")]
    DuplicateArc(Arc),

    #[error("not a tree: {0}")]
    NotATree(TreeViolation),

    #[error("graph is not projective: {0} crosses {1}")]
    Crossing(Arc, Arc),

    #[error("invalid rope cover: {0}")]
    InvalidCover(String),

    #[error("encoding needs bracket index {required}, above the cap of {cap}")]
    IndexCapExceeded { required: u32, cap: u32 },

    #[error("encoder self-check failed: expected {expected:?}, decoded {decoded:?}")]
    SelfCheck {
        expected: Box<crate::DepGraph>,
        decoded: Box<crate::DepGraph>,
    },

    #[error("brute-force search refused: {arcs} arcs exceeds the limit of {limit}")]
    SearchTooLarge { arcs: usize, limit: usize },

    #[error("label parse error at offset {offset}: {message}")]
    LabelParse { offset: usize, message: String },

    #[error("label {0} is not in the 4-bit image")]
    NotFourBit(String),

    #[error("line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("sentence {sentence}: {message}")]
    Structure { sentence: String, message: String },

    #[error("sentence {sentence}: {message}")]
    Mismatch { sentence: usize, message: String },

    #[error("enumeration refused for n = {0}; the limit is 7")]
    EnumerationTooLarge(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
