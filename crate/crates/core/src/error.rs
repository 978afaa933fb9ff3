use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("invalid strand count {0}")]
    BadStrandCount(usize),
    #[error("word is not positive")]
    NotPositive,
    #[error("word is not simple: strands {0} and {1} cross twice")]
    NotSimple(usize, usize),
    #[error("not a permutation")]
    NotPermutation,
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("diagram is not reduced")]
    Unreduced,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cyclic below relation between punctures {0} and {1}")]
    CyclicOrder(usize, usize),
    #[error("step budget of {0} exceeded")]
    BudgetExceeded(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
