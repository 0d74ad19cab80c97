use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truth table length {0} is not a power of two >= 2")]
    InvalidLength(usize),

    #[error("invalid character {ch:?} at position {pos}")]
    InvalidChar { ch: char, pos: usize },

    #[error("{0} variables requested, at most {max} supported", max = crate::truth_table::MAX_VARS)]
    TooManyVariables(usize),

    #[error("input code {x} out of range for {n} variables")]
    InputOutOfRange { x: u64, n: usize },

    #[error("malformed restriction: values {values:#x} outside mask {mask:#x}")]
    MalformedRestriction { mask: u32, values: u32 },

    #[error("restriction fixes every variable; use the constant accessor")]
    NoFreeVariables,

    #[error("variable set of size {size} out of range {min}..={max}")]
    SetSizeOutOfRange { size: usize, min: usize, max: usize },

    #[error("{what} limited to n <= {max}, got n = {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("function does not depend on variable x{0}")]
    DummyVariable(usize),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("tree syntax error at byte {pos}: {msg}")]
    TreeSyntax { pos: usize, msg: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("decision table has no entry for reachable transcript {0:?}")]
    MissingTranscript(Vec<usize>),

    #[error(
        "search budget exceeded: {required} candidate evaluations required, budget is {budget}"
    )]
    BudgetExceeded { required: f64, budget: u64 },

    #[error("epsilon {0} outside (0, 0.0268]")]
    EpsilonOutOfRange(f64),

    #[error("invalid file contents: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
