use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("register {index} out of range for {n} registers")]
    RegisterOutOfRange { index: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("swap precondition violated: {0}")]
    SwapPrecondition(String),

    #[error("modulus mismatch: expected {expected:?}, found {found:?}")]
    ModulusMismatch { expected: Option<u32>, found: Option<u32> },

    #[error("weight {0} is not an integer; modular graphs take integer weights only")]
    NonIntegerWeight(String),

    #[error("state of {requested} amplitudes exceeds the cap of {cap} (set SEQMBQC_MAX_AMPS to raise it)")]
    MemoryCap { requested: u128, cap: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation requires d = 2, got d = {0}")]
    UnsupportedDimension(usize),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("registers must be distinct (got {0} twice)")]
    SameRegister(usize),

    #[error("forced outcome {outcome} has probability {prob:e}, below the 1e-14 floor")]
    ImpossibleOutcome { outcome: usize, prob: f64 },

    #[error("not a graph-state nullifier basis: {0}")]
    NotGraphNullifier(String),

    #[error("graph file: {0}")]
    GraphFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
