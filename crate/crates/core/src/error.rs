use alloc::string::String;

/// Errors produced by the reduction kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("token {index} has zero norm")]
    Degenerate { index: usize },
    #[error("token {index} contains a non-finite value")]
    NonFinite { index: usize },
    #[error("shape mismatch: expected {expected} values, got {actual}")]
    Shape { expected: usize, actual: usize },
    #[error("embedding dimensionality must be at least 1")]
    ZeroDims,
    #[error("matrix of {rows}x{dims} values overflows addressable size")]
    Overflow { rows: usize, dims: usize },
    #[error("importance score {index} is not finite")]
    NonFiniteScore { index: usize },
    #[error("budget {budget} is invalid for {len} tokens")]
    Budget { budget: usize, len: usize },
    #[error("threshold {0} is outside [-1, 1]")]
    Threshold(f64),
    #[error("token count must be at least 1")]
    EmptyInput,
    #[error("output token count {output} exceeds input token count {input}")]
    OutputExceedsInput { output: usize, input: usize },
    #[error("{clusters} orthogonal clusters do not fit in {dims} dimensions")]
    TooManyClusters { clusters: usize, dims: usize },
    #[error("invalid cluster spec: {0}")]
    ClusterSpec(&'static str),
    #[error("invalid reduction: {0}")]
    Reduction(&'static str),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("strategy `{strategy}` requires `{param}`")]
    MissingParameter {
        strategy: &'static str,
        param: &'static str,
    },
    #[error("strategy `{strategy}` does not take `{param}`")]
    UnexpectedParameter {
        strategy: &'static str,
        param: &'static str,
    },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
