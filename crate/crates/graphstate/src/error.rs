use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop ({0}, {0}) is not allowed in a simple graph")]
    SelfLoop(usize),

    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },

    #[error("vertex index {0} is out of range")]
    NoSuchVertex(usize),

    #[error("no vertex carries the label {0:?}")]
    NoSuchLabel(String),

    #[error("labels must be unique within a graph; {0:?} repeats")]
    DuplicateLabel(String),

    #[error("expected {expected} labels, got {got}")]
    LabelCountMismatch { expected: usize, got: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bipartition side must be nonempty and proper")]
    EmptySide,

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("degree sequence is not bipartite-realizable: {condition} fails at p = {p}")]
    UnrealizableSequence { condition: String, p: usize },

    #[error("n = {n} exceeds the limit {limit}; {advice}")]
    OverLimit {
        n: usize,
        limit: usize,
        advice: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("pipeline step {index} failed: {source}")]
    PipelineStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid rank decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("reduction did not reach the expected endpoint: {0}")]
    ReductionMismatch(String),

    #[error("conditional probability of the sampled prefix fell below 1e-300; \
             the chain rule cannot condition on a measure-zero prefix")]
    VanishingMarginal,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
