use thiserror::Error;

/// Errors raised by the kernel. Every variant describes an input or
/// hypothesis problem; mathematical checks that merely fail return `false`
/// or a report rather than an error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("no generic projection: a span of rank {rank} cannot inject into rank {target}")]
    NoGenericProjection { rank: usize, target: usize },

    #[error("point is not contained in the support of the complex")]
    NotInSupport,

    #[error("function is not piecewise linear on the support: {0}")]
    NotPiecewiseLinear(String),

    #[error("non-compact support: form does not vanish on unbounded cell {cell}")]
    NonCompactSupport { cell: String },

    #[error("form is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("bidegree ({p},{q}) not allowed here: {reason}")]
    Bidegree { p: usize, q: usize, reason: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("connected component without boundary vertex: {{{}}}", .0.join(", "))]
    ComponentWithoutBoundary(Vec<String>),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
