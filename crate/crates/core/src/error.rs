use thiserror::Error;

/// Every fallible operation in this crate reports one of these variants.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimension outside the range the crate supports, or outside the cap the
    /// caller configured for a graph build.
    #[error("dimension {n} outside supported range {min}..={max}")]
    UnsupportedDimension { n: usize, min: usize, max: usize },

    #[error("invalid permutation: {reason}")]
    InvalidPermutation { reason: String },

    #[error("cannot parse permutation {input:?}: {reason}")]
    ParsePermutation { input: String, reason: String },

    #[error("invalid transposition ({i},{j}): {reason}")]
    InvalidTransposition { i: usize, j: usize, reason: String },

    /// A position or dimension does not match the object it is applied to.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank {rank} out of range for dimension {n}: must be below {count}")]
    RankOutOfRange { rank: u64, n: usize, count: u64 },

    #[error("vertex {v} out of range: graph has {count} vertices")]
    VertexOutOfRange { v: usize, count: usize },

    #[error("rotation offset {k} outside 1..={max} for dimension {n}")]
    RotationOffsetOutOfRange { k: usize, n: usize, max: usize },

    /// Cached adjacency was requested for a dimension that only the implicit
    /// mode supports.
    #[error("cached adjacency supports dimensions up to {max}, got {n}; use implicit mode")]
    CacheUnsupported { n: usize, max: usize },

    #[error(
        "adjacency cache for dimension {n} needs {required} bytes, budget is {budget}; \
         use implicit mode or raise the budget"
    )]
    MemoryBudgetExceeded {
        n: usize,
        required: u64,
        budget: u64,
    },

    #[error(
        "readable DOT export is limited to dimensions up to {max}, got {n}; pass force to override"
    )]
    ExportTooLarge { n: usize, max: usize },

    #[error("maximum degree {max_deg} below 2: cycle bound undefined")]
    DegreeTooSmall { max_deg: u64 },

    #[error("construction base {base} must be an odd permutation")]
    EvenBase { base: String },

    #[error("invalid certificate: {reason}")]
    InvalidCertificate { reason: String },

    #[error("exact solver limited to graphs with at most {cap} vertices, got {vertices}")]
    SolverCapExceeded { vertices: usize, cap: usize },

    #[error("edge list line {line}: {reason}")]
    ParseEdgeList { line: usize, reason: String },

    #[error("self-loop at vertex {v}: feedback vertex sets are defined on simple graphs here")]
    SelfLoop { v: usize },

    #[error("certificate serialization: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
