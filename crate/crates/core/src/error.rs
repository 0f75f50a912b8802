use thiserror::Error;

/// Errors produced by instance construction, schema validation, and the
/// schema generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate input id `{0}` in instance")]
    DuplicateId(String),

    #[error("input `{id}` has size {size} exceeding capacity {capacity}")]
    ItemExceedsCapacity {
        id: String,
        size: u64,
        capacity: u64,
    },

    #[error("schema references unknown input id `{0}`")]
    UnknownInput(String),

    #[error("input `{id}` assigned twice to reducer {reducer}")]
    DuplicateAssignment { reducer: usize, id: String },

    #[error("item `{id}` of size {size} does not fit bin capacity {capacity}")]
    OversizedItem {
        id: String,
        size: u64,
        capacity: u64,
    },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("strategy not applicable: {reason}; try `{suggested}` instead")]
    WrongStrategy { reason: String, suggested: String },

    #[error("instance admits no feasible schema: {0}")]
    Infeasible(String),

    #[error("no prime p <= {q} satisfies p^2 + (q-p)(p+1) <= {m}")]
    NoDecomposition { q: u64, m: usize },

    #[error("expected problem kind {expected}, got {actual}")]
    KindMismatch {
        expected: &'static str,
        actual: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
