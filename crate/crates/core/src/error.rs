use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// The hypotheses of the limit lifting construction, named so failures can be
/// reported precisely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitHypothesis {
    /// The functor is not a cloven strict fibration.
    Fibration(String),
    /// The base diagram has no limit of the requested mode.
    BaseLimit,
    /// The fiber over the base apex has no limit of the lifted diagram.
    FiberLimit,
    /// Reindexing along the named base 1-cell does not preserve the fiber limit.
    Preservation(String),
}

impl std::fmt::Display for LimitHypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitHypothesis::Fibration(why) => write!(f, "not a cloven strict fibration: {why}"),
            LimitHypothesis::BaseLimit => write!(f, "base has no limit of the projected diagram"),
            LimitHypothesis::FiberLimit => write!(f, "fiber has no limit of the lifted diagram"),
            LimitHypothesis::Preservation(g) => {
                write!(f, "reindexing along {g} does not preserve the fiber limit")
            }
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Dangling ids, missing or misplaced table entries, duplicate names.
    #[error("structural error: {0}")]
    Structural(String),
    #[error("size guardrail exceeded: {what} has {actual} entries (limit {limit})")]
    SizeLimit {
        what: String,
        actual: usize,
        limit: usize,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The tables contradict a property they were assumed to have.
    #[error("inconsistent data: {0}")]
    Inconsistency(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("incompatible variances: {0}")]
    Variance(String),
    #[error("missing cleavage entry: {0}")]
    MissingCleavage(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(LimitHypothesis),
}

impl Error {
    pub(crate) fn incons(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
