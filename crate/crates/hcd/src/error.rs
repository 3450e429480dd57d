use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A claim check that failed together with the evidence, serialized so it
/// can be replayed through the instance parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// Which claim or pipeline assertion was violated.
    pub claim: String,
    /// Human-readable description of the offending object.
    pub detail: String,
    /// The instance (and partition, when present) in document form.
    pub document: String,
}

impl std::fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}\n{}", self.claim, self.detail, self.document)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A pipeline precondition does not hold on the given input.
    #[error("hypothesis not met: {check}: {detail}")]
    HypothesisViolation { check: String, detail: String },

    /// A verified claim failed on an instance satisfying its hypothesis.
    #[error("counterexample: {0}")]
    Counterexample(Box<CounterexampleReport>),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn limit(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }

    pub fn hypothesis(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::HypothesisViolation {
            check: check.into(),
            detail: detail.into(),
        }
    }

    pub fn counterexample(
        claim: impl Into<String>,
        detail: impl Into<String>,
        document: impl Into<String>,
    ) -> Self {
        Error::Counterexample(Box::new(CounterexampleReport {
            claim: claim.into(),
            detail: detail.into(),
            document: document.into(),
        }))
    }
}
