use thiserror::Error;

use crate::topology::VertexId;

/// Errors raised while building topologies, machines and composition trees.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("vertex labels must be non-empty")]
    EmptyVertexLabel,
    #[error("machine names must be non-empty")]
    EmptyName,
    #[error("machine `{machine}`: initial vertex `{vertex}` is not part of its topology")]
    UnknownVertex { machine: String, vertex: VertexId },
    #[error("leaf name `{name}` appears more than once in the composition")]
    DuplicateLeafName { name: String },
    #[error("feedback cap must be at least 1")]
    InvalidFeedbackCap,
}

/// Errors raised while stepping a machine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    /// The action of a base machine produced a transition its topology forbids.
    #[error("machine `{machine}` attempted disallowed transition {from} -> {to}")]
    DisallowedTransition {
        machine: String,
        from: VertexId,
        to: VertexId,
    },
    /// A feedback loop did not settle within the configured number of iterations.
    #[error("feedback loop exceeded the cap of {cap} iterations")]
    FeedbackOverflow { cap: usize },
}

/// A [`StepError`] tagged with the 0-based index of the input that caused it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("input #{index}: {source}")]
pub struct TraceError {
    pub index: usize,
    #[source]
    pub source: StepError,
}
