use thiserror::Error;

use crate::polity::{AgentId, Allocation};

/// Errors raised by the decision engine and its value types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid agent id {agent} (polity has {agents} agents)")]
    InvalidAgent { agent: usize, agents: usize },

    #[error("{}", zero_reference_message(*agent, state.as_ref()))]
    ZeroReferencePoint { agent: AgentId, state: Option<Allocation> },

    #[error("invalid quantity `{0}`")]
    InvalidQuantity(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("infeasible configuration: {0}")]
    InfeasibleConfig(String),

    #[error("infeasible lattice: {0}")]
    InfeasibleLattice(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("agent {agent} yields vector-valued preference information")]
    VectorValuedAgentInfo { agent: AgentId },

    #[error("move count {required} exceeds cap {cap}")]
    CapExceeded { cap: u64, required: u64 },

    #[error("state list is empty")]
    EmptyStateList,

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

fn zero_reference_message(agent: AgentId, state: Option<&Allocation>) -> String {
    match state {
        Some(state) => format!("zero reference point for agent {agent} at state {state}"),
        None => format!("zero reference point for agent {agent}"),
    }
}

impl Error {
    pub fn is_zero_reference(&self) -> bool {
        matches!(self, Error::ZeroReferencePoint { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
