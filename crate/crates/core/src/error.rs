use crate::graph::GraphError;
use crate::sim::SimError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid epsilon {0}: must be positive")]
    InvalidEpsilon(String),
    #[error("exact solver cap exceeded: {vertices} vertices > cap {cap}")]
    SizeCap { vertices: usize, cap: usize },
    #[error("weight does not fit the solver's integer range")]
    WeightOverflow,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("no progress for {phases} consecutive phases")]
    Stalled { phases: usize },
}

impl Error {
    /// Short machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Graph(_) => "input",
            Error::Sim(SimError::Bandwidth { .. }) => "bandwidth",
            Error::Sim(SimError::Encoding { .. }) => "encoding",
            Error::Sim(SimError::ItemTooLarge { .. }) => "encoding",
            Error::Sim(SimError::IllegalSend { .. }) => "illegal_send",
            Error::Sim(SimError::RoundCap { .. }) => "nontermination",
            Error::Disconnected => "connectivity",
            Error::InvalidEpsilon(_) => "input",
            Error::SizeCap { .. } => "size",
            Error::WeightOverflow => "size",
            Error::Config(_) => "config",
            Error::Domain(_) => "domain",
            Error::Contract(_) => "contract",
            Error::Generation(_) => "generation",
            Error::Stalled { .. } => "nontermination",
        }
    }
}
