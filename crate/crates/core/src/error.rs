use thiserror::Error;

/// Everything that can go wrong while loading or solving an instance.
#[derive(Debug, Error)]
pub enum CmsError {
    /// No schedule exists (or the relaxation proving it is infeasible).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A configured search or enumeration budget would be exceeded.
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    /// The algorithm does not accept this kind of instance.
    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("nothing to schedule: every remaining demand is zero")]
    NothingToSchedule,

    /// Highest-throughput-first could not make progress on a positive demand.
    #[error("stuck: no admissible machine reduces remaining demand of job {0}")]
    Stuck(usize),

    /// An LP extreme point produced an assignment graph with a component
    /// holding more than one cycle.
    #[error("assignment graph is not a pseudo-forest")]
    NotPseudoForest,

    #[error("unknown job index {0}")]
    UnknownJob(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CmsError> = std::result::Result<T, E>;
