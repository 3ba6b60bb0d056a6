use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested object does not exist for this input (e.g. an LP row that cannot be met).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A flow of the requested value does not exist; `max` is the best achievable.
    #[error("requested flow {requested} exceeds the maximum achievable {max}")]
    FlowInfeasible { requested: u64, max: u64 },

    /// The input violates a structural precondition (e.g. missing 2-edge-connectivity).
    #[error("structural error: {0}")]
    Structural(String),

    /// A proven invariant failed at runtime. Always a bug.
    #[error("internal logic error: {0}")]
    InternalLogic(String),

    /// An enumeration or iteration budget was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::InternalLogic(msg.into())
    }
}
