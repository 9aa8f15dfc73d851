use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no parties running")]
    NoRunningParties,

    #[error("unknown party `{0}`")]
    UnknownParty(String),

    #[error("duplicate party `{0}` in universe")]
    DuplicateParty(String),

    #[error("duplicate voter id `{0}`")]
    DuplicateVoter(String),

    #[error("preference order is not a permutation of the universe: {0}")]
    InvalidOrder(String),

    #[error("invalid election: {0}")]
    InvalidElection(String),

    #[error("invalid goal: {0}")]
    InvalidGoal(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("illegal shift: voter {voter} moves non-coalition party `{party}` upward")]
    IllegalShift { voter: usize, party: String },

    #[error("shift schedule of voter {voter} has no entry for {swaps} swaps")]
    ScheduleTooShort { voter: usize, swaps: usize },

    #[error("threshold unsupported for this solver (tau must be 0)")]
    ThresholdUnsupported,

    #[error("transform requires multiplicative schedules")]
    NonLinearSchedule,

    #[error("search guard exceeded: size {size} > guard {guard}")]
    GuardExceeded { size: usize, guard: usize },

    #[error("usage: {0}")]
    Usage(String),

    #[error("malformed flow network: {0}")]
    MalformedNetwork(String),

    #[error("witness rejected by re-tally: {0}")]
    WitnessRejected(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid rational `{0}`")]
    InvalidRational(String),
}

impl Error {
    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
