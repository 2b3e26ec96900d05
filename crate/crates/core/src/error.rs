use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("malformed input: {0}")]
    Format(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {0} vertices, more than this search supports")]
    TooLarge(usize),
    #[error("invalid rotation system: {0}")]
    Rotation(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("condition violated ({clause}) at {vertex}")]
    ConditionViolated { clause: String, vertex: String },
    #[error("no extension: {0}")]
    NoExtension(String),
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no clause holds: {0}")]
    NoClauseHolds(String),
    #[error("unknown configuration `{0}`")]
    UnknownConfiguration(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
