use thiserror::Error;

/// Every failure the toolkit reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph too large: {n} vertices (at most {max} supported)")]
    TooManyVertices { n: usize, max: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop forbidden at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),

    #[error("vertex collision: second graph offset {offset} overlaps first graph on {n} vertices")]
    VertexCollision { offset: usize, n: usize },

    #[error("exact domination limit exceeded: {n} vertices (limit {limit})")]
    DominationLimit { n: usize, limit: usize },

    #[error("radius undefined: graph is empty or disconnected")]
    RadiusUndefined,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid retraction: {0}")]
    InvalidRetraction(String),

    #[error("period must be at least 1")]
    EmptyPeriod,

    #[error("snapshot {index} has {found} vertices, expected {expected}")]
    SnapshotSize { index: usize, found: usize, expected: usize },

    #[error("padding requires period ≥ 2")]
    PaddingPeriod,

    #[error("padding target {target} is smaller than the vertex count {n}")]
    PaddingTarget { target: usize, n: usize },

    #[error("vertex subset must be nonempty")]
    EmptyVertexSet,

    #[error("corner search budget exceeded: {candidates} candidate tuples (limit {limit})")]
    CornerBudget { candidates: u128, limit: u128 },

    #[error("k must be at least 1")]
    ZeroCops,

    #[error("state budget exceeded: {states} states (limit {limit})")]
    StateBudget { states: u128, limit: u128 },

    #[error("instance is not {k}-copwin")]
    NotCopwin { k: usize },

    #[error("infeasible policy move at layer {t}: cop {cop} cannot go from {from} to {to}")]
    InfeasibleMove { t: usize, cop: usize, from: usize, to: usize },

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("construction self-check failed: {0}")]
    Construction(String),

    #[error("invalid search spec: {0}")]
    SearchSpec(String),

    #[error("{code} at line {line}: {message}")]
    Parse {
        code: &'static str,
        line: usize,
        message: String,
    },

    #[error("period mismatch: period {period} but {snapshots} snapshots")]
    PeriodMismatch { period: usize, snapshots: usize },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
