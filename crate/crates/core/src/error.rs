use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop on `{0}` is not allowed")]
    SelfLoop(String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),
    #[error("edge endpoint `{0}` is not a declared vertex")]
    UndeclaredEndpoint(String),
    #[error("proposition `{prop}` must label exactly one vertex, found {count}")]
    AssumptionOneViolated { prop: String, count: usize },
    #[error("propositions `{0}` and `{1}` resolve to the same vertex")]
    DuplicateWaypoint(String, String),
    #[error("waypoint chain is empty")]
    EmptyChain,
    #[error("enumeration budget exceeded: {count} candidates with limit {limit}")]
    EnumerationBudgetExceeded { count: usize, limit: usize },
    #[error("leg {leg} from `{from}` to `{to}` admits no augmenting path")]
    EmptyCatalog {
        leg: usize,
        from: String,
        to: String,
    },
    #[error("flow matrix has {got} columns, expected {expected}")]
    InconsistentDimensions { expected: usize, got: usize },
    #[error("integer program is infeasible: a cut path has no candidate edge")]
    Infeasible,
    #[error("no test graph exists for this environment: {0}")]
    InfeasibleEnvironment(String),
    #[error("goal `{goal}` is unreachable from `{from}`")]
    UnreachableGoal { from: String, goal: String },
    #[error("graph has {edges} edges, exceeding the exhaustive-search bound {max}")]
    TooLarge { edges: usize, max: usize },
    #[error("cell ({row}, {col}) is outside the {rows}x{cols} grid")]
    OutOfBounds {
        row: u32,
        col: u32,
        rows: u32,
        cols: u32,
    },
    #[error("cut ({0}, {1}) does not join adjacent grid cells")]
    NonAdjacentCut(String, String),
    #[error("{props} propositions plus a goal do not fit in a {rows}x{cols} grid")]
    TooManyProps { props: usize, rows: u32, cols: u32 },
    #[error("no instance satisfied the shortest-path assumption after {0} samples")]
    ResampleBudgetExceeded(usize),
    #[error("invalid {what}: {detail}")]
    InvalidFormat { what: &'static str, detail: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
