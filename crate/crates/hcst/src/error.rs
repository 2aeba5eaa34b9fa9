use crate::graph::{Edge, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("vertex {target} is not reachable at layer {layer}")]
    NotReachable { target: Vertex, layer: usize },

    #[error("infeasible instance: terminal {terminal} has no hop-feasible connection")]
    Infeasible { terminal: Vertex },

    #[error("not a valid tree: {0}")]
    Structure(String),

    /// A solver produced a structure that is not a feasible tree. The offending
    /// edge set is kept for diagnosis.
    #[error("solver postcondition violated: {message}")]
    Postcondition { message: String, edges: Vec<Edge> },

    #[error("instance has {vertices} vertices, exact search is capped at {cap}")]
    TooLarge { vertices: usize, cap: usize },

    #[error("unpaired run record: {0}")]
    Pairing(String),

    #[error("{}: {source}", path.display())]
    File { path: std::path::PathBuf, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
