use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("simplex references unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown simplex {0:?} in dimension {1}")]
    UnknownSimplex(Vec<String>, usize),
    #[error("dimension {k} out of range (dim_cap {dim_cap})")]
    DimOutOfRange { k: usize, dim_cap: usize },
    #[error("vertex map is not simplicial: witness simplex {0:?}")]
    NotSimplicial(Vec<String>),
    #[error("vertex map assignment misses source vertex {0:?}")]
    MissingAssignment(String),
    #[error("maps do not share source and target complexes")]
    MapMismatch,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("invalid codomain: {0}")]
    InvalidCodomain(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("cover element {0} fits inside no target element")]
    NoContainer(usize),
    #[error("exact Lebesgue computation exceeds the guard limit ({points} points > {limit})")]
    LebesgueGuard { points: usize, limit: usize },
    #[error("unsupported tower construction for c = {0}")]
    UnsupportedTower(f64),
    #[error("scale parameter must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("vertex {0:?} has a value outside every cover element")]
    VertexNotCovered(String),
    #[error("edge {{{0:?}, {1:?}}} has no common pullback element")]
    EdgeNotCovered(String, String),
    #[error("exact computation exceeds the guard limit ({size} > {limit})")]
    GuardExceeded { size: usize, limit: usize },
    #[error("input is disconnected where a connected input is required")]
    Disconnected,
    #[error("distortion over infinite metric entries")]
    InfiniteDistortion,
    #[error("negative bar multiplicity at [{birth}, {death}): input module is not functorial")]
    NegativeMultiplicity { birth: usize, death: usize },
    #[error("diagram coordinate {0} cannot be log-scaled")]
    BadLogCoordinate(f64),
    #[error("Reeb graphs require dimension <= 2, got {0}")]
    ReebDimension(usize),
    #[error("vertex {0:?} has no function value")]
    MissingValue(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
