use thiserror::Error;

/// Errors raised by the ring, search and time-frequency routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: String, found: String },

    #[error("point {coords:?} does not belong to {group}")]
    InvalidPoint { coords: Vec<i64>, group: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("cocycle family {family} is not supported on {group}")]
    UnsupportedCocycle { family: String, group: String },

    #[error("element {coords:?} has infinite order")]
    InfiniteOrder { coords: Vec<i64> },

    #[error("the identity element has no torsion zero divisor")]
    IdentityElement,

    #[error("empty interior: support of size {support} does not fit in a window of radius {radius}")]
    EmptyInterior { radius: usize, support: usize },

    #[error("the zero element is not allowed here")]
    ZeroElement,

    #[error("invalid degree map: {0}")]
    InvalidDegreeMap(String),

    #[error("element has a support point {coords:?} with a negative coordinate")]
    NegativeCoordinate { coords: Vec<i64> },

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("shift x = {x} is not a multiple of the grid step {step}")]
    OffGridShift { x: f64, step: f64 },

    #[error("shift x = {x} exceeds the grid half-width {half_width}")]
    ShiftOutOfRange { x: f64, half_width: f64 },

    #[error("sample grids differ")]
    GridMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("duplicate time-frequency point ({x}, {xi})")]
    DuplicatePoint { x: f64, xi: f64 },

    #[error("empty point set")]
    EmptyPointSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical routine failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
