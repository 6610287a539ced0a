use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point with norm {norm} is not inside the unit ball")]
    OutsideBall { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the zero multi-index is not allowed here")]
    ZeroMultiIndex,

    #[error("degree {degree} exceeds the exact integer range (max {max})")]
    Capacity { degree: u32, max: u32 },

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("direction must lie on the unit sphere, got norm {norm}")]
    NotUnitDirection { norm: f64 },

    #[error("quadrature torus leaves the ball: sum (|z_j| + r_j)^2 = {extent}")]
    TorusOutsideBall { extent: f64 },

    #[error("{nodes} nodes per circle cannot resolve derivative order {order}")]
    TooFewNodes { nodes: usize, order: u32 },

    #[error("node count {0} is not a power of two")]
    NodesNotPowerOfTwo(usize),

    #[error("Frechet derivative routes disagree: relative gap {gap:e}")]
    RouteDisagreement { gap: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameters outside the family domain: {0}")]
    Domain(String),

    #[error("point must lie on the first coordinate axis")]
    OffAxis,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed input: {0}")]
    Parse(String),
}
