use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval bounds [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("interval operation overflowed to a non-finite bound")]
    Overflow,

    #[error("division by an interval containing zero")]
    DivisionByZero,

    #[error("argument outside the domain of {0}")]
    Domain(&'static str),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix could not be verified as nonsingular")]
    Singular,

    #[error("index {index} out of range for {count} variables")]
    IndexOutOfRange { index: usize, count: usize },

    /// A direction enclosure reached the excluded point t in {0, pi} of the angle chart.
    #[error("chart boundary violation: {0}")]
    ChartBoundary(String),

    #[error("evaluation box outside the declared neighborhood: {0}")]
    OutsideNeighborhood(String),

    #[error("orbit enclosure too wide at step {step}: width {width:e}")]
    OrbitBlowup { step: usize, width: f64 },

    /// A sufficient condition could not be certified. Never a disproof.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("configuration error: {0}")]
    Config(String),
}
