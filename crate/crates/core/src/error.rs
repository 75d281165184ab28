use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("value at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("measure value at {index} is negative ({value})")]
    NegativeValue { index: usize, value: f64 },
    #[error("measure is identically zero")]
    ZeroMeasure,
    #[error("set is empty")]
    EmptySet,
    #[error("residue {value} is out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: usize },
    #[error("estimated {estimated} elementary products exceeds budget of {budget}")]
    BudgetExceeded { estimated: u128, budget: u64 },
    #[error("numerical inconsistency in {context}: {value:e}")]
    NumericalInconsistency { context: &'static str, value: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("modulus {0} is not prime")]
    CompositeModulus(usize),
    #[error("modulus {n} must exceed the uniformity {r}")]
    ModulusTooSmall { n: usize, r: usize },
    #[error("hypergraph was not built by `represent`")]
    NotRepresentation,
    #[error("exponent pattern is identically zero")]
    AllZeroPattern,
    #[error("{0:?} is not a subset of the base edge")]
    InvalidSubset(Vec<usize>),
    #[error("invalid vertex {vertex}: {reason}")]
    InvalidVertex { vertex: usize, reason: &'static str },
    #[error("function for ({edge}, copy {copy}) exceeds its cap at entry {index}")]
    CapViolated { edge: usize, copy: usize, index: usize },
    #[error("generator produced an empty set")]
    EmptySetGenerated,
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
