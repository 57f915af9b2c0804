use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("edge ({0}, {1}) has non-positive multiplicity {2}")]
    InvalidMultiplicity(usize, usize, i64),
    #[error("host is not connected")]
    Disconnected,
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
    #[error("expected a vector of length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("negative chip count {value} at vertex {vertex}")]
    NegativeChips { vertex: usize, value: i64 },
    #[error("instance generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("vertex {0} is not active")]
    IllegalFiring(usize),
    #[error("scripted firing {index} of vertex {vertex} is illegal")]
    IllegalScript { index: usize, vertex: usize },
    #[error("operation requires an Eulerian host")]
    UnsupportedHost,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(&'static str),
    #[error("instance too large: {0}")]
    TooLarge(&'static str),
    #[error("feedback arc set of size {size} is not minimum (minimum is {minimum})")]
    NotMinimal { size: i64, minimum: i64 },
    #[error("no source vertex free of feedback out-arcs")]
    NoSource,
    #[error("divisor value {value} at vertex {vertex} exceeds d(v) - 1 = {limit}")]
    OutOfRange { vertex: usize, value: i64, limit: i64 },
    #[error("divisors live on different hosts")]
    HostMismatch,
    #[error("legal games disagree: {0}")]
    AbelianViolation(&'static str),
    #[error("rank {rank} does not equal dist {dist} - 1")]
    DualityViolation { rank: i64, dist: i64 },
    #[error("state space exceeds the limit of {0} configurations")]
    StateSpaceTooLarge(usize),
    #[error("equivalence search box exceeds the limit of {0} points")]
    SearchBoxExceeded(u128),
    #[error("feedback arc set is invalid: {0}")]
    InvalidFeedbackSet(&'static str),
    #[error("orientation is invalid: {0}")]
    InvalidOrientation(&'static str),
    #[error("witness order {0:?} does not certify acyclicity")]
    BadCertificate(Vec<usize>),
}
