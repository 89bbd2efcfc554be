use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("0 is not a positive integer")]
    NonPositive,

    #[error("{0} is not a gapset: {1} splits into two non-gaps")]
    NotAGapset(String, u32),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("the empty gapset is the root and has no parent")]
    NoParent,

    #[error("depth {depth} exceeds the supported maximum {max}")]
    DepthTooLarge { depth: u32, max: u32 },

    #[error("expected depth exactly {expected}, got {depth}")]
    WrongDepth { expected: u32, depth: u32 },

    #[error("genus {genus} is below the required minimum {min}")]
    GenusTooSmall { genus: u32, min: u32 },

    #[error("filtration {0} is not in the image of the requested map")]
    ClassMismatch(String),

    #[error("trimming requires a nonempty third piece")]
    EmptyThirdPiece,

    #[error("invalid enumeration filter: {0}")]
    InvalidFilter(String),

    #[error("max genus {requested} exceeds the enumerator limit {limit}")]
    GenusTooLarge { requested: u32, limit: u32 },

    #[error("counter overflow at genus {0}")]
    CounterOverflow(u32),

    #[error("{name}({n}) is out of range (max {max})")]
    OutOfRange {
        name: &'static str,
        n: u32,
        max: u32,
    },

    #[error("invalid family shape: {0}")]
    InvalidShape(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
