use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generator `{name}`: degree and truncation must be at least 1")]
    InvalidGenerator { name: String },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("ring has {0} monomials below the degree cap, which exceeds the supported size")]
    RingTooLarge(u128),

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("monomial has {got} exponents but the ring has {expected} generators")]
    MonomialArity { expected: usize, got: usize },

    #[error("polynomial is not a unit (constant term is 0)")]
    NotAUnit,

    #[error("cannot embed at slot {slot}: {reason}")]
    IncompatibleEmbedding { slot: usize, reason: String },

    #[error("invalid manifold descriptor: {0}")]
    InvalidManifold(String),

    #[error("parse error at byte {position} (`{token}`): {message}")]
    Parse {
        position: usize,
        token: String,
        message: String,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid profile bits: {0}")]
    InvalidProfile(String),

    #[error("partition weight {weight} does not match manifold dimension {dim}")]
    WeightMismatch { weight: u32, dim: u32 },

    #[error("Milnor manifold parameters must satisfy m <= n, got ({m}, {n})")]
    NotNormalized { m: u32, n: u32 },

    #[error("unknown family tag `{0}`")]
    UnknownFamily(String),
}
