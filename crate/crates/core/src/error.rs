use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(i64),

    #[error("character index j must be nonzero")]
    ZeroCharacter,

    #[error("degenerate character j={j}: j*m_{branch} is divisible by n")]
    DegenerateCharacter { j: u32, branch: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid family data: {0}")]
    InvalidFamily(String),

    #[error("character j={j} is reducible; the signature criterion does not apply")]
    PreconditionIrreducibility { j: u32 },

    #[error("{value} is not a unit modulo {n}")]
    NoUnit { value: u32, n: u32 },

    #[error("n={0} is not coprime to 6")]
    NotCoprimeToSix(u32),

    #[error("family is not admissible: {0}")]
    Inadmissible(String),

    #[error("local eigenvalues at 0 and infinity overlap; the rigid triple would be reducible")]
    ReducibleParameters,

    #[error("invariant sesquilinear forms span a space of dimension {dimension}, expected 1")]
    ReducibleNoUniqueForm { dimension: usize },

    #[error("invariant Hermitian form is degenerate")]
    DegenerateForm,

    #[error("matrix is singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
