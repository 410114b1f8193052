use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order exceeds the configured bound of {bound}")]
    OrderBoundExceeded { bound: usize },

    #[error("permutation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("coset enumeration exceeded {limit} cosets (group infinite or too large)")]
    EnumerationBudgetExceeded { limit: usize },

    #[error("unknown group name `{0}`")]
    UnknownName(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{t} is not coprime to the conductor {conductor}")]
    NotCoprime { t: i64, conductor: u32 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("homomorphism is not injective")]
    NotInjective,

    #[error("map is not a group homomorphism")]
    NotHomomorphism,

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("embedding is not of index two: |K| = {overgroup}, |H| = {subgroup}")]
    NotIndexTwo { overgroup: usize, subgroup: usize },

    #[error("no Schur index data for group {group} (orbit {orbit})")]
    UnknownSchurIndex { group: String, orbit: String },

    #[error("data conflict: {0}")]
    DataConflict(String),

    #[error("induced coefficient is not a nonnegative integer: {0}")]
    NonIntegralCoefficient(String),

    #[error("square does not commute: {0}")]
    NonCommutingSquare(String),

    #[error("ladder does not commute: {0}")]
    NonCommutingLadder(String),

    #[error("character table construction failed: {0}")]
    CharacterTable(String),

    #[error("ill-formed abelian group map: {0}")]
    BadMap(String),

    #[error("sequence is not exact: {0}")]
    NotExact(String),
}
