use thiserror::Error;

use crate::fan::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid stacky fan: {}", join(.0))]
    InvalidFan(Vec<Violation>),

    #[error("dimension mismatch: {what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("not supported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Picard group has free rank {0}; a degree needs free rank 1")]
    NoDegree(usize),

    #[error("cohomology enumeration could not be certified: {0}")]
    Uncertified(String),

    #[error("invalid morphism data: {0}")]
    InvalidMorphism(String),

    #[error("pool of {0} bundles exceeds the subset-scan limit of 12")]
    PoolTooLarge(usize),

    #[error("rank formula not applicable: {0}")]
    RankFormula(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
