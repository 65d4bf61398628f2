use thiserror::Error;

use crate::operators::Alphabet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("word is not admissible: step {step} ({letter}) fails")]
    NotAdmissible { step: usize, letter: String },
    #[error("numerator is not divisible by x{var}^{exp}")]
    NotDivisible { var: usize, exp: u32 },
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("denominator factor is not a linear form 1 - sum x_i: {0}")]
    NonLinearFactor(String),
    #[error("operation not supported for poset {0}")]
    Unsupported(Alphabet),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("oracle mismatch at word `{word}`: expected {expected}, found {found}")]
    OracleMismatch {
        word: String,
        expected: String,
        found: String,
    },
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
}
