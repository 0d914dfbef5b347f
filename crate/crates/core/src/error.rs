use thiserror::Error;

/// Errors surfaced by the exact kernel.
///
/// Division by the zero scalar is a distinct case from a rational function
/// having a pole at a requested point: the former is a malformed expression,
/// the latter is a legitimate limit query with a negative answer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at {point}")]
    PoleAtPoint { point: String },
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("variable mismatch: operator on {expected} applied to {found}")]
    VariableMismatch { expected: String, found: String },
    #[error("operator outside the S-Heun span; first offending coefficient at {witness}")]
    SpanResidual { witness: String },
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("parameter pole: {0}")]
    ParameterPole(String),
    #[error("degenerate index n = {0} (vanishing denominator)")]
    DegenerateIndex(i64),
    #[error("operator is not in Heun shape: unexpected word {word}")]
    NotHeunShape { word: i64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
