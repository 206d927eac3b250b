use thiserror::Error;

use crate::dsl::Diagnostic;

/// Errors raised by the algebra, bracket and gauge-system layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomials belong to different charts")]
    ChartMismatch,
    #[error("variable `{var}` is not allowed at the {level} level")]
    LevelMismatch { var: String, level: &'static str },
    #[error("polynomial is not homogeneous in {0}")]
    Inhomogeneous(&'static str),
    #[error("grading {grading} is not defined for variable `{var}`")]
    GradingNotApplicable { grading: &'static str, var: String },
    #[error("parity mismatch substituting for `{0}`")]
    ParityMismatch(String),
    #[error("multivector contains ghost variable `{0}`")]
    GhostInMultivector(String),
    #[error("derived bracket needs at least one argument")]
    EmptyArguments,
    #[error("no solution at bound {bound}; unsolved residual: {residual}")]
    NoSolutionAtBound { bound: u32, residual: String },
    #[error("element is not closed: {0}")]
    NotClosed(String),
    #[error("degree growth leaves the truncation at monomial {0}")]
    UnboundedDegree(String),
    #[error("Lie derivative and Cartan formula disagree: {0}")]
    CartanMismatch(String),
    #[error("invalid gauge system: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Parse(Diagnostic),
}

pub type Result<T> = std::result::Result<T, Error>;
