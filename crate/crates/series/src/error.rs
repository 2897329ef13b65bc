use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders or variables differ: {0}")]
    OrderMismatch(String),
    #[error("constant term is not 1")]
    NotUnitSeries,
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantInner,
    #[error("linear coefficient is not invertible in the coefficient ring")]
    NonInvertibleLinearTerm,
    #[error("critical point is degenerate or not critical: {0}")]
    DegenerateCriticalPoint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}
