use num_complex::Complex64;
use thiserror::Error;

use crate::map::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HenonError {
    #[error("inverse requires a nonzero Jacobian")]
    DegenerateJacobian,
    #[error("coordinate magnitude exceeded {cap:e} after {steps} steps")]
    Overflow { steps: usize, cap: f64 },
    #[error("no escape radius found below {0:e}")]
    NoAlphaFound(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no iterate entered the escape region within {0} steps")]
    NotInEscapeRegion(usize),
    #[error("point lies on the curve x = p(y) of the degenerate map")]
    OnDegenerateCurve,
    #[error("critical point {0} is not simple")]
    NotSimpleCritical(Complex64),
    #[error("trace left the tube |y - c| < {radius} at {at:?}")]
    LeftTube { at: Point, radius: f64 },
    #[error("Newton iteration failed: {0}")]
    NewtonDivergence(String),
    #[error("leaf parameterization failed near {0:?}")]
    LeafParameterizationFailed(Point),
    #[error("continuation failed: {0}")]
    ContinuationFailure(String),
    #[error("no iterate within {0} steps lies in a primary tube")]
    NotClassified(i32),
    #[error("point is outside the (u, v) chart domain: {0}")]
    OutsideVPrime(String),
    #[error("graph transform did not settle: {0}")]
    GraphTransformDiverged(String),
    #[error("gradient vanishes on the loop near parameter {0}")]
    GradientVanishesOnLoop(Complex64),
}

pub type Result<T> = std::result::Result<T, HenonError>;
