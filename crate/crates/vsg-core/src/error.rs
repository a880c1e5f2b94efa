//! Error type shared across the library.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("improper transfer function: numerator degree {num} exceeds denominator degree {den}")]
    ImproperTransferFunction { num: usize, den: usize },

    #[error("degenerate order: leading denominator coefficient is zero")]
    DegenerateOrder,

    #[error("root finding did not converge: best scaled residual {best_residual:.3e}")]
    RootFindingFailed { best_residual: f64 },

    #[error("frequency response evaluated at a pole: omega = {omega} rad/s")]
    FrequencyAtPole { omega: f64 },

    #[error(
        "defective pole pair near {lambda}: closed-form step response is singular, \
         integrate the realization instead"
    )]
    DefectivePoles { lambda: Complex64 },

    #[error("ill-posed interconnection: algebraic feedback loop is singular")]
    IllPosedInterconnection,

    #[error("singular linear system in {context}")]
    SingularSystem { context: &'static str },

    #[error("steady-state solve did not converge: residual {residual:.3e} after {iterations} iterations")]
    SteadyStateNoConvergence { residual: f64, iterations: usize },

    #[error("design target unreachable: {0}")]
    TargetUnreachable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid tone set: {0}")]
    InvalidToneSet(String),
}
