use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("evaluation domain error in `{subexpr}`: {reason}")]
    EvaluationDomain { subexpr: String, reason: String },

    #[error("expected {expected} bindings, got {found}")]
    BindingLength { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix (pivot {pivot:e} below threshold {threshold:e})")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular metric at point {point:?}")]
    SingularMetric { point: Vec<f64> },

    #[error("metric signature ({plus},{minus},{zero}) at point {point:?}, expected ({expected},{expected},0)")]
    SignatureViolation {
        plus: usize,
        minus: usize,
        zero: usize,
        expected: usize,
        point: Vec<f64>,
    },

    #[error("immersion Jacobian has rank {rank} < {expected} at {point:?}")]
    RankDeficientImmersion {
        rank: usize,
        expected: usize,
        point: Vec<f64>,
    },

    #[error("induced metric is degenerate at {point:?}: inertia ({plus},{minus},{zero})")]
    DegenerateInducedMetric {
        plus: usize,
        minus: usize,
        zero: usize,
        point: Vec<f64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
