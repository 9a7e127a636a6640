use thiserror::Error;

pub type Result<T> = std::result::Result<T, GaError>;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("dimension {n} exceeds the supported cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("element has zero norm within tolerance")]
    NullNorm,
    #[error("versor is not invertible")]
    NonInvertible,
    #[error("degenerate eigenvalues: {0}")]
    DegenerateRoots(String),
    #[error("no principal logarithm: the rotation axis is undefined")]
    AxisUndefined,
    #[error("linear system is singular or ill-conditioned")]
    SingularSystem,
    #[error("root finding did not converge")]
    NoConvergence,
    #[error("expected a pure grade-{expected} element")]
    NotAGrade { expected: usize },
    #[error("element does not square to a scalar")]
    NotSimple,
    #[error("not a versor: {0}")]
    NotAVersor(String),
    #[error("algebra has no null generator")]
    NoNullGenerator,
    #[error("algebra has no positive/negative generator pair for a Witt basis")]
    MissingWittPair,
    #[error("invalid blade order: {0}")]
    InvalidBladeOrder(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid JSON input: {0}")]
    Json(String),
}

impl GaError {
    /// Stable machine-readable code, used by the CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            GaError::AlgebraMismatch => "algebra_mismatch",
            GaError::DimensionCap { .. } => "dimension_cap",
            GaError::NullNorm => "null_norm",
            GaError::NonInvertible => "non_invertible",
            GaError::DegenerateRoots(_) => "degenerate_roots",
            GaError::AxisUndefined => "axis_undefined",
            GaError::SingularSystem => "singular_system",
            GaError::NoConvergence => "no_convergence",
            GaError::NotAGrade { .. } => "not_a_grade",
            GaError::NotSimple => "not_simple",
            GaError::NotAVersor(_) => "not_a_versor",
            GaError::NoNullGenerator => "no_null_generator",
            GaError::MissingWittPair => "missing_witt_pair",
            GaError::InvalidBladeOrder(_) => "invalid_blade_order",
            GaError::InvalidArgument(_) => "invalid_argument",
            GaError::Json(_) => "json",
        }
    }

    /// True for errors that arise from the mathematical domain of an
    /// operation rather than from malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            GaError::NullNorm
                | GaError::NonInvertible
                | GaError::DegenerateRoots(_)
                | GaError::AxisUndefined
                | GaError::SingularSystem
                | GaError::NoConvergence
                | GaError::NotSimple
        )
    }
}
