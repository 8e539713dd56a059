use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("both polynomials are constant in the eliminated variable")]
    ConstantInVariable,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("singular point: gradient vanishes")]
    SingularPoint,
    #[error("exceptional point: tangent space contains {0}")]
    ExceptionalPoint(String),
    #[error("point is not on the hypersurface")]
    NotOnHypersurface,
    #[error("frame fields X_{i} and X_{j} are dependent at the point")]
    FrameDegenerate { i: usize, j: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("bisection restart budget exhausted; best imbalance {:.4}", .0.imbalance())]
    BisectionBudget(Box<crate::partition::Bisection>),
    #[error("partition stopped after {} stages: bisection budget exhausted", .partial.stages.len())]
    PartitionBudget {
        partial: Box<crate::partition::PartitionResult>,
        best: Box<crate::partition::Bisection>,
    },
    #[error("no injective projection after {attempts} maps; points {i} and {j} collide")]
    ProjectionCollision { i: usize, j: usize, attempts: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
