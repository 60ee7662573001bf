use thiserror::Error;

pub use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("signature mismatch: ({0}, {1}) vs ({2}, {3})")]
    SignatureMismatch(usize, usize, usize, usize),
    #[error("odd dimension n = {0} is not supported here")]
    OddDimension(usize),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("vector is null: |η(v,v)| = {0:e}")]
    NullVector(f64),
    #[error("generator is not a unit vector: η(v,v) = {0}")]
    NotUnit(f64),
    #[error("expected a grade-1 element")]
    NotAVector,
    #[error("adjoint action leaves the grade-1 subspace (residual {0:e})")]
    LeavesVectorSpace(f64),
    #[error("element is not idempotent: |p² - p| = {0:e}")]
    NotIdempotent(f64),
    #[error("element is not Hermitian: |p* - p| = {0:e}")]
    NotHermitian(f64),
    #[error("degenerate metric: |det g| = {0:e}")]
    DegenerateMetric(f64),
    #[error("metric eigenvalue signs ({found_plus}, {found_minus}) do not match declared signature ({m}, {k})")]
    MetricSignature {
        m: usize,
        k: usize,
        found_plus: usize,
        found_minus: usize,
    },
    #[error("singular tetrad")]
    SingularTetrad,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("torsion is not antisymmetric (defect {0:e})")]
    TorsionNotAntisymmetric(f64),
    #[error("precondition violated: connection residual {residual:e} exceeds tolerance {tol:e}")]
    PreconditionViolated { residual: f64, tol: f64 },
    #[error("metric is not diagonal near the evaluation point")]
    NotDiagonal,
    #[error(transparent)]
    Parse(#[from] ParseError),
}
