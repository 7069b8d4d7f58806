use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("index {0} out of range 1..=4")]
    IndexOutOfRange(usize),
    #[error("frame is not orthogonal (Gram defect {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("frame is not positively oriented (determinant {det})")]
    NotPositive { det: f64 },
    #[error("bivector matrix is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },
    #[error("first Bianchi identity violated (defect {defect:e})")]
    Bianchi { defect: f64 },
    #[error("non-finite entry")]
    NonFinite,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuaternionError {
    #[error("quaternion is not a unit quaternion (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("quaternion is not pure (real part {real})")]
    NotPure { real: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("{what} must sum to zero (sum {sum:e})")]
    TraceConstraint { what: &'static str, sum: f64 },
    #[error("λ > 0 required (got λ = {0})")]
    LambdaPositive(f64),
    #[error("λ > μ ≥ 0 required (got λ = {lambda}, μ = {mu}); use thm3 when λ = μ")]
    LambdaMuOrder { lambda: f64, mu: f64 },
    #[error("parameter {0} is not finite")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("tensor is Einstein (e = 0); no eigenframe of e is distinguished")]
    Einstein,
    #[error("tensor is not weakly Einstein (residual {residual:e})")]
    NotWeaklyEinstein { residual: f64 },
    #[error("μ-system infeasible (residual {residual:e})")]
    Infeasible { residual: f64 },
    #[error("multiplicity 31 requires s = 0, got s = {s}")]
    NonzeroScalarForTriple { s: f64 },
    #[error("no adapted frame within tolerance (off-diagonal {off_diagonal:e})")]
    FrameSearch { off_diagonal: f64 },
    #[error("μ must be trace-free (sum {sum:e})")]
    TraceFree { sum: f64 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format {0:?}")]
    Format(String),
    #[error("{0}")]
    Malformed(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
