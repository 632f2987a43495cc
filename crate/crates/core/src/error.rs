use thiserror::Error;

/// Errors raised by the numeric kernels.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("matrix is not symmetric (asymmetry {asymmetry:e}, allowed {allowed:e})")]
    NotSymmetric { asymmetry: f64, allowed: f64 },
    #[error("not positive definite (min eig {min_eig})")]
    NotPositiveDefinite { min_eig: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symplectic (residual {residual:e})")]
    NotSymplectic { residual: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("basis is not isotropic (residual {residual:e})")]
    NotIsotropic { residual: f64 },
    #[error("basis is rank deficient (relative singular value {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("planes are not transverse (determinant margin {margin:e})")]
    NotTransverse { margin: f64 },
    #[error("ellipsoid does not live on the expected Lagrangian plane")]
    PlaneMismatch,
    #[error("hypothesis not met: largest symplectic eigenvalue {max_symplectic_eig} exceeds 1")]
    HypothesisNotMet { max_symplectic_eig: f64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("quadrature grid too small: half-width {half_width} < required {required}")]
    GridTooSmall { half_width: f64, required: f64 },
    #[error("sample cloud is empty")]
    EmptyCloud,
    #[error("direction must be nonzero")]
    ZeroDirection,
}

pub type Result<T> = std::result::Result<T, Error>;
