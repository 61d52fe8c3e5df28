use thiserror::Error;

use crate::witness::CaseTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element is not self-adjoint (‖a − a*‖ = {residual:e}, allowed {allowed:e})")]
    NotSelfAdjoint { residual: f64, allowed: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("operands live in different algebras")]
    AlgebraMismatch,

    #[error("operands do not share a Jordan backend")]
    BackendMismatch,

    #[error("algebra is not associative; use the Jordan layer")]
    NotAssociative,

    #[error("invalid element data: {0}")]
    InvalidElement(String),

    #[error("invalid algebra descriptor: {0}")]
    InvalidAlgebra(String),

    #[error("element is not a projection (‖a² − a‖ = {0:e})")]
    NotProjection(f64),

    #[error("projection has rank zero")]
    ZeroProjection,

    #[error("element is not positive (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("element is not a positive norm-one element")]
    NotPositiveNormOne,

    #[error("eigenvalue {value} lies outside the function domain [{lo}, {hi}]")]
    DomainViolation { value: f64, lo: f64, hi: f64 },

    #[error("parameter must be positive, got {0}")]
    NonpositiveParameter(f64),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("target is not in the positive unit sphere: {0}")]
    NotInPositiveSphere(String),

    #[error("grid too fine: n = {n}, k = {k} (caps n ≤ {max_n}, 1 ≤ k ≤ {max_k})")]
    GridTooFine {
        n: usize,
        k: usize,
        max_n: usize,
        max_k: usize,
    },

    #[error("no sampling family available: {0}")]
    NoFamilyAvailable(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("no verified witness found (tried {tried:?})")]
    Inconclusive { tried: Vec<CaseTag> },
}
