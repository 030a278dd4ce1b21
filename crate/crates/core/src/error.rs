use thiserror::Error;

/// Errors produced by field construction, ideal arithmetic, enumeration and
/// the numerical verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("defining polynomial must be monic with integer coefficients")]
    NonMonicPolynomial,
    #[error("defining polynomial is reducible over the rationals: {0}")]
    ReduciblePolynomial(String),
    #[error("supplied basis matrix is singular")]
    SingularBasis,
    #[error("supplied basis is not closed under multiplication (not an order)")]
    BasisNotClosed,
    #[error("supplied basis does not contain 1")]
    BasisMissingOne,
    #[error("division by zero field element")]
    ZeroInversion,
    #[error("all ideal generators are zero")]
    AllGeneratorsZero,
    #[error("operation requires a power-basis (monogenic) field presentation")]
    NonMonogenic,
    #[error("precision cap of {cap_bits} bits exceeded while refining an enclosure")]
    PrecisionExceeded { cap_bits: u32 },
    #[error("enumeration node budget of {budget} exceeded")]
    NodeBudgetExceeded { budget: u64 },
    #[error("result cap of {cap} exceeded during enumeration")]
    ResultCapExceeded { cap: usize },
    #[error("replete ideal or region has a non-positive archimedean component")]
    NonPositiveBound,
    #[error("archimedean data has {got} components but the field has {expected} places")]
    PlaceCountMismatch { got: usize, expected: usize },
    #[error("region shape at place {index} does not match the place type")]
    ShapeMismatch { index: usize },
    #[error("character convention failed quadrature validation: {0}")]
    ConventionValidation(String),
    #[error("truncation tail bound {tail:e} exceeds the requested tolerance {tol:e}")]
    TailBound { tail: f64, tol: f64 },
    #[error("Monte Carlo confidence interval {ci:e} wider than requested tolerance {tol:e}")]
    CiTooWide { ci: f64, tol: f64 },
    #[error("growth quotient sequence is not monotone beyond noise at step {index}")]
    NonMonotoneQuotient { index: usize },
    #[error("need at least {need} usable rows, got {got}")]
    TooFewRows { need: usize, got: usize },
    #[error("could not isolate the roots of the defining polynomial")]
    RootIsolation,
    #[error("tolerance or acceptance check failed")]
    ToleranceFailed,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
