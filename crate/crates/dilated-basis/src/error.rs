//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Root iteration (Aberth plus companion-matrix fallback) failed to converge.
    #[error("root finding did not converge after {attempts} attempts (degree {degree})")]
    NonConvergence { degree: usize, attempts: usize },

    /// Input violates a structural precondition (zero constant/leading term, bad degree, …).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A root classification was paired with a polynomial it does not describe.
    #[error("classification inconsistent with polynomial: {0}")]
    InconsistentClassification(String),

    /// Power-series inversion requested for a factor with roots inside the closed unit disk.
    #[error("polynomial is not outer: root at {root} has modulus {modulus} <= 1")]
    NotOuter { root: String, modulus: f64 },

    /// Requested section or box exceeds the configured size limit.
    #[error("size limit exceeded: requested {requested}, maximum {maximum}")]
    SizeLimit { requested: usize, maximum: usize },

    /// Incompleteness witness requested but no root lies inside the unit disk.
    #[error("no root inside the open unit disk; the system has no reproducing-kernel witness")]
    NoInnerRoot,

    /// Constant term vanishes, so 1/A has no Taylor expansion at the origin.
    #[error("constant term is zero; reciprocal power series undefined")]
    ZeroConstantTerm,

    /// Norm sequence plateaus; no growth exponent exists.
    #[error("norm sequence is bounded (ratio {ratio:.3e} over the upper half); no growth exponent")]
    BoundedSequence { ratio: f64 },

    /// Weight-profile check called on a weight that was not built from the model family.
    #[error("wrong weight kind: {0}")]
    WrongWeightKind(String),

    /// Numerical Gram matrix lost positivity (quadrature-degraded weight).
    #[error("Gram matrix is not positive definite: {0}")]
    GramNotPositive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
