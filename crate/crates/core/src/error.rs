//! Error type for all fallible operations in this crate.
//!
//! Every variant carries the *measured* quantity that triggered it alongside the
//! tolerance it was compared against, so callers (and test logs) can distinguish
//! "barely out of tolerance" from "garbage input" without re-deriving anything.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by validation, decomposition, and metric routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// The matrix is not Hermitian within tolerance.
    #[error("matrix is not Hermitian: ||M - M^H||_F = {residual:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    /// The matrix does not have unit trace within tolerance.
    #[error("trace is not one: tr = {trace_re:.17} + {trace_im:.3e}i, |tr - 1| = {residual:.3e} exceeds {tolerance:.3e}")]
    TraceNotOne {
        trace_re: f64,
        trace_im: f64,
        residual: f64,
        tolerance: f64,
    },

    /// The matrix has an eigenvalue below the positive-semidefiniteness floor.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} is below {floor:.3e}")]
    NotPsd { min_eigenvalue: f64, floor: f64 },

    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {detail}")]
    DimensionMismatch { detail: String },

    /// A matrix expected to be unitary is not, within tolerance.
    #[error("matrix is not unitary: ||V^H V - I||_F = {residual:.3e} exceeds {tolerance:.3e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    /// A spectrum required to be nondegenerate has a gap below tolerance.
    #[error("degenerate spectrum: min eigenvalue gap {min_gap:.3e} is below {tolerance:.3e}")]
    DegenerateSpectrum { min_gap: f64, tolerance: f64 },

    /// Eigenbranches of two neighboring spectra cannot be paired with a dominant overlap.
    #[error("ambiguous eigenbranch matching: weakest chosen overlap {min_overlap:.3e} is below {threshold:.3e}")]
    AmbiguousBranchMatching { min_overlap: f64, threshold: f64 },

    /// A matrix required to be invertible has a singular value at or below tolerance.
    #[error("singular matrix: min singular value {sigma_min:.3e} is at or below {tolerance:.3e}")]
    SingularMatrix { sigma_min: f64, tolerance: f64 },

    /// A finite-difference step is too coarse for the requested accuracy.
    #[error("step too large: estimated truncation error {estimated_error:.3e} exceeds budget {budget:.3e}")]
    StepTooLarge { estimated_error: f64, budget: f64 },

    /// A Bloch radius is outside the domain of the requested quantity.
    #[error("radius out of domain: r = {r} ({detail})")]
    RadiusOutOfDomain { r: f64, detail: String },

    /// A scalar argument is outside the domain of the requested function.
    #[error("domain error: {detail}")]
    Domain { detail: String },

    /// A Kraus family does not resolve the identity within tolerance.
    #[error("Kraus family is not trace-preserving: ||sum K^H K - I||_F = {residual:.3e} exceeds {tolerance:.3e}")]
    KrausIncomplete { residual: f64, tolerance: f64 },

    /// A serialized matrix or configuration could not be parsed.
    #[error("parse error: {detail}")]
    Parse { detail: String },

    /// An internal numerical routine failed its own postcondition.
    #[error("numerical failure: {detail}")]
    NumericalFailure { detail: String },
}

impl Error {
    /// Convenience constructor for shape errors.
    pub fn dims(detail: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            detail: detail.into(),
        }
    }

    /// Convenience constructor for domain errors.
    pub fn domain(detail: impl Into<String>) -> Self {
        Error::Domain {
            detail: detail.into(),
        }
    }
}
