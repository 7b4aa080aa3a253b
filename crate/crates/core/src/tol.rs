//! Centralized numerical tolerances.
//!
//! Every tolerance used by this crate lives here, with the reasoning written
//! down next to it. Nothing else in the crate is allowed to invent a magic
//! constant for a comparison; if a routine needs a new threshold it gets a new
//! named constant with a rationale.
//!
//! Two conventions apply throughout:
//!
//! * **Relative** tolerances are scaled by `max(1, ||M||_F)`, so that
//!   unit-scale objects (density operators, unitaries) behave as if the
//!   tolerance were absolute, while large-norm Hamiltonians are not rejected
//!   for honest roundoff.
//! * Thresholds separating "roundoff" from "signal" sit at least two orders
//!   of magnitude above the worst error observed for the underlying primitive
//!   on supported sizes (dim <= 64), so a failure is a genuine contract
//!   violation, not noise.

/// Hermiticity check: `||M - M^H||_F <= HERMITICITY_REL * max(1, ||M||_F)`.
///
/// Dense eigensolvers on dim <= 64 inputs keep symmetrization error below
/// ~1e-14; 1e-12 leaves two orders of margin while still rejecting any matrix
/// whose skew part could visibly perturb eigenvalues.
pub const HERMITICITY_REL: f64 = 1e-12;

/// Unitarity / orthonormality check: `||U^H U - I||_F <= UNITARITY_ABS`.
///
/// Householder-QR and symmetric-eigensolver frames are orthonormal to a few
/// ulps times the dimension (< 1e-13 at dim 64).
pub const UNITARITY_ABS: f64 = 1e-12;

/// Unit-trace check for density operators: `|tr(rho) - 1| <= TRACE_ONE_ABS`.
pub const TRACE_ONE_ABS: f64 = 1e-12;

/// Positive-semidefiniteness floor: eigenvalues in `[PSD_EIGENVALUE_FLOOR, 0)`
/// are treated as roundoff and clamped to zero; anything below is an error.
///
/// Density operators have unit trace, so their eigenvalue roundoff is
/// absolute-scale; -1e-12 is ~1e4 times the observed eigensolver error.
pub const PSD_EIGENVALUE_FLOOR: f64 = -1e-12;

/// Eigendecomposition reconstruction check:
/// `||U diag(w) U^H - M||_F <= RECONSTRUCTION_REL * max(1, ||M||_F)`.
///
/// This is a non-convergence guard, not a precision claim. Raw solves that
/// land above [`JACOBI_REFINE_TRIGGER_REL`] are polished by Jacobi sweeps
/// first, so a residual that still exceeds this threshold means the
/// decomposition genuinely failed rather than merely deflated early.
pub const RECONSTRUCTION_REL: f64 = 1e-9;

/// Reconstruction residual (relative to `max(1, ||M||_F)`) above which the
/// raw symmetric-eigensolver output gets a Jacobi refinement pass.
///
/// Healthy solves reconstruct to a few ulps times the dimension
/// (< 1e-13 at dim 64); the failure mode this addresses — the QL iteration
/// deflating a small-gap eigenvector pair early, leaving the pair mixed at
/// ~1e-7 — shows up near 1e-9. The trigger sits between the two regimes so
/// healthy solves pass through untouched (bit-identical outputs) and only
/// pathological frames pay for refinement.
pub const JACOBI_REFINE_TRIGGER_REL: f64 = 1e-12;

/// Off-diagonal Frobenius mass (relative to `max(1, ||M||_F)`) at which
/// Jacobi refinement stops early.
///
/// One cyclic sweep from a nearly diagonal start reaches the roundoff floor
/// (~dimension times machine epsilon); this target sits just above that
/// floor so refinement exits after the sweep that did the work instead of
/// iterating against roundoff noise.
pub const JACOBI_OFF_DIAGONAL_REL: f64 = 1e-13;

/// Matrix square root postcondition: `||R R - M||_F <= SQRT_RESIDUAL_REL * max(1, ||M||_F)`.
///
/// Squaring doubles the relative error of the factor; like
/// `RECONSTRUCTION_REL` this guards against non-convergence rather than
/// asserting roundoff-level accuracy.
pub const SQRT_RESIDUAL_REL: f64 = 1e-8;

/// Polar decomposition postcondition: `||P U - M||_F <= POLAR_RESIDUAL_REL * max(1, ||M||_F)`.
pub const POLAR_RESIDUAL_REL: f64 = 1e-10;

/// Default spectral-gap threshold below which a spectrum counts as degenerate:
/// `gap <= DEGENERACY_REL_DEFAULT * max(1, ||M||_F)`.
///
/// Interferometric (per-branch) constructions divide by overlaps whose
/// conditioning degrades like 1/gap; at gap ~1e-10 a unit-scale perturbation
/// of 1e-14 already rotates eigenvectors by ~1e-4, the edge of what the
/// finite-difference oracles in this crate tolerate.
pub const DEGENERACY_REL_DEFAULT: f64 = 1e-10;

/// Unitarity tolerance for user-supplied ensemble-mixing matrices.
///
/// Looser than `UNITARITY_ABS` because these matrices are *inputs* (often
/// hand-written or deserialized), not freshly factored frames.
pub const ENSEMBLE_UNITARITY_ABS: f64 = 1e-10;

/// Kraus completeness: `||sum_i K_i^H K_i - I||_F <= KRAUS_COMPLETENESS_ABS`.
pub const KRAUS_COMPLETENESS_ABS: f64 = 1e-10;

/// Minimum acceptable |overlap| for a greedily chosen eigenbranch pairing.
///
/// For a qubit the best match per branch always has |overlap| >= 1/sqrt(2);
/// in higher dimensions a best match below 1/2 means the two frames disagree
/// so strongly that branch labels carry no meaning.
pub const BRANCH_MATCH_MIN_OVERLAP: f64 = 0.5;

/// Line-element step policy: the Richardson estimate of the truncation error
/// must not exceed this fraction of the line element itself.
pub const STEP_ERROR_FRACTION: f64 = 1e-6;

/// Contractivity experiments: a distance increase above this margin counts as
/// a violation. Set 10x above the worst primitive error bound (1e-10) so that
/// accumulated roundoff over a channel application cannot masquerade as a
/// monotonicity violation.
pub const CONTRACTIVITY_MARGIN: f64 = 1e-9;

/// Self-inversiveness residual `|f(1/t) - f(t)/t|` must stay below this for a
/// pass verdict. The identity is exact algebra on O(1) quantities; 1e-12
/// allows only accumulated roundoff.
pub const MC_SELF_INVERSIVE_ABS: f64 = 1e-12;

/// Operator-monotonicity search: `f(B) - f(A)` counts as a violation only if
/// its smallest eigenvalue is below this, separating genuine order reversal
/// from the ~1e-14 noise of two independent eigendecompositions.
pub const OPERATOR_MONOTONE_EIG_FLOOR: f64 = -1e-10;

/// Two states closer than `IDENTICAL_STATE_REL * max(1, ||A||_F)` in Frobenius
/// norm are treated as the same state where a distance is defined by a limit
/// (distance exactly zero). This sits at machine precision: only genuinely
/// identical (bit-equal or equivalently constructed) inputs qualify.
pub const IDENTICAL_STATE_REL: f64 = 1e-14;

/// Invertibility threshold for polar decompositions used in gauge fixing:
/// smallest singular value must exceed this.
pub const POLAR_INVERTIBILITY_DEFAULT: f64 = 1e-12;

/// A 2x2 metric tensor counts as degenerate when its smaller eigenvalue is at
/// or below this fraction of the larger one: the tensor then fails to resolve
/// displacements along the soft direction at double precision, so treating it
/// as rank-deficient is the honest reading. The zero tensor (both eigenvalues
/// zero) is degenerate by this rule.
pub const METRIC_DEGENERACY_REL: f64 = 1e-12;
