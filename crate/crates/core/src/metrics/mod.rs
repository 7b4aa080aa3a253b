//! Distinguishability metrics between mixed states.
//!
//! Two Riemannian structures are implemented side by side:
//!
//! * the **interferometric metric** (Sjöqvist, Phys. Rev. Research 2, 013344
//!   (2020)): per-eigenbranch phase minimization over the *spectral* ensemble,
//!   defined for nondegenerate spectra;
//! * the **Bures metric** (Bures 1969; Uhlmann 1976; Hübner, Phys. Lett. A
//!   163, 239 (1992)): minimization over the *full* ensemble freedom, which
//!   lands on the Uhlmann fidelity.
//!
//! Both infinitesimal forms split into the same classical Fisher–Rao term
//! plus metric-specific nonclassical terms; the submodules provide finite
//! distances ([`distance`]), midpoint finite-difference line elements
//! ([`line_element`]), closed thermal perturbative forms ([`thermal`]), and
//! parallel-transport gauge diagnostics ([`transport`]).

pub mod distance;
pub mod line_element;
pub mod thermal;
pub mod transport;

pub use distance::{
    bures_angle, bures_distance_sq, fidelity, generalized_sjoqvist_distance_sq,
    sjoqvist_distance_sq,
};
pub use line_element::{bures_line_element, sjoqvist_line_element, LineElement};
pub use thermal::{eigvec_perturbation_check, thermal_nonclassical, HamiltonianPerturbation, PerturbationReport};
pub use transport::{parallel_transport_residuals, TransportReport};

use crate::error::{Error, Result};
use crate::tol;

/// Which of the two metric families an operation should evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Interferometric (per-branch phase minimization).
    Sjoqvist,
    /// Fidelity-induced (full ensemble minimization).
    Bures,
}

/// Greedy eigenbranch assignment on an |overlap| matrix.
///
/// Repeatedly pairs the globally largest remaining |overlap| (ties broken
/// toward the lowest row, then column, index), excluding matched rows and
/// columns. Returns `perm` with `perm[row] = col` and the weakest chosen
/// overlap; callers reject the assignment as ambiguous when that weakest link
/// drops below [`tol::BRANCH_MATCH_MIN_OVERLAP`].
///
/// Rationale: eigenbranches of neighboring states are continuations of each
/// other; for genuinely neighboring spectra the overlap matrix is dominated
/// by one entry per row and greedy assignment recovers the continuation.
pub(crate) fn match_branches(overlap_abs: &nalgebra::DMatrix<f64>) -> (Vec<usize>, f64) {
    let n = overlap_abs.nrows();
    debug_assert_eq!(n, overlap_abs.ncols());
    let mut perm = vec![usize::MAX; n];
    let mut row_done = vec![false; n];
    let mut col_done = vec![false; n];
    let mut weakest = f64::INFINITY;
    for _ in 0..n {
        let mut best = (0usize, 0usize);
        let mut best_val = f64::NEG_INFINITY;
        for i in 0..n {
            if row_done[i] {
                continue;
            }
            for j in 0..n {
                if col_done[j] {
                    continue;
                }
                let v = overlap_abs[(i, j)];
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        perm[best.0] = best.1;
        row_done[best.0] = true;
        col_done[best.1] = true;
        weakest = weakest.min(best_val);
    }
    (perm, weakest)
}

/// Checks a matched assignment against the ambiguity threshold.
pub(crate) fn require_unambiguous(weakest: f64) -> Result<()> {
    if weakest < tol::BRANCH_MATCH_MIN_OVERLAP {
        return Err(Error::AmbiguousBranchMatching {
            min_overlap: weakest,
            threshold: tol::BRANCH_MATCH_MIN_OVERLAP,
        });
    }
    Ok(())
}
