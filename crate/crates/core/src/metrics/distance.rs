//! Finite distances: interferometric, fidelity-based, and their identities.
//!
//! ## Cancellation-free assembly
//!
//! The headline formulas
//! \(d^2 = 2 - 2\sum_k \sqrt{p_k p'_k}\,|\langle n_k|n'_k\rangle|\) and
//! \(D^2 = 2 - 2F\) lose ~8 significant digits when evaluated literally at
//! separations of order \(10^{-4}\) — exactly the regime the
//! finite-difference oracles probe. Both are therefore assembled from
//! *differences* instead, algebraically identical to the cited forms:
//!
//! * interferometric:
//!   \(d^2 = \sum_k \bigl[(p'_k - p_k)^2/(\sqrt{p_k}+\sqrt{p'_k})^2
//!     + 2\sqrt{p_k p'_k}\,q_k\bigr]\) with
//!   \(q_k = 1 - |\langle n_k|n'_k\rangle| = \tfrac12\|\,|n'_k\rangle e^{-i\chi_k} - |n_k\rangle\|^2\),
//!   \(\chi_k = \arg\langle n_k|n'_k\rangle\) — every term is a square of a
//!   directly computed difference, so the result keeps full relative accuracy
//!   at any separation (and is manifestly nonnegative);
//! * Bures, qubit case: with Bloch vectors \(\vec a, \vec b\) and
//!   \(u = 1 - a^2\), \(v = 1 - b^2\),
//!   \(1 - F^2 = \tfrac14\bigl[(u - v)^2/(\sqrt u + \sqrt v)^2 + \|\vec a - \vec b\|^2\bigr]\),
//!   then \(D^2 = 2(1 - F^2)/(1 + F)\); the difference \(u - v = b^2 - a^2\)
//!   is accumulated as \(\sum_i (b_i - a_i)(b_i + a_i)\).
//!
//! For dimensions above 2 the fidelity goes through the positive square root
//! (`tr sqrt(sqrt(a) b sqrt(a))`), an *independent* numerical route from the
//! overlap-matrix trace norm used by the generalized interferometric
//! distance — their agreement is a genuine cross-check, not a tautology.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{psd_sqrt, trace_norm};
use crate::metrics::{match_branches, require_unambiguous};
use crate::states::{spectral, DensityOperator};
use crate::tol;

fn require_same_dim(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dims(format!(
            "states must share a dimension, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

fn states_identical(a: &DensityOperator, b: &DensityOperator) -> bool {
    (a.matrix() - b.matrix()).norm()
        <= tol::IDENTICAL_STATE_REL * a.matrix().norm().max(1.0)
}

/// Squared interferometric distance
/// `d^2 = 2 - 2 sum_k sqrt(p_k p'_k) |<n_k|n'_k>|` with eigenbranches of `b`
/// matched to those of `a` by greedy |overlap| assignment.
///
/// Defined for nondegenerate spectra (the per-branch construction needs
/// unambiguous branch labels); `degeneracy_tol` is the spectral-gap threshold.
/// Identical inputs return exactly 0 without branch matching — the distance
/// of a state to itself is 0 by definition, irrespective of degeneracy.
///
/// The result lies in `[0, 4]`: the probability term alone reaches 2 for
/// orthogonal-support spectra, and the overlap deficit can contribute the
/// other 2.
pub fn sjoqvist_distance_sq(
    a: &DensityOperator,
    b: &DensityOperator,
    degeneracy_tol: f64,
) -> Result<f64> {
    require_same_dim(a, b)?;
    if states_identical(a, b) {
        return Ok(0.0);
    }
    let sa = spectral(a, degeneracy_tol)?;
    if !sa.nondegenerate {
        return Err(Error::DegenerateSpectrum {
            min_gap: sa.min_gap,
            tolerance: degeneracy_tol,
        });
    }
    let sb = spectral(b, degeneracy_tol)?;
    if !sb.nondegenerate {
        return Err(Error::DegenerateSpectrum {
            min_gap: sb.min_gap,
            tolerance: degeneracy_tol,
        });
    }
    let n = a.dim();
    let overlaps = nalgebra::DMatrix::from_fn(n, n, |k, l| {
        sa.vectors.column(k).dotc(&sb.vectors.column(l)).norm()
    });
    let (perm, weakest) = match_branches(&overlaps);
    require_unambiguous(weakest)?;

    let mut d2 = 0.0;
    for (k, &pk) in perm.iter().enumerate() {
        let p = sa.probabilities[k];
        let q = sb.probabilities[pk];
        let dp = q - p;
        if dp != 0.0 {
            let den = p.sqrt() + q.sqrt();
            d2 += (dp / den) * (dp / den);
        }
        let w = (p * q).sqrt();
        if w > 0.0 {
            let ak = sa.vectors.column(k);
            let bk = sb.vectors.column(pk);
            let z = ak.dotc(&bk);
            let phase = if z.norm() > 0.0 {
                z.conj() / Complex64::from(z.norm())
            } else {
                Complex64::from(1.0)
            };
            // q_k = ||b e^{-i chi} - a||^2 / 2 = 1 - |<a|b>|, computed without
            // cancellation because the difference vector is formed directly.
            let mut diff_sq = 0.0;
            for i in 0..n {
                diff_sq += (bk[i] * phase - ak[i]).norm_sqr();
            }
            d2 += 2.0 * w * (0.5 * diff_sq);
        }
    }
    Ok(d2)
}

/// Squared generalized interferometric distance
/// `2 - 2 ||S||_1` with `S_{kl} = sqrt(p_k p'_l) <n_k|n'_l>`.
///
/// Minimizing the interferometric construction over the full ensemble freedom
/// replaces the per-branch overlap sum by the trace norm of the overlap
/// matrix, which equals the Uhlmann fidelity — so this coincides with the
/// squared Bures distance and needs no nondegeneracy assumption.
pub fn generalized_sjoqvist_distance_sq(
    a: &DensityOperator,
    b: &DensityOperator,
) -> Result<f64> {
    require_same_dim(a, b)?;
    let sa = spectral(a, tol::DEGENERACY_REL_DEFAULT)?;
    let sb = spectral(b, tol::DEGENERACY_REL_DEFAULT)?;
    let s = crate::states::overlap_matrix(&sa, &sb)?;
    // ||S||_1 can exceed 1 by roundoff for (near-)identical states; a
    // squared distance is nonnegative by definition, so clamp the artifact.
    Ok((2.0 - 2.0 * trace_norm(&s)).max(0.0))
}

/// Uhlmann fidelity `F = tr sqrt(sqrt(a) b sqrt(a))`, in `[0, 1]`.
///
/// Computed as the trace norm `||sqrt(a) sqrt(b)||_1`, which equals the
/// defining expression (the singular values of `sqrt(a) sqrt(b)` are the
/// square roots of the eigenvalues of the sandwiched product) but replaces
/// an eigendecomposition of a possibly near-singular product by an SVD of
/// two well-conditioned factors.
pub fn fidelity(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    require_same_dim(a, b)?;
    let ra = psd_sqrt(a.matrix())?;
    let rb = psd_sqrt(b.matrix())?;
    let f = trace_norm(&(&ra * &rb));
    Ok(f.clamp(0.0, 1.0))
}

fn bloch_vector(rho: &DensityOperator) -> [f64; 3] {
    let m = rho.matrix();
    [
        2.0 * m[(1, 0)].re,
        2.0 * m[(1, 0)].im,
        m[(0, 0)].re - m[(1, 1)].re,
    ]
}

/// `1 - F^2` for a qubit pair, assembled cancellation-free (see module docs).
fn one_minus_f2_qubit(a: &DensityOperator, b: &DensityOperator) -> f64 {
    let av = bloch_vector(a);
    let bv = bloch_vector(b);
    let a2: f64 = av.iter().map(|x| x * x).sum();
    let b2: f64 = bv.iter().map(|x| x * x).sum();
    let u = (1.0 - a2).max(0.0);
    let v = (1.0 - b2).max(0.0);
    // u - v = b^2 - a^2, accumulated from entry differences.
    let u_minus_v: f64 = av
        .iter()
        .zip(&bv)
        .map(|(x, y)| (y - x) * (y + x))
        .sum();
    let radial = if u_minus_v == 0.0 {
        0.0
    } else {
        let den = u.sqrt() + v.sqrt();
        (u_minus_v / den) * (u_minus_v / den)
    };
    let tangential: f64 = av
        .iter()
        .zip(&bv)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    0.25 * (radial + tangential)
}

/// Squared Bures distance `D^2 = 2 - 2F`, in `[0, 2]` for unit-trace states.
///
/// For qubits this uses the closed Bloch-vector form of the fidelity in a
/// cancellation-free arrangement, keeping full relative accuracy at
/// infinitesimal separations (required by the finite-difference oracles);
/// higher dimensions go through [`fidelity`].
pub fn bures_distance_sq(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    require_same_dim(a, b)?;
    if a.dim() == 2 {
        let s = one_minus_f2_qubit(a, b); // = 1 - F^2
        let f = (1.0 - s).max(0.0).sqrt();
        Ok(2.0 * s / (1.0 + f))
    } else {
        Ok(2.0 - 2.0 * fidelity(a, b)?)
    }
}

/// Bures angle `D_A = arccos F`, in `[0, pi/2]`.
pub fn bures_angle(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    Ok(fidelity(a, b)?.clamp(0.0, 1.0).acos())
}
