//! Parallel-transport gauge diagnostics along curves of density operators.
//!
//! The line-element machinery assumes that branch-matched, Pancharatnam-
//! rephased eigenvectors approximate parallel-transported sections
//! (\(\operatorname{Im}\langle n_k|\dot n_k\rangle = 0\)). This module
//! quantifies how well a discretized curve supports that assumption:
//!
//! * **per-branch residual**: for the matched overlap
//!   \(z_k = \langle n_k(t)|n_k(t+dt)\rangle\), the two natural transport
//!   functionals \(\operatorname{Im} z_k\) and \(\arg z_k\) agree to
//!   \(O(dt^3)\) on a smooth gauge but differ at \(O(1)\) across a gauge
//!   discontinuity. The reported residual
//!   \(|\operatorname{Im} z_k - \arg z_k|/dt\) is therefore \(O(dt^2)\) for
//!   a transport-consistent discretization and blows up exactly when the
//!   single-step Pancharatnam correction stops being trustworthy;
//! * **mixed residual**: with \(V_0\) the eigenvector frame at \(t\) and
//!   \(V_1'\) the matched frame at \(t+dt\) rephased column-by-column to
//!   real-positive overlap, \(|\operatorname{Im}\operatorname{tr}[\rho(t)
//!   (V_1' - V_0)V_0^\dagger]|/dt\) measures the state-weighted transport
//!   defect of the discrete generator. The rephasing makes each diagonal
//!   contribution real in exact arithmetic, so this residual isolates
//!   floating-point phase noise (~1e-11 at `dt = 1e-5`); the *real* part of
//!   the same trace is an \(O(dt)\) normalization artifact and is
//!   deliberately excluded.
//!
//! Both residuals vanish identically for a constant curve and for curves
//! whose eigenframes are constant (e.g. commuting families), and stay far
//! below 1e-8 at `dt = 1e-5` on smooth thermal families.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metrics::{match_branches, require_unambiguous};
use crate::states::{spectral, DensityOperator};

/// Transport-consistency residuals for one discretization step.
#[derive(Debug, Clone)]
pub struct TransportReport {
    /// Parameter step the residuals refer to.
    pub step: f64,
    /// `|Im z_k - arg z_k| / dt` per branch, in the branch order of the
    /// state at `t` (descending probability).
    pub per_branch: Vec<f64>,
    /// Largest per-branch residual.
    pub max_per_branch: f64,
    /// `|Im tr[rho(t) (V1' - V0) V0^dag]| / dt` with `V1'` Pancharatnam-
    /// rephased against `V0`.
    pub mixed: f64,
}

/// Computes the transport residuals of `curve` over `[t, t + dt]`.
///
/// Requires nondegenerate spectra at both ends (branches must be
/// identifiable); `degeneracy_tol` is the spectral-gap threshold. The
/// residuals scale as `O(dt^2)` (per-branch) and rounding-level (mixed) for
/// smooth curves — growth with `dt` flags a step too coarse for single-step
/// phase alignment.
pub fn parallel_transport_residuals<C>(
    curve: C,
    t: f64,
    dt: f64,
    degeneracy_tol: f64,
) -> Result<TransportReport>
where
    C: Fn(f64) -> Result<DensityOperator>,
{
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!(
            "parameter step must be finite and positive, got {dt}"
        )));
    }
    let rho0 = curve(t)?;
    let rho1 = curve(t + dt)?;
    if rho0.dim() != rho1.dim() {
        return Err(Error::dims(
            "curve must keep a fixed dimension along the interval".to_string(),
        ));
    }
    let decompose = |rho: &DensityOperator| {
        let dec = spectral(rho, degeneracy_tol)?;
        if !dec.nondegenerate {
            return Err(Error::DegenerateSpectrum {
                min_gap: dec.min_gap,
                tolerance: degeneracy_tol,
            });
        }
        Ok(dec)
    };
    let s0 = decompose(&rho0)?;
    let s1 = decompose(&rho1)?;
    let n = s0.dim();
    let overlaps = nalgebra::DMatrix::from_fn(n, n, |a, k| {
        s0.vectors.column(a).dotc(&s1.vectors.column(k)).norm()
    });
    let (perm, weakest) = match_branches(&overlaps);
    require_unambiguous(weakest)?;

    let mut per_branch = Vec::with_capacity(n);
    let mut aligned = s0.vectors.clone();
    for (a, &pa) in perm.iter().enumerate() {
        let v1 = s1.vectors.column(pa).clone_owned();
        let z = s0.vectors.column(a).dotc(&v1);
        per_branch.push((z.im - z.arg()).abs() / dt);
        let phase = if z.norm() > 0.0 {
            z.conj() / Complex64::from(z.norm())
        } else {
            Complex64::from(1.0)
        };
        aligned.set_column(a, &(v1 * phase));
    }
    let max_per_branch = per_branch.iter().copied().fold(0.0, f64::max);
    let generator = (&aligned - &s0.vectors) * s0.vectors.adjoint();
    let mixed = (rho0.matrix() * generator).trace().im.abs() / dt;
    Ok(TransportReport {
        step: dt,
        per_branch,
        max_per_branch,
        mixed,
    })
}
