//! Infinitesimal line elements along curves of density operators.
//!
//! For a differentiable curve \(\rho(t)\) with nondegenerate spectrum
//! \(\rho = \sum_k p_k |n_k\rangle\langle n_k|\), both metrics split into a
//! *classical* part that only sees the probability flow and a *nonclassical*
//! part driven by eigenvector rotation:
//!
//! * interferometric:
//!   \(ds^2 = \tfrac14\sum_k \frac{\dot p_k^2}{p_k}\,dt^2
//!     + \sum_k p_k \langle \dot n_k|(1 - |n_k\rangle\langle n_k|)|\dot n_k\rangle\,dt^2\);
//! * Bures:
//!   same classical (Fisher–Rao) term, nonclassical weight
//!   \(\tfrac12\sum_{j\ne k}\frac{(p_j-p_k)^2}{p_j+p_k}|\langle n_j|\dot n_k\rangle|^2\,dt^2\).
//!
//! Because \((p_j - p_k)^2/(p_j + p_k) \le p_j + p_k\) with equality only
//! when one probability vanishes, the Bures nonclassical term never exceeds
//! the interferometric one.
//!
//! ## Discretization
//!
//! The derivative quotients are taken centrally over \([t, t+dt]\) with all
//! branch bookkeeping referred to the *midpoint* frame at \(t + dt/2\):
//! endpoint eigenvectors are matched to midpoint branches by largest
//! \(|\text{overlap}|\) and then put in the parallel-transport gauge by the
//! Pancharatnam rule — each matched vector is rephased so its overlap with
//! the midpoint vector is real and positive. Without that gauge fix the
//! arbitrary eigensolver phases contribute \(O(1)\) garbage to the finite
//! difference; with it the quotient agrees with the transport-gauge
//! derivative to \(O(dt^2)\) relative, and every assembled term has an error
//! series even in \(dt\).
//!
//! Both entry points estimate their own truncation error by re-evaluating on
//! the half step *about the same center* (interval \([t+dt/4, t+3dt/4]\))
//! and Richardson-comparing the totals; a step whose estimated error exceeds
//! a fixed fraction of the value is rejected as [`Error::StepTooLarge`]
//! rather than silently returned.
//!
//! The returned quantities are squared lengths for the *given* step, i.e.
//! \(\approx g(t + dt/2)\,dt^2\); divide by \(dt^2\) to read off the metric
//! coefficient.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CVector;
use crate::metrics::{match_branches, require_unambiguous};
use crate::states::{spectral, DensityOperator, SpectralDecomposition};
use crate::tol;

/// Default parameter step for line-element evaluation: small enough that the
/// \(O(dt^2)\)-relative truncation sits near 1e-10, large enough that the
/// \(O(\varepsilon/dt)\)-relative rounding in the difference quotients stays
/// near 1e-11.
pub const DEFAULT_STEP: f64 = 1e-5;

/// A squared line element split into its probability-flow and
/// eigenvector-rotation parts. Both parts are sums of squares, hence
/// nonnegative, and `total` is their exact sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineElement {
    /// Fisher–Rao contribution of the eigenvalue flow, `>= 0`.
    pub classical: f64,
    /// Contribution of eigenvector rotation, `>= 0`.
    pub nonclassical: f64,
    /// `classical + nonclassical`.
    pub total: f64,
}

impl LineElement {
    fn new(classical: f64, nonclassical: f64) -> Self {
        LineElement {
            classical,
            nonclassical,
            total: classical + nonclassical,
        }
    }
}

/// Raw midpoint-gauge estimates for one interval, before step-error control.
/// The classical part is shared; the two metrics differ only in how they
/// weight the symmetrized couplings.
struct RawElement {
    classical: f64,
    sjoqvist_nc: f64,
    bures_nc: f64,
}

impl RawElement {
    fn total(&self, nonclassical: fn(&RawElement) -> f64) -> f64 {
        self.classical + nonclassical(self)
    }
}

/// Match every midpoint branch to an endpoint branch, returning the matched
/// endpoint probabilities and the endpoint eigenvectors rephased so their
/// overlap with the midpoint vector is real positive (Pancharatnam gauge).
fn match_to_midpoint(
    mid: &SpectralDecomposition,
    end: &SpectralDecomposition,
) -> Result<(Vec<f64>, Vec<CVector>)> {
    let n = mid.dim();
    let overlaps = nalgebra::DMatrix::from_fn(n, n, |a, k| {
        mid.vectors.column(a).dotc(&end.vectors.column(k)).norm()
    });
    let (perm, weakest) = match_branches(&overlaps);
    require_unambiguous(weakest)?;
    let mut probs = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for (a, &k) in perm.iter().enumerate() {
        probs.push(end.probabilities[k]);
        let v = end.vectors.column(k).clone_owned();
        let z = mid.vectors.column(a).dotc(&v);
        // |z| >= 0.5 here by the ambiguity gate, so the phase is well defined.
        let phase = z.conj() / Complex64::from(z.norm());
        vectors.push(v * phase);
    }
    Ok((probs, vectors))
}

fn raw_line_element<C>(curve: &C, t: f64, dt: f64, degeneracy_tol: f64) -> Result<RawElement>
where
    C: Fn(f64) -> Result<DensityOperator>,
{
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!(
            "parameter step must be finite and positive, got {dt}"
        )));
    }
    let rho0 = curve(t)?;
    let rhom = curve(t + 0.5 * dt)?;
    let rho1 = curve(t + dt)?;
    if rho0.dim() != rhom.dim() || rho0.dim() != rho1.dim() {
        return Err(Error::dims(
            "curve must keep a fixed dimension along the interval".to_string(),
        ));
    }
    let decompose = |rho: &DensityOperator| -> Result<SpectralDecomposition> {
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
    let sm = decompose(&rhom)?;
    let s1 = decompose(&rho1)?;
    let (p0, v0) = match_to_midpoint(&sm, &s0)?;
    let (p1, v1) = match_to_midpoint(&sm, &s1)?;
    let n = sm.dim();

    let mut classical = 0.0;
    let mut diffs: Vec<CVector> = Vec::with_capacity(n);
    for a in 0..n {
        let dp = p1[a] - p0[a];
        if dp != 0.0 {
            classical += 0.25 * dp * dp / sm.probabilities[a];
        }
        diffs.push(&v1[a] - &v0[a]);
    }

    // couplings[(b, a)] ~ <n_b | d n_a>, symmetrized per unordered pair.
    let mut sjoqvist_nc = 0.0;
    let mut bures_nc = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            let c_ba = sm.vectors.column(b).dotc(&diffs[a]).norm_sqr();
            let c_ab = sm.vectors.column(a).dotc(&diffs[b]).norm_sqr();
            let w = 0.5 * (c_ab + c_ba);
            let psum = sm.probabilities[a] + sm.probabilities[b];
            sjoqvist_nc += psum * w;
            if psum > 0.0 {
                let pdiff = sm.probabilities[a] - sm.probabilities[b];
                bures_nc += pdiff * pdiff / psum * w;
            }
        }
    }
    Ok(RawElement {
        classical,
        sjoqvist_nc,
        bures_nc,
    })
}

fn checked_line_element<C>(
    curve: &C,
    t: f64,
    dt: f64,
    degeneracy_tol: f64,
    nonclassical: fn(&RawElement) -> f64,
) -> Result<LineElement>
where
    C: Fn(f64) -> Result<DensityOperator>,
{
    let full = raw_line_element(curve, t, dt, degeneracy_tol)?;
    // Half step about the same center t + dt/2, so the comparison isolates
    // the O(dt^2) truncation instead of the O(dt) drift of g along the curve.
    let half = raw_line_element(curve, t + 0.25 * dt, 0.5 * dt, degeneracy_tol)?;
    let full_total = full.total(nonclassical);
    let half_total = half.total(nonclassical);
    // full ~ g dt^2 (1 + c dt^2), 4*half ~ g dt^2 (1 + c dt^2/4):
    // (4/3)|full - 4 half| estimates full's truncation error.
    let estimated_error = (4.0 / 3.0) * (full_total - 4.0 * half_total).abs();
    let budget = tol::STEP_ERROR_FRACTION * full_total;
    if estimated_error > budget {
        return Err(Error::StepTooLarge {
            estimated_error,
            budget,
        });
    }
    Ok(LineElement::new(full.classical, nonclassical(&full)))
}

/// Interferometric squared line element over `[t, t + dt]`.
///
/// `classical` is the Fisher–Rao term `(1/4) sum_k dp_k^2 / p_k`;
/// `nonclassical` is `sum_k p_k <dn_k|(1 - |n_k><n_k|)|dn_k>`, both assembled
/// from central differences in the parallel-transport gauge (see module
/// docs). Requires nondegenerate spectra along the interval; rejects steps
/// whose Richardson-estimated truncation error exceeds its budget.
pub fn sjoqvist_line_element<C>(
    curve: C,
    t: f64,
    dt: f64,
    degeneracy_tol: f64,
) -> Result<LineElement>
where
    C: Fn(f64) -> Result<DensityOperator>,
{
    checked_line_element(&curve, t, dt, degeneracy_tol, |r| r.sjoqvist_nc)
}

/// Bures squared line element over `[t, t + dt]`.
///
/// Shares the Fisher–Rao classical term with [`sjoqvist_line_element`]; the
/// nonclassical weight is `(1/2) sum_{j != k} (p_j - p_k)^2 / (p_j + p_k)
/// |<n_j|dn_k>|^2`, which never exceeds the interferometric weight.
pub fn bures_line_element<C>(
    curve: C,
    t: f64,
    dt: f64,
    degeneracy_tol: f64,
) -> Result<LineElement>
where
    C: Fn(f64) -> Result<DensityOperator>,
{
    checked_line_element(&curve, t, dt, degeneracy_tol, |r| r.bures_nc)
}
