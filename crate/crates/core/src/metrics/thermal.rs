//! Closed perturbative forms for thermal families and their validation.
//!
//! For a Gibbs family \(\rho(\lambda) \propto e^{-\beta H(\lambda)}\) with
//! \(H(\lambda) = H + \lambda\,\delta H\), first-order perturbation theory
//! turns the nonclassical line-element weights into spectral sums over the
//! *unperturbed* Hamiltonian: with \(H|k\rangle = E_k|k\rangle\)
//! (nondegenerate) and Gibbs weights \(p_k \propto e^{-\beta E_k}\),
//! \(\langle n|\partial_\lambda n_k\rangle = \langle n|\delta H|k\rangle/(E_k - E_n)\),
//! so per unit \(d\lambda^2\)
//!
//! * interferometric: \(\sum_{n<k} (p_n + p_k)\,
//!   |\langle n|\delta H|k\rangle|^2/(E_n - E_k)^2\),
//! * Bures: \(\sum_{n<k} \frac{(p_n - p_k)^2}{p_n + p_k}\,
//!   |\langle n|\delta H|k\rangle|^2/(E_n - E_k)^2\).
//!
//! The two differ per energy pair by exactly
//! \([(p_n - p_k)/(p_n + p_k)]^2 = \tanh^2(\beta(E_k - E_n)/2)\): the Bures
//! weight is thermally suppressed at high temperature while the
//! interferometric weight is temperature-independent, which is the whole
//! quantitative story of their disagreement on Gibbs families.
//!
//! [`eigvec_perturbation_check`] validates the perturbative couplings that
//! feed these sums against a gauge-insensitive central finite difference:
//! the averaged overlap moduli
//! \((|\langle n^0_n|n_k(+s)\rangle| + |\langle n^0_n|n_k(-s)\rangle|)/(2s)\)
//! estimate \(|\langle n|\delta H|k\rangle/(E_k - E_n)|\) with an \(O(s^2)\)
//! error and no dependence on eigensolver phase conventions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, hermiticity_residual, norm_scale, CMatrix};
use crate::metrics::{match_branches, require_unambiguous, MetricKind};
use crate::tol;

/// A validated base Hamiltonian, Hermitian perturbation direction, and
/// inverse temperature.
#[derive(Debug, Clone)]
pub struct HamiltonianPerturbation {
    h: CMatrix,
    dh: CMatrix,
    beta: f64,
}

impl HamiltonianPerturbation {
    /// Validates that `h` and `dh` are Hermitian (relative residual at most
    /// [`tol::HERMITICITY_REL`]), square, of equal dimension, and that
    /// `beta` is finite and strictly positive.
    pub fn new(h: CMatrix, dh: CMatrix, beta: f64) -> Result<Self> {
        for (name, m) in [("base Hamiltonian", &h), ("perturbation", &dh)] {
            if m.nrows() != m.ncols() || m.nrows() == 0 {
                return Err(Error::dims(format!(
                    "{name} must be square and nonempty, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let residual = hermiticity_residual(m);
            let bound = tol::HERMITICITY_REL * norm_scale(m);
            if residual > bound {
                return Err(Error::NotHermitian {
                    residual,
                    tolerance: bound,
                });
            }
        }
        if h.nrows() != dh.nrows() {
            return Err(Error::dims(format!(
                "perturbation dimension {} does not match Hamiltonian dimension {}",
                dh.nrows(),
                h.nrows()
            )));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::domain(format!(
                "inverse temperature must be finite and positive, got {beta}"
            )));
        }
        Ok(HamiltonianPerturbation { h, dh, beta })
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn dh(&self) -> &CMatrix {
        &self.dh
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Eigendecomposition of the base Hamiltonian, rejected as degenerate
    /// when any energy gap falls at or below the default degeneracy
    /// threshold relative to the spectral scale.
    fn nondegenerate_eig(&self) -> Result<(Vec<f64>, CMatrix)> {
        let eig = eig_hermitian(&self.h)?;
        let scale = norm_scale(&self.h);
        let mut min_gap = f64::INFINITY;
        for w in eig.eigenvalues.windows(2) {
            min_gap = min_gap.min(w[1] - w[0]);
        }
        let threshold = tol::DEGENERACY_REL_DEFAULT * scale;
        if self.dim() > 1 && min_gap <= threshold {
            return Err(Error::DegenerateSpectrum {
                min_gap,
                tolerance: threshold,
            });
        }
        Ok((eig.eigenvalues, eig.eigenvectors))
    }

    /// Gibbs weights for the given energies, computed with the max-shift
    /// trick so no exponential overflows.
    fn gibbs_weights(&self, energies: &[f64]) -> Vec<f64> {
        let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let mut w: Vec<f64> = energies
            .iter()
            .map(|e| (-self.beta * (e - e_min)).exp())
            .collect();
        let z: f64 = w.iter().sum();
        for x in &mut w {
            *x /= z;
        }
        w
    }
}

/// Nonclassical metric coefficient of a Gibbs family per unit coupling
/// (see module docs), for the requested metric.
///
/// Requires a nondegenerate base Hamiltonian. A perturbation commuting with
/// the Hamiltonian has no off-diagonal matrix elements in the energy basis,
/// so the result is zero: commuting directions carry purely classical
/// distinguishability.
pub fn thermal_nonclassical(
    pert: &HamiltonianPerturbation,
    kind: MetricKind,
) -> Result<f64> {
    let (energies, vectors) = pert.nondegenerate_eig()?;
    let p = pert.gibbs_weights(&energies);
    let dh_eig = vectors.adjoint() * pert.dh() * &vectors;
    let n = pert.dim();
    let mut total = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            let gap = energies[b] - energies[a];
            let coupling = dh_eig[(a, b)].norm_sqr() / (gap * gap);
            let psum = p[a] + p[b];
            total += match kind {
                MetricKind::Sjoqvist => psum * coupling,
                MetricKind::Bures => {
                    if psum > 0.0 {
                        let pdiff = p[a] - p[b];
                        pdiff * pdiff / psum * coupling
                    } else {
                        0.0
                    }
                }
            };
        }
    }
    Ok(total)
}

/// Outcome of the finite-difference validation of perturbative eigenvector
/// couplings.
#[derive(Debug, Clone)]
pub struct PerturbationReport {
    /// Finite-difference step used for the central estimate.
    pub step: f64,
    /// `|<n|dH|k> / (E_k - E_n)|` from first-order perturbation theory;
    /// zero on the diagonal.
    pub analytic: DMatrix<f64>,
    /// Modulus-averaged central-difference estimate of the same couplings.
    pub estimated: DMatrix<f64>,
    /// `||estimated - analytic||_F / ||analytic||_F` over the off-diagonal
    /// entries; when the analytic couplings all vanish this falls back to
    /// the absolute Frobenius norm of the estimate.
    pub relative_deviation: f64,
    /// Largest analytic coupling modulus.
    pub max_coupling: f64,
}

/// Validates the first-order eigenvector response of `pert.h()` to
/// `pert.dh()` against a central finite difference with step `step`.
///
/// For each perturbed eigenvector branch `k` (matched by largest |overlap|),
/// the overlap modulus with the unperturbed branch `n != k`, averaged over
/// the `+step` and `-step` decompositions, estimates
/// `step * |<n|dH|k>/(E_k - E_n)|` with an `O(step^2)` relative error —
/// moduli make the comparison insensitive to per-call eigensolver phases.
pub fn eigvec_perturbation_check(
    pert: &HamiltonianPerturbation,
    step: f64,
) -> Result<PerturbationReport> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain(format!(
            "finite-difference step must be finite and positive, got {step}"
        )));
    }
    let (energies, vectors) = pert.nondegenerate_eig()?;
    let n = pert.dim();
    let dh_eig = vectors.adjoint() * pert.dh() * &vectors;
    let mut analytic = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        for row in 0..n {
            if row != k {
                analytic[(row, k)] =
                    (dh_eig[(row, k)] / (energies[k] - energies[row])).norm();
            }
        }
    }

    // Overlap moduli of the +step and -step eigenbranches against the
    // unperturbed frame, with branches matched by largest |overlap|.
    let side = |sign: f64| -> Result<DMatrix<f64>> {
        let hp = pert.h() + pert.dh().scale(sign * step);
        let eig = eig_hermitian(&hp)?;
        let overlaps = DMatrix::from_fn(n, n, |row, col| {
            vectors.column(row).dotc(&eig.eigenvectors.column(col)).norm()
        });
        let (perm, weakest) = match_branches(&overlaps);
        require_unambiguous(weakest)?;
        // matched[(row, k)] = |<n^0_row | n_k(sign*step)>|
        Ok(DMatrix::from_fn(n, n, |row, k| overlaps[(row, perm[k])]))
    };
    let plus = side(1.0)?;
    let minus = side(-1.0)?;

    let mut estimated = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        for row in 0..n {
            if row != k {
                estimated[(row, k)] = (plus[(row, k)] + minus[(row, k)]) / (2.0 * step);
            }
        }
    }
    let diff_norm = (&estimated - &analytic).norm();
    let analytic_norm = analytic.norm();
    let relative_deviation = if analytic_norm > 0.0 {
        diff_norm / analytic_norm
    } else {
        estimated.norm()
    };
    let max_coupling = analytic.iter().copied().fold(0.0, f64::max);
    Ok(PerturbationReport {
        step,
        analytic,
        estimated,
        relative_deviation,
        max_coupling,
    })
}
