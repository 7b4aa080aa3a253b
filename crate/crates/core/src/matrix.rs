//! Dense complex linear algebra with deterministic gauges.
//!
//! Everything downstream (spectral decompositions, fidelities, eigenbranch
//! matching) is built on the five primitives here:
//!
//! * [`eig_hermitian`] — Hermitian eigendecomposition with **ascending**
//!   eigenvalues and a deterministic per-eigenvector phase gauge,
//! * [`psd_sqrt`] — the positive-semidefinite square root,
//! * [`trace_norm`] — the sum of singular values \(\|M\|_1\),
//! * [`polar_unitary`] — the unitary factor of the polar decomposition
//!   \(M = P\,U\),
//! * [`haar_unitary`] — Haar-distributed random unitaries via the
//!   Ginibre-QR construction with the R-diagonal phase correction
//!   (Mezzadri, Notices AMS 54, 592 (2007)).
//!
//! The eigensolver backend is `nalgebra`'s symmetric eigendecomposition; this
//! module owns ordering, gauge, validation, and error reporting, so callers
//! never observe backend-specific behavior (nalgebra returns eigenvalues
//! unsorted and with arbitrary column phases).
//!
//! ## Phase gauge
//!
//! Eigenvectors of a Hermitian matrix are defined only up to a unit phase.
//! We fix it deterministically: the entry of largest modulus is rotated to be
//! real and positive, ties resolved toward the lowest row index. Any fixed
//! gauge works for the interferometric constructions downstream (they apply
//! their own transport gauge); what matters is that equal inputs produce
//! bit-equal frames.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex matrix used throughout the crate (logically row-major
/// indexing `m[(row, col)]`; storage order is an implementation detail).
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Hermitian eigendecomposition `M = U diag(w) U^H`.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors; column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

/// Frobenius norm of the anti-Hermitian part, `||M - M^H||_F`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// `max(1, ||M||_F)` — the scale factor for relative tolerances.
pub fn norm_scale(m: &CMatrix) -> f64 {
    m.norm().max(1.0)
}

fn require_square(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::dims(format!(
            "{what} requires a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn require_hermitian(m: &CMatrix, what: &str) -> Result<()> {
    require_square(m, what)?;
    let residual = hermiticity_residual(m);
    let tolerance = tol::HERMITICITY_REL * norm_scale(m);
    if residual > tolerance {
        return Err(Error::NotHermitian { residual, tolerance });
    }
    Ok(())
}

/// Rotates each column's largest-modulus entry (lowest index on ties) to the
/// positive real axis.
fn gauge_columns(u: &mut CMatrix) {
    for j in 0..u.ncols() {
        let mut best = 0usize;
        let mut best_mod = 0.0f64;
        for i in 0..u.nrows() {
            let m = u[(i, j)].norm();
            if m > best_mod {
                best_mod = m;
                best = i;
            }
        }
        if best_mod > 0.0 {
            let phase = u[(best, j)] / Complex64::from(best_mod);
            let correction = phase.conj();
            for i in 0..u.nrows() {
                u[(i, j)] *= correction;
            }
        }
    }
}

/// `||U diag(w) U^H - M||_F` for a candidate eigensystem of `m`.
fn reconstruction_residual(m: &CMatrix, eigenvalues: &[f64], u: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut recon = CMatrix::zeros(n, n);
    for (col, &w) in u.column_iter().zip(eigenvalues) {
        recon += (col * col.adjoint()).scale(w);
    }
    (recon - m).norm()
}

/// Frobenius mass of the off-diagonal part, `sqrt(sum_{i != j} |t_ij|^2)`.
fn off_diagonal_norm(t: &CMatrix) -> f64 {
    let mut sum = 0.0;
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            if i != j {
                sum += t[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Upper bound on cyclic Jacobi sweeps during refinement. From a nearly
/// diagonal start one sweep suffices; even from scratch classical Jacobi
/// converges well inside this budget at the dimensions this crate handles.
const JACOBI_MAX_SWEEPS: usize = 8;

/// Polishes an eigensystem of `herm` in place with cyclic two-sided Jacobi
/// rotations (Golub & Van Loan, *Matrix Computations*, §8.5).
///
/// Works on `T = U^H herm U`: each rotation exactly diagonalizes one 2x2
/// Hermitian subproblem of `T` and is accumulated into the columns of `u`.
/// Starting from a nearly diagonal `T` the process converges quadratically,
/// so a frame whose only defect is a mixed eigenvector pair is restored to
/// working accuracy in a single sweep. Eigenvalues are re-read from the
/// diagonal afterwards; the caller re-sorts and re-gauges.
fn jacobi_refine(herm: &CMatrix, eigenvalues: &mut [f64], u: &mut CMatrix) {
    let n = herm.nrows();
    let mut t = u.adjoint() * herm * &*u;
    t = (&t + t.adjoint()).scale(0.5);
    let target = tol::JACOBI_OFF_DIAGONAL_REL * norm_scale(herm);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&t) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = t[(p, q)];
                let beta = b.norm();
                if beta == 0.0 {
                    continue;
                }
                let a = t[(p, p)].re;
                let c = t[(q, q)].re;
                // Fold the phase of b into the rotation so the remaining
                // 2x2 problem [[a, beta], [beta, c]] is real, then take the
                // smaller-angle root of the Jacobi quadratic (keeps nearly
                // sorted diagonals in place).
                let tau = (c - a) / (2.0 * beta);
                let tt = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + tt * tt).sqrt();
                let sn = tt * cs;
                let phase = b.conj() / Complex64::from(beta);
                let ps = phase * sn;
                let pc = phase * cs;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let tip = t[(i, p)];
                    let tiq = t[(i, q)];
                    let nip = tip * cs - tiq * ps;
                    let niq = tip * sn + tiq * pc;
                    t[(i, p)] = nip;
                    t[(i, q)] = niq;
                    t[(p, i)] = nip.conj();
                    t[(q, i)] = niq.conj();
                }
                // The rotated 2x2 block in closed form; writing it directly
                // keeps the annihilated entries exactly zero and the
                // diagonal exactly real.
                let two_bsc = 2.0 * beta * sn * cs;
                t[(p, p)] = Complex64::from(a * cs * cs - two_bsc + c * sn * sn);
                t[(q, q)] = Complex64::from(a * sn * sn + two_bsc + c * cs * cs);
                t[(p, q)] = Complex64::from(0.0);
                t[(q, p)] = Complex64::from(0.0);
                for i in 0..n {
                    let uip = u[(i, p)];
                    let uiq = u[(i, q)];
                    u[(i, p)] = uip * cs - uiq * ps;
                    u[(i, q)] = uip * sn + uiq * pc;
                }
            }
        }
    }
    for (k, w) in eigenvalues.iter_mut().enumerate() {
        *w = t[(k, k)].re;
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues and the
/// deterministic phase gauge described in the module docs.
///
/// The input must be Hermitian to `HERMITICITY_REL * max(1, ||M||_F)`; the
/// computation then proceeds on the exactly-Hermitian part `(M + M^H)/2`.
/// The returned frame satisfies `||U^H U - I||_F <= UNITARITY_ABS` and
/// reconstructs the input to `RECONSTRUCTION_REL * max(1, ||M||_F)`.
pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigensystem> {
    require_hermitian(m, "eig_hermitian")?;
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.clone().symmetric_eigen();
    let mut raw_eigenvalues: Vec<f64> = eig.eigenvalues.as_slice().to_vec();
    let mut raw_eigenvectors = eig.eigenvectors;

    // The backend's QL iteration occasionally deflates a small-gap (but not
    // degenerate) eigenvector pair before it has fully converged: the
    // eigenvalues and the frame's orthonormality come back at roundoff
    // level while the pair stays mixed at ~1e-7. Detect the stall by its
    // reconstruction residual and polish with Jacobi sweeps; healthy solves
    // skip this branch entirely and are returned bit-identically.
    if reconstruction_residual(&herm, &raw_eigenvalues, &raw_eigenvectors)
        > tol::JACOBI_REFINE_TRIGGER_REL * norm_scale(m)
    {
        jacobi_refine(&herm, &mut raw_eigenvalues, &mut raw_eigenvectors);
    }

    // nalgebra returns eigenvalues in no particular order; sort ascending.
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        raw_eigenvalues[a]
            .partial_cmp(&raw_eigenvalues[b])
            .expect("symmetric eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| raw_eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &raw_eigenvectors.column(src));
    }
    gauge_columns(&mut eigenvectors);

    let ortho = (eigenvectors.adjoint() * &eigenvectors - CMatrix::identity(n, n)).norm();
    if ortho > tol::UNITARITY_ABS {
        return Err(Error::NumericalFailure {
            detail: format!("eigenvector frame not orthonormal: residual {ortho:.3e}"),
        });
    }
    let recon_residual = reconstruction_residual(&herm, &eigenvalues, &eigenvectors);
    let recon_tol = tol::RECONSTRUCTION_REL * norm_scale(m);
    if recon_residual > recon_tol {
        return Err(Error::NumericalFailure {
            detail: format!(
                "eigendecomposition reconstruction residual {recon_residual:.3e} exceeds {recon_tol:.3e}"
            ),
        });
    }
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Positive-semidefinite square root `R` with `R R = M`.
///
/// Eigenvalues in `[PSD_EIGENVALUE_FLOOR * max(1, ||M||_F), 0)` are clamped to
/// zero as roundoff; anything below the floor is a genuine negativity and
/// yields [`Error::NotPsd`].
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = eig_hermitian(m)?;
    let floor = tol::PSD_EIGENVALUE_FLOOR * norm_scale(m);
    let min = eig
        .eigenvalues
        .first()
        .copied()
        .expect("nonempty spectrum");
    if min < floor {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            floor,
        });
    }
    let n = m.nrows();
    let mut root = CMatrix::zeros(n, n);
    for (col, &lambda) in eig.eigenvectors.column_iter().zip(&eig.eigenvalues) {
        root += (col * col.adjoint()).scale(lambda.max(0.0).sqrt());
    }
    // Symmetrize away the last ulps of asymmetry from the accumulation.
    Ok((&root + root.adjoint()).scale(0.5))
}

/// Trace norm `||M||_1`: the sum of singular values.
///
/// Equals `tr(M)` for positive-semidefinite `M` and `dim` for unitaries, and
/// is invariant under left/right multiplication by unitaries.
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Unitary factor `U` of the left polar decomposition `M = P U` with
/// `P = psd_sqrt(M M^H)`.
///
/// Fails with [`Error::SingularMatrix`] if the smallest singular value is at
/// or below `invertibility_tol` (the unitary factor is then not unique).
pub fn polar_unitary(m: &CMatrix, invertibility_tol: f64) -> Result<CMatrix> {
    require_square(m, "polar_unitary")?;
    let svd = m.clone().svd(true, true);
    let sigma_min = svd
        .singular_values
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    if sigma_min <= invertibility_tol {
        return Err(Error::SingularMatrix {
            sigma_min,
            tolerance: invertibility_tol,
        });
    }
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    Ok(u * v_t)
}

/// Haar-distributed random unitary of size `dim`.
///
/// Construction: a Ginibre matrix (i.i.d. standard complex Gaussian entries)
/// is QR-factored and the columns of `Q` are rotated by the phases of the
/// corresponding diagonal entries of `R`, which makes the distribution exactly
/// Haar rather than merely "QR of a random matrix". For `dim == 1` this
/// reduces to a uniformly random phase.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::dims("haar_unitary requires dim >= 1"));
    }
    let ginibre = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let modulus = d.norm();
        if modulus == 0.0 {
            return Err(Error::NumericalFailure {
                detail: "Ginibre matrix numerically singular during QR".to_string(),
            });
        }
        let phase = d / Complex64::from(modulus);
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    let residual = (q.adjoint() * &q - CMatrix::identity(dim, dim)).norm();
    if residual > tol::UNITARITY_ABS {
        return Err(Error::NumericalFailure {
            detail: format!("Haar sample not unitary: residual {residual:.3e}"),
        });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[a, b, cc, d])
    }

    #[test]
    fn eig_identity_is_trivial() {
        let eig = eig_hermitian(&CMatrix::identity(2, 2)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
        assert!((&eig.eigenvectors.adjoint() * &eig.eigenvectors - CMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn eig_orders_ascending() {
        let m = mat2(c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0));
        let eig = eig_hermitian(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 3.0]);
        // Gauge: each basis column has its 1-entry real positive.
        assert_abs_diff_eq!(eig.eigenvectors[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvectors[(1, 1)].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_sigma_x_gives_symmetric_superpositions() {
        let sx = mat2(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let eig = eig_hermitian(&sx).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Eigenvalue -1: (|0> - |1>)/sqrt(2) up to gauge; largest-modulus tie
        // resolves to the first entry, so it is +s with the second entry -s.
        assert_abs_diff_eq!(eig.eigenvectors[(0, 0)].re, s, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvectors[(1, 0)].re, -s, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvectors[(0, 1)].re, s, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvectors[(1, 1)].re, s, epsilon = 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = mat2(c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0));
        match eig_hermitian(&m) {
            Err(Error::NotHermitian { residual, .. }) => assert!(residual > 1.0),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn eig_gauge_is_deterministic_under_input_phase() {
        // Scaling an eigenvector's phase must not leak into the output gauge:
        // construct the same projector two ways and compare frames.
        let v1 = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let phase = Complex64::from_polar(1.0, 1.234);
        let v2: CVector = &v1 * phase;
        let p1 = &v1 * v1.adjoint();
        let p2 = &v2 * v2.adjoint();
        let e1 = eig_hermitian(&p1).unwrap();
        let e2 = eig_hermitian(&p2).unwrap();
        assert!((&e1.eigenvectors - &e2.eigenvectors).norm() < 1e-12);
    }

    #[test]
    fn psd_sqrt_of_diagonal() {
        let m = mat2(c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(9.0, 0.0));
        let r = psd_sqrt(&m).unwrap();
        assert_abs_diff_eq!(r[(0, 0)].re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[(1, 1)].re, 3.0, epsilon = 1e-12);
        assert!((r.clone() * r - m).norm() < 1e-10);
    }

    #[test]
    fn psd_sqrt_of_identity_and_qubit_state() {
        let i2 = CMatrix::identity(2, 2);
        assert!((psd_sqrt(&i2).unwrap() - &i2).norm() < 1e-13);
        // (1/2)(I + 0.6 sigma_z) = diag(0.8, 0.2)
        let rho = mat2(c(0.8, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.2, 0.0));
        let r = psd_sqrt(&rho).unwrap();
        assert!((r.clone() * r - rho).norm() < 1e-12);
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let m = mat2(c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.2, 0.0));
        match psd_sqrt(&m) {
            Err(Error::NotPsd { min_eigenvalue, .. }) => {
                assert_abs_diff_eq!(min_eigenvalue, -0.2, epsilon = 1e-12)
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn trace_norm_examples() {
        let m = mat2(c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0));
        assert_abs_diff_eq!(trace_norm(&m), 7.0, epsilon = 1e-12);
        let i3 = CMatrix::identity(3, 3);
        assert_abs_diff_eq!(trace_norm(&i3), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_norm_equals_trace_for_psd_and_is_unitarily_invariant() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for dim in [2usize, 3, 5] {
            let g = CMatrix::from_fn(dim, dim, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c(re, im)
            });
            let psd = &g * g.adjoint();
            assert_abs_diff_eq!(trace_norm(&psd), psd.trace().re, epsilon = 1e-10);
            let u = haar_unitary(dim, &mut rng).unwrap();
            let v = haar_unitary(dim, &mut rng).unwrap();
            let rotated = &u * &g * &v;
            assert_abs_diff_eq!(trace_norm(&rotated), trace_norm(&g), epsilon = 1e-10);
        }
    }

    #[test]
    fn polar_unitary_of_phased_diagonal() {
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let m = mat2(c(2.0, 0.0) * phase, c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0));
        let u = polar_unitary(&m, 1e-12).unwrap();
        assert!((u[(0, 0)] - phase).norm() < 1e-12);
        assert!((u[(1, 1)] - c(1.0, 0.0)).norm() < 1e-12);
        // M = psd_sqrt(M M^H) U
        let p = psd_sqrt(&(&m * m.adjoint())).unwrap();
        assert!((p * u - m).norm() < 1e-10);
    }

    #[test]
    fn polar_unitary_rejects_singular() {
        let m = mat2(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        match polar_unitary(&m, 1e-12) {
            Err(Error::SingularMatrix { sigma_min, .. }) => assert!(sigma_min < 1e-12),
            other => panic!("expected SingularMatrix, got {other:?}"),
        }
    }

    #[test]
    fn polar_decomposition_reconstructs_random_matrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for dim in [2usize, 4] {
            let g = CMatrix::from_fn(dim, dim, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c(re, im)
            }) + CMatrix::identity(dim, dim).scale(3.0); // keep well-conditioned
            let u = polar_unitary(&g, 1e-12).unwrap();
            let p = psd_sqrt(&(&g * g.adjoint())).unwrap();
            let scale = g.norm().max(1.0);
            assert!((p * &u - &g).norm() <= 1e-10 * scale);
            assert!((u.adjoint() * &u - CMatrix::identity(dim, dim)).norm() < 1e-12);
        }
    }

    #[test]
    fn haar_unitary_is_unitary_and_seeded() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let u = haar_unitary(5, &mut rng).unwrap();
        assert!((u.adjoint() * &u - CMatrix::identity(5, 5)).norm() < 1e-12);
        let mut rng2 = ChaCha12Rng::seed_from_u64(42);
        let u2 = haar_unitary(5, &mut rng2).unwrap();
        assert_eq!(u, u2, "same seed must give bit-identical unitaries");
    }

    #[test]
    fn haar_unitary_dim_one_is_uniform_phase() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let n = 4000;
        let mut mean = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let u = haar_unitary(1, &mut rng).unwrap();
            let z = u[(0, 0)];
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-12);
            mean += z;
        }
        // Uniform phases average to ~0 with |mean| ~ 1/sqrt(n).
        assert!(
            (mean / Complex64::from(n as f64)).norm() < 5.0 / (n as f64).sqrt(),
            "phases are not uniform"
        );
    }

    #[test]
    fn haar_first_entry_second_moment_matches_one_over_dim() {
        // E|u_00|^2 = 1/N for Haar; for N = 2, |u_00|^2 is Uniform(0,1), so
        // the sample mean of 10^4 draws has sigma = 1/(12^(1/2) 100) ~ 2.9e-3.
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        let n = 10_000;
        for dim in [2usize, 3] {
            let mut acc = 0.0;
            for _ in 0..n {
                let u = haar_unitary(dim, &mut rng).unwrap();
                acc += u[(0, 0)].norm_sqr();
            }
            let mean = acc / n as f64;
            let expected = 1.0 / dim as f64;
            assert!(
                (mean - expected).abs() < 0.01,
                "dim {dim}: E|u00|^2 = {mean}, expected {expected}"
            );
        }
    }

    #[test]
    fn jacobi_refinement_unmixes_a_contaminated_frame() {
        // Take an exact eigensystem of a fixed Hermitian matrix, then
        // contaminate two of its columns with a small real rotation. The
        // reconstruction degrades to ~gap * angle; refinement must bring it
        // back to the roundoff floor without touching orthonormality.
        let herm = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.60, 0.0),
                c(0.10, 0.20),
                c(0.05, -0.10),
                c(0.10, -0.20),
                c(0.35, 0.0),
                c(0.08, 0.03),
                c(0.05, 0.10),
                c(0.08, -0.03),
                c(0.55, 0.0),
            ],
        );
        let eig = eig_hermitian(&herm).unwrap();
        let mut u = eig.eigenvectors.clone();
        let mut w = eig.eigenvalues.clone();
        let angle = 1e-4f64;
        let (cs, sn) = (angle.cos(), angle.sin());
        for i in 0..3 {
            let a = u[(i, 1)];
            let b = u[(i, 2)];
            u[(i, 1)] = a * cs - b * sn;
            u[(i, 2)] = a * sn + b * cs;
        }
        assert!(
            reconstruction_residual(&herm, &w, &u) > 1e-8,
            "contamination should be visible in the residual"
        );
        jacobi_refine(&herm, &mut w, &mut u);
        assert!(
            reconstruction_residual(&herm, &w, &u) < 1e-13,
            "refinement left residual {:.3e}",
            reconstruction_residual(&herm, &w, &u)
        );
        let ortho = (u.adjoint() * &u - CMatrix::identity(3, 3)).norm();
        assert!(ortho < 1e-13, "refined frame not orthonormal: {ortho:.3e}");
        let mut sorted = w.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in sorted.iter().zip(&eig.eigenvalues) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    // The entries are pasted verbatim from the failing stream's {:.16e}
    // output; shortening them to shortest-round-trip form would obscure
    // that they are a capture, not chosen values.
    #[allow(clippy::excessive_precision)]
    fn eig_recovers_from_an_early_ql_deflation() {
        // Captured from a random density-matrix stream: the backend solver
        // returns exact eigenvalues and an orthonormal frame for this
        // matrix, yet leaves the two close eigenvectors (gap ~6.2e-3) mixed
        // at ~2e-7, i.e. a reconstruction residual near 1.3e-9. The
        // refinement pass must absorb the stall and deliver a roundoff-level
        // decomposition.
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(4.29993145739759275e-1, 0.0),
                c(7.34682644640351767e-2, 9.40482848296711055e-2),
                c(5.33786784667785591e-2, -8.57091357515314678e-2),
                c(7.34682644640351767e-2, -9.40482848296711055e-2),
                c(2.58513433130619252e-1, 0.0),
                c(7.37201732474392357e-2, 1.89716188134815639e-1),
                c(5.33786784667785591e-2, 8.57091357515314678e-2),
                c(7.37201732474392357e-2, -1.89716188134815639e-1),
                c(3.11493421129622305e-1, 0.0),
            ],
        );
        let eig = eig_hermitian(&m).expect("refinement should rescue the stalled solve");
        let residual = reconstruction_residual(&m, &eig.eigenvalues, &eig.eigenvectors);
        assert!(
            residual < 1e-13,
            "reconstruction residual {residual:.3e} after refinement"
        );
        // The matrix was assembled from these spectral weights.
        let expected = [0.020146532152830528, 0.4868476154454376, 0.49300585240173184];
        for (got, want) in eig.eigenvalues.iter().zip(&expected) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        // Determinism: the rescue path is as reproducible as the plain one.
        let again = eig_hermitian(&m).unwrap();
        assert_eq!(eig.eigenvalues, again.eigenvalues);
        assert_eq!(eig.eigenvectors, again.eigenvectors);
    }
}
