//! Density operators, spectral decompositions, ensembles, and state sampling.
//!
//! A [`DensityOperator`] is a validated Hermitian, positive-semidefinite,
//! unit-trace matrix. Its [`SpectralDecomposition`] orders probabilities
//! **descending** and records whether the spectrum is nondegenerate at a given
//! gap tolerance — the interferometric constructions downstream are defined
//! only for nondegenerate spectra.
//!
//! The *ensemble (unitary) freedom* is the fact that many pure-state
//! ensembles \(\{|u_h\rangle\}\) resolve the same state,
//! \(\rho = \sum_h |u_h\rangle\langle u_h|\); they are exactly the images of
//! the spectral ensemble \(\{\sqrt{p_k}\,|n_k\rangle\}\) under a unitary
//! mixing matrix ([`apply_ensemble_freedom`]).
//!
//! Random states are drawn from the ZHSL product measure — uniform simplex on
//! eigenvalues times Haar on eigenbases (Życzkowski, Horodecki, Sanpera,
//! Lewenstein, Phys. Rev. A 58, 883 (1998)).

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, haar_unitary, hermiticity_residual, norm_scale, CMatrix, CVector};
use crate::tol;

/// A validated density operator: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates and wraps a matrix; see [`validate_density`] for the checks.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        validate_density(&matrix)?;
        Ok(DensityOperator { matrix })
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::dims("maximally_mixed requires dim >= 1"));
        }
        DensityOperator::new(CMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    /// The pure state `|v><v| / <v|v>`.
    pub fn pure(v: &CVector) -> Result<Self> {
        let n2 = v.norm_squared();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::domain("pure state requires a nonzero finite vector"));
        }
        DensityOperator::new((v * v.adjoint()).scale(1.0 / n2))
    }

    /// Purity `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Checks the three density-operator axioms, reporting the measured residual
/// of the first one that fails:
///
/// 1. Hermitian: `||M - M^H||_F <= HERMITICITY_REL * max(1, ||M||_F)`;
/// 2. unit trace: `|tr(M) - 1| <= TRACE_ONE_ABS`;
/// 3. positive semidefinite: all eigenvalues `>= PSD_EIGENVALUE_FLOOR`.
pub fn validate_density(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::dims(format!(
            "density operator must be square and nonempty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::domain("density operator has non-finite entries"));
    }
    let residual = hermiticity_residual(m);
    let tolerance = tol::HERMITICITY_REL * norm_scale(m);
    if residual > tolerance {
        return Err(Error::NotHermitian { residual, tolerance });
    }
    let trace = m.trace();
    let trace_residual = (trace - Complex64::from(1.0)).norm();
    if trace_residual > tol::TRACE_ONE_ABS {
        return Err(Error::TraceNotOne {
            trace_re: trace.re,
            trace_im: trace.im,
            residual: trace_residual,
            tolerance: tol::TRACE_ONE_ABS,
        });
    }
    let eig = eig_hermitian(m)?;
    let min = eig.eigenvalues[0];
    if min < tol::PSD_EIGENVALUE_FLOOR {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            floor: tol::PSD_EIGENVALUE_FLOOR,
        });
    }
    Ok(())
}

/// Spectral decomposition `rho = sum_k p_k |n_k><n_k|` with probabilities in
/// **descending** order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Eigenvalues (probabilities), descending; clamped to `>= 0`.
    pub probabilities: Vec<f64>,
    /// Orthonormal eigenvectors; column `k` pairs with `probabilities[k]`.
    pub vectors: CMatrix,
    /// Whether all consecutive gaps exceed the tolerance used at construction.
    pub nondegenerate: bool,
    /// The smallest gap between consecutive (sorted) probabilities.
    pub min_gap: f64,
    /// The gap tolerance this decomposition was classified with.
    pub degeneracy_tol: f64,
}

impl SpectralDecomposition {
    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.probabilities.len()
    }

    /// Reconstructs the density matrix `sum_k p_k |n_k><n_k|`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (col, &p) in self.vectors.column_iter().zip(&self.probabilities) {
            m += (col * col.adjoint()).scale(p);
        }
        m
    }
}

/// Spectrally decomposes a density operator.
///
/// Probabilities are returned descending (largest first), clamped to `>= 0`
/// (validation already bounded them below by `PSD_EIGENVALUE_FLOOR`), and the
/// `nondegenerate` flag records whether every consecutive gap exceeds
/// `degeneracy_tol`.
pub fn spectral(rho: &DensityOperator, degeneracy_tol: f64) -> Result<SpectralDecomposition> {
    let eig = eig_hermitian(rho.matrix())?;
    let n = rho.dim();
    // eig_hermitian sorts ascending; reverse for descending probabilities.
    let probabilities: Vec<f64> = eig
        .eigenvalues
        .iter()
        .rev()
        .map(|&p| p.max(0.0))
        .collect();
    let mut vectors = CMatrix::zeros(n, n);
    for k in 0..n {
        vectors.set_column(k, &eig.eigenvectors.column(n - 1 - k));
    }
    let min_gap = probabilities
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    let min_gap = if n == 1 { f64::INFINITY } else { min_gap };
    Ok(SpectralDecomposition {
        nondegenerate: min_gap > degeneracy_tol,
        probabilities,
        vectors,
        min_gap,
        degeneracy_tol,
    })
}

/// A pure-state ensemble: subnormalized vectors with
/// `sum_h |u_h><u_h| = rho`.
#[derive(Debug, Clone)]
pub struct PureStateEnsemble {
    /// Subnormalized member vectors `|u_h>`.
    pub vectors: Vec<CVector>,
}

impl PureStateEnsemble {
    /// The state resolved by this ensemble, `sum_h |u_h><u_h|`.
    pub fn density(&self) -> CMatrix {
        let n = self.vectors[0].nrows();
        let mut m = CMatrix::zeros(n, n);
        for u in &self.vectors {
            m += u * u.adjoint();
        }
        m
    }
}

/// Applies the ensemble (unitary) freedom: given the spectral decomposition
/// and a unitary `V`, returns the ensemble
/// `|u_h> = sum_k V_{hk} sqrt(p_k) |n_k>`.
///
/// `V = I` returns the spectral ensemble itself. Every output resolves the
/// same state because `sum_h conj(V_{hk}) V_{hl} = delta_{kl}`.
pub fn apply_ensemble_freedom(
    s: &SpectralDecomposition,
    v: &CMatrix,
) -> Result<PureStateEnsemble> {
    let n = s.dim();
    if v.nrows() != n || v.ncols() != n {
        return Err(Error::dims(format!(
            "mixing matrix must be {n}x{n} to match the spectral ensemble, got {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    let residual = (v.adjoint() * v - CMatrix::identity(n, n)).norm();
    if residual > tol::ENSEMBLE_UNITARITY_ABS {
        return Err(Error::NotUnitary {
            residual,
            tolerance: tol::ENSEMBLE_UNITARITY_ABS,
        });
    }
    let mut vectors = Vec::with_capacity(n);
    for h in 0..n {
        let mut u = CVector::zeros(n);
        for k in 0..n {
            let w = v[(h, k)] * Complex64::from(s.probabilities[k].sqrt());
            u += self_scaled_column(&s.vectors, k, w);
        }
        vectors.push(u);
    }
    Ok(PureStateEnsemble { vectors })
}

fn self_scaled_column(m: &CMatrix, k: usize, w: Complex64) -> CVector {
    let col = m.column(k);
    CVector::from_fn(m.nrows(), |i, _| col[i] * w)
}

/// Overlap matrix between the subnormalized spectral ensembles of two states:
/// `S_{kl} = sqrt(p_k p'_l) <n_k|n'_l>`.
///
/// Its trace norm equals the Uhlmann fidelity between the two states, and
/// `tr(S S^H) <= 1` with equality iff both states are pure and equal.
pub fn overlap_matrix(a: &SpectralDecomposition, b: &SpectralDecomposition) -> Result<CMatrix> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::dims(format!(
            "overlap matrix requires equal dimensions, got {n} and {}",
            b.dim()
        )));
    }
    let mut s = CMatrix::zeros(n, n);
    for k in 0..n {
        let ak = a.vectors.column(k);
        let wk = a.probabilities[k].sqrt();
        for l in 0..n {
            let bl = b.vectors.column(l);
            let w = Complex64::from(wk * b.probabilities[l].sqrt());
            s[(k, l)] = ak.dotc(&bl) * w;
        }
    }
    Ok(s)
}

/// Gibbs state `exp(-beta H) / tr(exp(-beta H))`.
///
/// Computed in the eigenbasis of `H` with the max-shift convention
/// `p_n = exp(-beta (E_n - E_min)) / Z`, which never overflows regardless of
/// `beta * ||H||`. `beta = 0` yields the maximally mixed state.
pub fn thermal_state(h: &CMatrix, beta: f64) -> Result<DensityOperator> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::domain(format!(
            "inverse temperature must be finite and >= 0, got {beta}"
        )));
    }
    let eig = eig_hermitian(h)?;
    let n = h.nrows();
    let e_min = eig.eigenvalues[0];
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&e| (-beta * (e - e_min)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let mut m = CMatrix::zeros(n, n);
    for (col, &w) in eig.eigenvectors.column_iter().zip(&weights) {
        m += (col * col.adjoint()).scale(w / z);
    }
    let m = (&m + m.adjoint()).scale(0.5);
    DensityOperator::new(m)
}

/// A single-qubit state in spherical Bloch coordinates.
///
/// `r` is the Bloch radius in `[0, 1]`, `theta` the polar angle in `[0, pi]`,
/// `phi` the azimuth in `[0, 2 pi)`. The determinant of the corresponding
/// density matrix is `(1 - r^2) / 4`, so `r = 1` is exactly the pure-state
/// boundary (rank-deficient states are accepted).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    /// Bloch radius in `[0, 1]`.
    pub r: f64,
    /// Polar angle in `[0, pi]`.
    pub theta: f64,
    /// Azimuthal angle in `[0, 2 pi)`.
    pub phi: f64,
}

impl BlochState {
    /// Validates the coordinate ranges.
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) || !r.is_finite() {
            return Err(Error::domain(format!("Bloch radius must be in [0, 1], got {r}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::domain(format!(
                "polar angle must be in [0, pi], got {theta}"
            )));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(Error::domain(format!(
                "azimuth must be in [0, 2 pi), got {phi}"
            )));
        }
        Ok(BlochState { r, theta, phi })
    }

    /// Cartesian Bloch vector `(x, y, z)`.
    pub fn cartesian(&self) -> (f64, f64, f64) {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        (self.r * st * cp, self.r * st * sp, self.r * ct)
    }
}

/// Builds the qubit density matrix
/// `rho = (I + x sigma_x + y sigma_y + z sigma_z) / 2` from Bloch coordinates.
pub fn bloch_to_density(b: &BlochState) -> Result<DensityOperator> {
    let (x, y, z) = b.cartesian();
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    );
    DensityOperator::new(m)
}

/// Extracts Bloch coordinates from a qubit state; errors on `dim != 2`.
///
/// Conventions for coordinate singularities: `r = 0` reports
/// `theta = phi = 0`; on the polar axis (`sin theta = 0`) the azimuth is
/// reported as `0`.
pub fn density_to_bloch(rho: &DensityOperator) -> Result<BlochState> {
    if rho.dim() != 2 {
        return Err(Error::dims(format!(
            "Bloch coordinates require a qubit, got dim {}",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let x = 2.0 * m[(1, 0)].re;
    let y = 2.0 * m[(1, 0)].im;
    let z = m[(0, 0)].re - m[(1, 1)].re;
    let r = (x * x + y * y + z * z).sqrt().min(1.0);
    if r == 0.0 {
        return BlochState::new(0.0, 0.0, 0.0);
    }
    let theta = (z / r).clamp(-1.0, 1.0).acos();
    let mut phi = y.atan2(x);
    if phi < 0.0 {
        phi += 2.0 * std::f64::consts::PI;
    }
    if phi >= 2.0 * std::f64::consts::PI {
        phi = 0.0;
    }
    if theta == 0.0 || theta == std::f64::consts::PI {
        phi = 0.0;
    }
    BlochState::new(r, theta, phi)
}

/// Samples a density operator from the ZHSL measure: eigenvalues uniform on
/// the probability simplex, eigenbasis Haar-distributed.
///
/// The simplex sample uses normalized unit-rate exponentials (equivalently a
/// flat Dirichlet), consuming `dim` uniform draws, then `haar_unitary`
/// consumes its Ginibre block; the draw order is part of the seeded-stream
/// contract.
pub fn sample_zhsl<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityOperator> {
    if dim == 0 {
        return Err(Error::dims("sample_zhsl requires dim >= 1"));
    }
    let mut p: Vec<f64> = (0..dim)
        .map(|_| {
            let u: f64 = rng.gen();
            // 1 - u is in (0, 1], so the log is finite.
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = p.iter().sum();
    if total <= 0.0 {
        // All draws hit u = 0 simultaneously; probability ~2^-(53 dim).
        return Err(Error::NumericalFailure {
            detail: "simplex sample degenerated to the zero vector".to_string(),
        });
    }
    for w in &mut p {
        *w /= total;
    }
    let u = haar_unitary(dim, rng)?;
    let mut m = CMatrix::zeros(dim, dim);
    for (col, &w) in u.column_iter().zip(&p) {
        m += (col * col.adjoint()).scale(w);
    }
    let m = (&m + m.adjoint()).scale(0.5);
    DensityOperator::new(m)
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

    fn diag2(a: f64, b: f64) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[c(a, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(b, 0.0)],
        )
    }

    #[test]
    fn validate_accepts_maximally_mixed_and_pure() {
        assert!(validate_density(&diag2(0.5, 0.5)).is_ok());
        assert!(validate_density(&diag2(1.0, 0.0)).is_ok());
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        match validate_density(&diag2(1.2, -0.2)) {
            Err(Error::NotPsd { min_eigenvalue, .. }) => {
                assert_abs_diff_eq!(min_eigenvalue, -0.2, epsilon = 1e-12)
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_bad_trace_and_nonhermitian() {
        match validate_density(&diag2(0.7, 0.7)) {
            Err(Error::TraceNotOne { residual, .. }) => {
                assert_abs_diff_eq!(residual, 0.4, epsilon = 1e-12)
            }
            other => panic!("expected TraceNotOne, got {other:?}"),
        }
        let skew = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.1, 0.0), c(-0.1, 0.0), c(0.5, 0.0)],
        );
        assert!(matches!(
            validate_density(&skew),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn spectral_orders_descending_and_flags_degeneracy() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
        assert!(!s.nondegenerate, "I/2 must be flagged degenerate");
        assert_abs_diff_eq!(s.min_gap, 0.0, epsilon = 1e-14);

        // (1/2)(I + 0.5 sigma_x): p = (0.75, 0.25), eigenvectors (|0> +/- |1>)/sqrt(2).
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.25, 0.0), c(0.25, 0.0), c(0.5, 0.0)],
        );
        let rho = DensityOperator::new(m).unwrap();
        let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
        assert!(s.nondegenerate);
        assert_abs_diff_eq!(s.probabilities[0], 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(s.probabilities[1], 0.25, epsilon = 1e-12);
        let sq = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.vectors[(0, 0)].re, sq, epsilon = 1e-12);
        assert_abs_diff_eq!(s.vectors[(1, 0)].re, sq, epsilon = 1e-12);
        assert_abs_diff_eq!(s.vectors[(0, 1)].re, sq, epsilon = 1e-12);
        assert_abs_diff_eq!(s.vectors[(1, 1)].re, -sq, epsilon = 1e-12);
    }

    #[test]
    fn spectral_reconstructs() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for dim in [2usize, 3, 6] {
            let rho = sample_zhsl(dim, &mut rng).unwrap();
            let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
            assert!((s.reconstruct() - rho.matrix()).norm() < 1e-12);
            let sum: f64 = s.probabilities.iter().sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ensemble_freedom_identity_returns_spectral_ensemble() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.7, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.3, 0.0)],
        );
        let rho = DensityOperator::new(m).unwrap();
        let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
        let ens = apply_ensemble_freedom(&s, &CMatrix::identity(2, 2)).unwrap();
        assert_abs_diff_eq!(ens.vectors[0].norm_squared(), 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(ens.vectors[1].norm_squared(), 0.3, epsilon = 1e-12);
        assert!((ens.density() - rho.matrix()).norm() < 1e-12);
    }

    #[test]
    fn ensemble_freedom_hadamard_equalizes_weights() {
        let rho = DensityOperator::new(diag2(0.7, 0.3)).unwrap();
        let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
        let sq = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = CMatrix::from_row_slice(
            2,
            2,
            &[c(sq, 0.0), c(sq, 0.0), c(sq, 0.0), c(-sq, 0.0)],
        );
        let ens = apply_ensemble_freedom(&s, &hadamard).unwrap();
        assert_abs_diff_eq!(ens.vectors[0].norm_squared(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(ens.vectors[1].norm_squared(), 0.5, epsilon = 1e-12);
        assert!((ens.density() - rho.matrix()).norm() < 1e-12);
    }

    #[test]
    fn ensemble_freedom_rejects_bad_inputs() {
        let rho = DensityOperator::new(diag2(0.7, 0.3)).unwrap();
        let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
        assert!(matches!(
            apply_ensemble_freedom(&s, &CMatrix::identity(3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let not_unitary = diag2(1.0, 2.0);
        assert!(matches!(
            apply_ensemble_freedom(&s, &not_unitary),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn ensemble_reconstruction_over_random_mixers() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for dim in 2..=6usize {
            for _ in 0..20 {
                let rho = sample_zhsl(dim, &mut rng).unwrap();
                let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
                let v = haar_unitary(dim, &mut rng).unwrap();
                let ens = apply_ensemble_freedom(&s, &v).unwrap();
                assert!(
                    (ens.density() - rho.matrix()).norm() < 1e-11,
                    "ensemble must resolve the original state"
                );
            }
        }
    }

    #[test]
    fn overlap_matrix_of_state_with_itself_is_diagonal() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.25, 0.0), c(0.25, 0.0), c(0.5, 0.0)],
        );
        let rho = DensityOperator::new(m).unwrap();
        let s = spectral(&rho, tol::DEGENERACY_REL_DEFAULT).unwrap();
        let ov = overlap_matrix(&s, &s).unwrap();
        assert_abs_diff_eq!(ov[(0, 0)].re, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(ov[(1, 1)].re, 0.25, epsilon = 1e-12);
        assert!(ov[(0, 1)].norm() < 1e-13);
        assert!(ov[(1, 0)].norm() < 1e-13);
    }

    #[test]
    fn overlap_matrix_hilbert_schmidt_norm_is_bounded() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..50 {
            let a = sample_zhsl(3, &mut rng).unwrap();
            let b = sample_zhsl(3, &mut rng).unwrap();
            let sa = spectral(&a, tol::DEGENERACY_REL_DEFAULT).unwrap();
            let sb = spectral(&b, tol::DEGENERACY_REL_DEFAULT).unwrap();
            let s = overlap_matrix(&sa, &sb).unwrap();
            let hs = (&s * s.adjoint()).trace().re;
            assert!(hs <= 1.0 + 1e-12, "tr(S S^H) = {hs} must be <= 1");
        }
    }

    #[test]
    fn thermal_state_matches_closed_form_two_level() {
        // H = diag(0, 1), beta = 1: p = (1, e^-1)/(1 + e^-1).
        let h = diag2(0.0, 1.0);
        let rho = thermal_state(&h, 1.0).unwrap();
        let z = 1.0 + (-1.0f64).exp();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 1.0 / z, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, (-1.0f64).exp() / z, epsilon = 1e-14);
    }

    #[test]
    fn thermal_state_commutes_and_limits() {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.0), c(0.2, -0.1), c(0.2, 0.1), c(-0.4, 0.0)],
        );
        let rho = thermal_state(&h, 2.0).unwrap();
        let comm = (rho.matrix() * &h - &h * rho.matrix()).norm();
        assert!(comm < 1e-12, "thermal state must commute with H, got {comm}");

        // beta -> 0 gives I/N.
        let rho0 = thermal_state(&h, 0.0).unwrap();
        assert!((rho0.matrix() - CMatrix::identity(2, 2).scale(0.5)).norm() < 1e-10);

        // Large beta for H = omega_z sigma_z / 2: ground state |1>.
        let hz = diag2(0.5, -0.5);
        let rho_cold = thermal_state(&hz, 200.0).unwrap();
        assert!((rho_cold.matrix() - &diag2(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn thermal_state_survives_huge_beta_times_norm() {
        let h = diag2(0.0, 1.0);
        let rho = thermal_state(&h, 1e6).unwrap();
        assert!(rho.matrix()[(0, 0)].re > 1.0 - 1e-12);
    }

    #[test]
    fn bloch_round_trip() {
        let b = BlochState::new(0.6, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let rho = bloch_to_density(&b).unwrap();
        // (1/2)(I + 0.6 sigma_x)
        assert_abs_diff_eq!(rho.matrix()[(0, 1)].re, 0.3, epsilon = 1e-14);
        let back = density_to_bloch(&rho).unwrap();
        assert_abs_diff_eq!(back.r, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(back.theta, std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(back.phi, 0.0, epsilon = 1e-12);

        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..100 {
            let rho = sample_zhsl(2, &mut rng).unwrap();
            let b = density_to_bloch(&rho).unwrap();
            let again = bloch_to_density(&b).unwrap();
            assert!((again.matrix() - rho.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn bloch_determinant_identity() {
        // det(rho) = (1 - r^2)/4.
        for r in [0.0, 0.3, 0.9, 1.0] {
            let b = BlochState::new(r, 1.1, 2.2).unwrap();
            let rho = bloch_to_density(&b).unwrap();
            let det = rho.matrix().determinant();
            assert_abs_diff_eq!(det.re, (1.0 - r * r) / 4.0, epsilon = 1e-14);
            assert!(det.im.abs() < 1e-15);
        }
    }

    #[test]
    fn bloch_rejects_non_qubit_and_bad_coordinates() {
        let rho3 = DensityOperator::maximally_mixed(3).unwrap();
        assert!(matches!(
            density_to_bloch(&rho3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(BlochState::new(1.2, 0.0, 0.0).is_err());
        assert!(BlochState::new(0.5, -0.1, 0.0).is_err());
        assert!(BlochState::new(0.5, 0.1, 7.0).is_err());
    }

    #[test]
    fn zhsl_samples_are_valid_and_pure_boundary_is_accepted() {
        let mut rng = ChaCha12Rng::seed_from_u64(123);
        for dim in [2usize, 3, 4] {
            for _ in 0..50 {
                let rho = sample_zhsl(dim, &mut rng).unwrap();
                assert_eq!(rho.dim(), dim);
            }
        }
        // Rank-deficient (r = 1) states are representable.
        let pure = DensityOperator::new(diag2(1.0, 0.0)).unwrap();
        assert_eq!(density_to_bloch(&pure).unwrap().r, 1.0);
    }

    #[test]
    fn zhsl_qubit_mean_purity_matches_measure() {
        // For ZHSL qubits the radius is uniform on [0, 1] (flat simplex),
        // so E[purity] = E[(1 + r^2)/2] = 2/3 and Var[r^2] = 4/45; with 20000
        // samples the mean-purity sigma is sqrt(4/45/4)/sqrt(n) ~ 1.1e-3.
        let mut rng = ChaCha12Rng::seed_from_u64(777);
        let n = 20_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += sample_zhsl(2, &mut rng).unwrap().purity();
        }
        let mean = acc / n as f64;
        assert!(
            (mean - 2.0 / 3.0).abs() < 0.006,
            "mean purity {mean} deviates from 2/3"
        );
    }

    #[test]
    fn zhsl_qubit_radius_is_uniform() {
        // Chi-square test against Uniform(0,1) with 10 bins, n = 10000:
        // 99.9% critical value for 9 dof is 27.9; use 40 for slack.
        let mut rng = ChaCha12Rng::seed_from_u64(4242);
        let n = 10_000;
        let mut bins = [0usize; 10];
        for _ in 0..n {
            let rho = sample_zhsl(2, &mut rng).unwrap();
            let r = density_to_bloch(&rho).unwrap().r;
            let idx = ((r * 10.0) as usize).min(9);
            bins[idx] += 1;
        }
        let expected = n as f64 / 10.0;
        let chi2: f64 = bins
            .iter()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 40.0, "chi-square {chi2} too large; bins {bins:?}");
    }
}
