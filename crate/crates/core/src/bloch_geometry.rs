//! Single-qubit state space as a Riemannian ball: monotone-metric structure,
//! volume normalization, and geodesic lengths.
//!
//! Every monotone Riemannian metric on density operators is classified
//! (Morozova–Chentsov; Petz, Linear Algebra Appl. 244, 81 (1996)) by an
//! operator-monotone function \(f : (0,\infty) \to (0,\infty)\) with the
//! self-inversive symmetry \(f(1/t) = f(t)/t\). On the Bloch ball in
//! spherical coordinates \((r, \theta, \phi)\) the corresponding line
//! element is
//!
//! \[ ds^2 = \tfrac14\Bigl[\frac{dr^2}{1 - r^2}
//!    + \frac{1}{f(t(r))}\,\frac{r^2}{1+r}\,d\Omega^2\Bigr],
//!    \qquad t(r) = \frac{1-r}{1+r}, \]
//!
//! with \(d\Omega^2 = d\theta^2 + \sin^2\theta\,d\phi^2\). The radial part
//! is universal; only the angular weight distinguishes metrics:
//!
//! * \(f_{\mathrm{B}}(t) = (1+t)/2\) (Bures) gives weight \(r^2\) — the
//!   round metric on the ball;
//! * \(f_{\mathrm{S}}(t) = \tfrac12(1-t)^2/(1+t)\) (interferometric) gives
//!   weight 1: the angular resolution does **not** decay toward the
//!   maximally mixed state, so the weight ratio to Bures,
//!   \((1+r)/r^2 \cdot \tfrac{1}{1+r}^{-1}\!\cdot\!\ldots = 1/r^2\),
//!   diverges at the center. \(f_{\mathrm S}\) is *not* operator monotone —
//!   it vanishes at \(t = 1\) — so the interferometric metric sits outside
//!   the monotone family, and this module provides the machinery to exhibit
//!   that concretely;
//! * \(f_\nu(t) = f_{\mathrm S}(t)\,\bigl(4t/(1+t)^2\bigr)^{1/2-\nu}\)
//!   interpolates: its volume element reproduces the one-parameter family
//!   of radial measures \((1-r^2)^{\nu-1}\) studied by Życzkowski,
//!   Horodecki, Sanpera and Lewenstein (Phys. Rev. A 58, 883 (1998));
//!   \(\nu = \tfrac12\) recovers \(f_{\mathrm S}\) identically.
//!
//! Volume densities are normalized in closed form (the ZHSL constant is
//! \(\Gamma(\nu+\tfrac12)/(2\pi^{3/2}\Gamma(\nu))\)) and cross-checked by
//! Gauss–Legendre quadrature in the chart \(r = \sin\alpha\), which absorbs
//! the \((1-r^2)^{-1/2}\) boundary singularity into a smooth integrand.
//!
//! Geodesic lengths use the cylinder chart \(\alpha = \arcsin r\): the
//! interferometric metric becomes the flat product
//! \(4\,ds^2 = d\alpha^2 + d\Omega^2\) (geodesics are straight lines in
//! \((\alpha, \text{great circle})\)), while Bures becomes the round
//! 3-sphere patch \(4\,ds^2 = d\alpha^2 + \sin^2\alpha\,d\Omega^2\) whose
//! geodesic distance is the fidelity angle.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fileio::MatrixFile;
use crate::matrix::{eig_hermitian, CMatrix};
use crate::metrics::MetricKind;
use crate::quad::gauss_legendre_on;
use crate::tol;

// ---------------------------------------------------------------------------
// Morozova-Chentsov functions
// ---------------------------------------------------------------------------

/// Bures Morozova-Chentsov function `(1 + t) / 2`.
pub fn f_bures(t: f64) -> Result<f64> {
    require_positive_argument(t)?;
    Ok(0.5 * (1.0 + t))
}

/// Interferometric Morozova-Chentsov function `(1 - t)^2 / (2 (1 + t))`.
///
/// Vanishes at `t = 1` — the defining failure of normalization for a
/// monotone-metric candidate. `f_sjoqvist(0.5)` is exactly `1/12`.
pub fn f_sjoqvist(t: f64) -> Result<f64> {
    require_positive_argument(t)?;
    Ok(0.5 * (1.0 - t) * (1.0 - t) / (1.0 + t))
}

/// Radial-measure interpolation
/// `f_sjoqvist(t) * (4t / (1+t)^2)^(1/2 - nu)`, `nu > 0`.
///
/// At `nu = 1/2` the exponent is zero and the value is bit-identical to
/// [`f_sjoqvist`]; every member vanishes at `t = 1`.
pub fn f_zhsl(t: f64, nu: f64) -> Result<f64> {
    require_zhsl_exponent(nu)?;
    let base = f_sjoqvist(t)?;
    let s = 1.0 + t;
    Ok(base * (4.0 * t / (s * s)).powf(0.5 - nu))
}

fn require_positive_argument(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!(
            "Morozova-Chentsov functions are defined on (0, inf), got {t}"
        )));
    }
    Ok(())
}

fn require_zhsl_exponent(nu: f64) -> Result<()> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::domain(format!(
            "radial-measure exponent must be finite and positive, got {nu}"
        )));
    }
    Ok(())
}

/// A named Morozova-Chentsov candidate function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MCFunction {
    Bures,
    Sjoqvist,
    Zhsl { nu: f64 },
}

impl MCFunction {
    /// Validated constructor for the radial-measure family.
    pub fn zhsl(nu: f64) -> Result<Self> {
        require_zhsl_exponent(nu)?;
        Ok(MCFunction::Zhsl { nu })
    }

    pub fn name(&self) -> String {
        match self {
            MCFunction::Bures => "bures".to_string(),
            MCFunction::Sjoqvist => "sjoqvist".to_string(),
            MCFunction::Zhsl { nu } => format!("zhsl(nu={nu})"),
        }
    }

    /// Evaluates the function on `(0, inf)`. At `t = 1` the closed forms
    /// already return the limit value, so no special case is needed; use
    /// [`MCFunction::vanishes_at_one`] to detect the normalization failure.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match self {
            MCFunction::Bures => f_bures(t),
            MCFunction::Sjoqvist => f_sjoqvist(t),
            MCFunction::Zhsl { nu } => f_zhsl(t, *nu),
        }
    }

    /// The value `f(1)`: 1 for Bures (the monotone-metric normalization),
    /// 0 for the interferometric function and the whole radial-measure
    /// family.
    pub fn limit_at_one(&self) -> f64 {
        match self {
            MCFunction::Bures => 1.0,
            MCFunction::Sjoqvist | MCFunction::Zhsl { .. } => 0.0,
        }
    }

    /// Whether `f(1) = 0`, i.e. the angular weight `1/f` blows up at the
    /// maximally mixed state.
    pub fn vanishes_at_one(&self) -> bool {
        self.limit_at_one() == 0.0
    }
}

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

/// Result of sampling the self-inversive identity `f(1/t) = f(t)/t`.
#[derive(Debug, Clone, Serialize)]
pub struct SelfInversiveReport {
    pub name: String,
    /// Number of sampled arguments (log-spaced over `[1e-3, 1e3]`).
    pub samples: usize,
    /// Largest defect `|f(1/t) - f(t)/t|`, measured relative to
    /// `max(1, |f(t)/t|)` so the threshold is meaningful across the whole
    /// sampled range.
    pub max_defect: f64,
    pub passed: bool,
}

/// Samples the self-inversive identity on a log grid over `[1e-3, 1e3]`.
///
/// Genuine Morozova-Chentsov functions satisfy it to roundoff; a
/// non-self-inversive candidate like `t^2` fails by many orders of
/// magnitude.
pub fn check_self_inversive<F>(name: &str, f: F) -> Result<SelfInversiveReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let samples = 1001;
    let mut max_defect = 0.0_f64;
    for i in 0..samples {
        let t = 10f64.powf(-3.0 + 6.0 * i as f64 / (samples - 1) as f64);
        let lhs = f(1.0 / t)?;
        let rhs = f(t)? / t;
        let defect = (lhs - rhs).abs() / rhs.abs().max(1.0);
        max_defect = max_defect.max(defect);
    }
    Ok(SelfInversiveReport {
        name: name.to_string(),
        samples,
        max_defect,
        passed: max_defect < tol::MC_SELF_INVERSIVE_ABS,
    })
}

impl fmt::Display for SelfInversiveReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "self-inversive check for {}: max defect {:.3e} over {} samples -> {}",
            self.name,
            self.max_defect,
            self.samples,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

/// A counterexample to operator monotonicity: `A <= B` but `f(B) - f(A)`
/// has a negative eigenvalue. Matrices are stored in file form for exact
/// reproduction.
#[derive(Debug, Clone, Serialize)]
pub struct MonotoneViolation {
    pub trial: usize,
    pub min_eigenvalue: f64,
    pub a: MatrixFile,
    pub b: MatrixFile,
}

/// Outcome of a randomized operator-monotonicity search.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorMonotoneReport {
    pub name: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Most negative eigenvalue of `f(B) - f(A)` over all trials.
    pub min_eigenvalue_seen: f64,
    pub violations: Vec<MonotoneViolation>,
}

impl OperatorMonotoneReport {
    /// `true` when no trial produced an eigenvalue below the violation
    /// floor. A pass is evidence, never proof.
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for OperatorMonotoneReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(
                out,
                "operator monotonicity of {} (dim {}): no violation found in {} trials \
                 (worst eigenvalue {:.3e}); absence of a counterexample is not a proof",
                self.name, self.dim, self.trials, self.min_eigenvalue_seen
            )
        } else {
            write!(
                out,
                "operator monotonicity of {} (dim {}): {} violation(s) in {} trials, \
                 worst eigenvalue {:.6e}",
                self.name,
                self.dim,
                self.violations.len(),
                self.trials,
                self.min_eigenvalue_seen
            )
        }
    }
}

/// Applies a scalar function to a Hermitian matrix through its
/// eigendecomposition.
fn matrix_function<F>(f: &F, m: &CMatrix) -> Result<CMatrix>
where
    F: Fn(f64) -> Result<f64>,
{
    let eig = eig_hermitian(m)?;
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let v = eig.eigenvectors.column(k);
        let fv = f(eig.eigenvalues[k])?;
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += Complex64::from(fv) * v[i] * v[j].conj();
            }
        }
    }
    Ok(out)
}

fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            / Complex64::from(std::f64::consts::SQRT_2)
    })
}

/// Randomized search for operator-monotonicity violations of `f`.
///
/// Each trial draws `A = G^dag G + 0.1 I` and `B = A + H^dag H` with Ginibre
/// `G, H`, so `A <= B` holds by construction and both spectra stay inside
/// `(0, inf)`. A trial counts as a violation when the smallest eigenvalue of
/// `f(B) - f(A)` falls below [`tol::OPERATOR_MONOTONE_EIG_FLOOR`]; violating
/// pairs are recorded in full for reproduction. The search is deterministic
/// in `seed`.
pub fn check_operator_monotone<F>(
    name: &str,
    f: F,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<OperatorMonotoneReport>
where
    F: Fn(f64) -> Result<f64>,
{
    if dim == 0 {
        return Err(Error::dims("matrix dimension must be positive".to_string()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut min_seen = f64::INFINITY;
    let mut violations = Vec::new();
    for trial in 0..trials {
        let g = ginibre(dim, &mut rng);
        let h = ginibre(dim, &mut rng);
        let a = g.adjoint() * &g + CMatrix::identity(dim, dim).scale(0.1);
        let a = (&a + a.adjoint()).scale(0.5);
        let b = &a + h.adjoint() * &h;
        let b = (&b + b.adjoint()).scale(0.5);
        let diff = matrix_function(&f, &b)? - matrix_function(&f, &a)?;
        let diff = (&diff + diff.adjoint()).scale(0.5);
        let min_eig = eig_hermitian(&diff)?.eigenvalues[0];
        min_seen = min_seen.min(min_eig);
        if min_eig < tol::OPERATOR_MONOTONE_EIG_FLOOR {
            violations.push(MonotoneViolation {
                trial,
                min_eigenvalue: min_eig,
                a: MatrixFile::from_matrix(&a, true),
                b: MatrixFile::from_matrix(&b, true),
            });
        }
    }
    Ok(OperatorMonotoneReport {
        name: name.to_string(),
        dim,
        trials,
        seed,
        min_eigenvalue_seen: min_seen,
        violations,
    })
}

/// Evaluates `f` on the pinned counterexample pair `A = I/2 <= B = I`
/// (dimension 2) and returns the smallest eigenvalue of `f(B) - f(A)`.
///
/// For the interferometric function this is exactly
/// `f(1) - f(1/2) = -1/12`: a closed-form witness that it is not operator
/// monotone, independent of any randomized search.
pub fn pinned_counterexample_min_eig<F>(f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let a = CMatrix::identity(2, 2).scale(0.5);
    let b = CMatrix::identity(2, 2);
    let diff = matrix_function(&f, &b)? - matrix_function(&f, &a)?;
    let diff = (&diff + diff.adjoint()).scale(0.5);
    Ok(eig_hermitian(&diff)?.eigenvalues[0])
}

// ---------------------------------------------------------------------------
// Line elements on the Bloch ball
// ---------------------------------------------------------------------------

fn require_open_radius(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfDomain {
            r,
            detail: "chart line elements require 0 < r < 1: the spherical chart is \
                     singular at the origin and the radial weight 1/(1 - r^2) at the \
                     pure-state boundary"
                .to_string(),
        });
    }
    Ok(())
}

fn require_polar_angle(theta: f64) -> Result<()> {
    if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
        return Err(Error::domain(format!(
            "polar angle must lie in [0, pi], got {theta}"
        )));
    }
    Ok(())
}

fn require_finite_displacements(d: &[(&str, f64)]) -> Result<()> {
    for (name, v) in d {
        if !v.is_finite() {
            return Err(Error::domain(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

/// Squared line element of the metric generated by `f` on the Bloch ball,
/// in spherical coordinates:
/// `(1/4) [dr^2/(1-r^2) + (1/f(t(r))) (r^2/(1+r)) (dtheta^2 +
/// sin^2(theta) dphi^2)]` with `t(r) = (1-r)/(1+r)`.
///
/// Purely radial displacements are `f`-independent. Defined for
/// `0 < r < 1`; both endpoints are rejected ([`Error::RadiusOutOfDomain`])
/// because the angular weight of a function with `f(1) = 0` diverges at the
/// center and the radial weight diverges at the surface.
pub fn mc_line_element(
    f: &MCFunction,
    r: f64,
    theta: f64,
    dr: f64,
    dtheta: f64,
    dphi: f64,
) -> Result<f64> {
    require_open_radius(r)?;
    require_polar_angle(theta)?;
    require_finite_displacements(&[("dr", dr), ("dtheta", dtheta), ("dphi", dphi)])?;
    let t = (1.0 - r) / (1.0 + r);
    let fval = f.evaluate(t)?;
    let sin_theta = theta.sin();
    let angular_sq = dtheta * dtheta + sin_theta * sin_theta * dphi * dphi;
    Ok(0.25
        * (dr * dr / (1.0 - r * r)
            + (r * r / (1.0 + r)) / fval * angular_sq))
}

/// Squared line element in the cylinder chart `alpha = arcsin(r)`,
/// `0 < alpha < pi/2`:
/// interferometric `4 ds^2 = dalpha^2 + dOmega^2` (flat product),
/// Bures `4 ds^2 = dalpha^2 + sin^2(alpha) dOmega^2` (round 3-sphere patch).
pub fn cylinder_line_element(
    kind: MetricKind,
    alpha: f64,
    theta: f64,
    dalpha: f64,
    dtheta: f64,
    dphi: f64,
) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha < 0.5 * PI) {
        return Err(Error::domain(format!(
            "cylinder chart requires 0 < alpha < pi/2, got {alpha}"
        )));
    }
    require_polar_angle(theta)?;
    require_finite_displacements(&[
        ("dalpha", dalpha),
        ("dtheta", dtheta),
        ("dphi", dphi),
    ])?;
    let sin_theta = theta.sin();
    let angular_sq = dtheta * dtheta + sin_theta * sin_theta * dphi * dphi;
    let weight = match kind {
        MetricKind::Sjoqvist => 1.0,
        MetricKind::Bures => {
            let s = alpha.sin();
            s * s
        }
    };
    Ok(0.25 * (dalpha * dalpha + weight * angular_sq))
}

// ---------------------------------------------------------------------------
// Volume densities
// ---------------------------------------------------------------------------

/// Normalization constant `Gamma(nu + 1/2) / (2 pi^(3/2) Gamma(nu))` of the
/// radial measure `(1 - r^2)^(nu - 1) sin(theta)` on
/// `[0,1) x [0,pi] x [0,2pi)`.
pub fn zhsl_normalization(nu: f64) -> Result<f64> {
    require_zhsl_exponent(nu)?;
    let log_ratio = statrs::function::gamma::ln_gamma(nu + 0.5)
        - statrs::function::gamma::ln_gamma(nu);
    Ok(log_ratio.exp() / (2.0 * PI.powf(1.5)))
}

/// Normalized probability density over `(r, theta, phi)` of the volume
/// measure induced by `f` on the Bloch ball.
///
/// * Bures: `(1/pi^2) r^2 sin(theta) / sqrt(1 - r^2)`;
/// * interferometric: `(1/(2 pi^2)) sin(theta) / sqrt(1 - r^2)` — constant
///   in `r` up to the universal radial factor, another face of the
///   non-decaying angular resolution;
/// * radial family: `N(nu) (1 - r^2)^(nu - 1) sin(theta)`, uniform in `r`
///   at `nu = 1`.
///
/// Defined for `0 <= r < 1` (the boundary value diverges for the first two
/// and is rejected uniformly) and `theta` in `[0, pi]`.
pub fn volume_density(f: &MCFunction, r: f64, theta: f64) -> Result<f64> {
    if !(r.is_finite() && (0.0..1.0).contains(&r)) {
        return Err(Error::RadiusOutOfDomain {
            r,
            detail: "volume densities are defined on 0 <= r < 1".to_string(),
        });
    }
    require_polar_angle(theta)?;
    let sin_theta = theta.sin();
    Ok(match f {
        MCFunction::Bures => r * r * sin_theta / ((1.0 - r * r).sqrt() * PI * PI),
        MCFunction::Sjoqvist => {
            sin_theta / ((1.0 - r * r).sqrt() * 2.0 * PI * PI)
        }
        MCFunction::Zhsl { nu } => {
            zhsl_normalization(*nu)? * (1.0 - r * r).powf(nu - 1.0) * sin_theta
        }
    })
}

/// Total mass of [`volume_density`] by Gauss-Legendre quadrature: 128 nodes
/// in `alpha` with `r = sin(alpha)` (flattening the boundary singularity),
/// 64 nodes in `theta`, and the exact `2 pi` azimuthal factor. Equals 1 to
/// ~1e-14 for the Bures, interferometric, and half-integer-exponent radial
/// densities.
pub fn volume_integral(f: &MCFunction) -> Result<f64> {
    let (alphas, wa) = gauss_legendre_on(128, 0.0, 0.5 * PI);
    let (thetas, wt) = gauss_legendre_on(64, 0.0, PI);
    let mut radial_angular = 0.0;
    for (&alpha, &w_alpha) in alphas.iter().zip(&wa) {
        let r = alpha.sin();
        let jacobian = alpha.cos();
        let mut theta_sum = 0.0;
        for (&theta, &w_theta) in thetas.iter().zip(&wt) {
            theta_sum += volume_density(f, r, theta)? * w_theta;
        }
        radial_angular += theta_sum * jacobian * w_alpha;
    }
    Ok(radial_angular * 2.0 * PI)
}

// ---------------------------------------------------------------------------
// Geodesic lengths
// ---------------------------------------------------------------------------

/// Endpoint data for a qubit geodesic: two radii and the angle between the
/// Bloch directions (the first point sits at relative angle zero by
/// convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicEndpoints {
    pub r_a: f64,
    pub r_b: f64,
    /// Angular separation of the Bloch directions, in `[0, pi]`.
    pub theta_b: f64,
}

impl GeodesicEndpoints {
    pub fn new(r_a: f64, r_b: f64, theta_b: f64) -> Result<Self> {
        for (name, r) in [("r_a", r_a), ("r_b", r_b)] {
            if !(r.is_finite() && (0.0..=1.0).contains(&r)) {
                return Err(Error::RadiusOutOfDomain {
                    r,
                    detail: format!("geodesic endpoint {name} must lie in [0, 1]"),
                });
            }
        }
        if !(theta_b.is_finite() && (0.0..=PI).contains(&theta_b)) {
            return Err(Error::domain(format!(
                "angular separation must lie in [0, pi], got {theta_b}"
            )));
        }
        Ok(GeodesicEndpoints { r_a, r_b, theta_b })
    }
}

/// Geodesic length between the endpoints for the requested metric.
///
/// * Interferometric: in the flat cylinder chart the distance is the
///   hypotenuse
///   `(1/2) sqrt(theta_b^2 + (arcsin(r_b) - arcsin(r_a))^2)`, assembled
///   with `hypot` so the equal-radius slice `r_a = r_b = 1` returns exactly
///   `theta_b / 2`;
/// * Bures: `sqrt(2 - 2 F)` with the closed-form root-fidelity
///   `F^2 = (1 + r_a r_b cos(theta_b) + sqrt((1-r_a^2)(1-r_b^2))) / 2`.
pub fn geodesic_length(kind: MetricKind, e: &GeodesicEndpoints) -> f64 {
    match kind {
        MetricKind::Sjoqvist => {
            0.5 * f64::hypot(e.theta_b, e.r_b.asin() - e.r_a.asin())
        }
        MetricKind::Bures => {
            let cross = ((1.0 - e.r_a * e.r_a).max(0.0)
                * (1.0 - e.r_b * e.r_b).max(0.0))
            .sqrt();
            let f_sq = 0.5 * (1.0 + e.r_a * e.r_b * e.theta_b.cos() + cross);
            let f = f_sq.max(0.0).sqrt().min(1.0);
            (2.0 - 2.0 * f).max(0.0).sqrt()
        }
    }
}

/// Pure-state chordal length `sin(theta_b / 2)` — half the Euclidean chord
/// between the Bloch directions. Agrees with both geodesic lengths on the
/// pure-state sphere to `O(theta_b^2)` relative.
pub fn fubini_study_length(theta_b: f64) -> f64 {
    (0.5 * theta_b).sin()
}
