//! Thermal spin-1/2 in a static field: closed-form information geometry.
//!
//! For \(H = \tfrac{\hbar}{2}\,\vec\omega\cdot\vec\sigma\) at inverse
//! temperature \(\beta\), the Gibbs state is
//! \(\rho = \tfrac12(\mathbb 1 - \tanh x\,\hat\omega\cdot\vec\sigma)\) with
//! \(x = \beta\hbar\omega/2\), \(\omega = |\vec\omega|\). Taking
//! \((\beta, \omega_z)\) as coordinates (transverse components held fixed)
//! the pulled-back metric has a closed form. With
//! \(P = \tfrac{\hbar^2}{16}\operatorname{sech}^2 x\):
//!
//! * classical (Fisher–Rao) block, shared by both metrics — a rank-one Gram
//!   matrix in the direction \((\omega,\ \beta\omega_z/\omega)\):
//!   \(g_{\beta\beta} = P\omega^2,\quad
//!     g_{\beta\omega_z} = P\beta\omega_z,\quad
//!     g^{\mathrm{cl}}_{\omega_z\omega_z} = P\beta^2\omega_z^2/\omega^2\);
//! * nonclassical \(\omega_z\omega_z\) term from the field-direction
//!   rotation (eigenvector coupling
//!   \(|\langle g|\sigma_z|e\rangle| = \sqrt{\omega_x^2+\omega_y^2}/\omega\),
//!   gap \(\hbar\omega\)):
//!   interferometric \(\tfrac14(\omega_x^2+\omega_y^2)/\omega^4\)
//!   — temperature-independent — and Bures
//!   \(\tanh^2 x \cdot \tfrac14(\omega_x^2+\omega_y^2)/\omega^4\).
//!
//! The contrast is the operational point: as \(\beta \to 0\) the Bures
//! tensor degenerates (the fidelity stops resolving the field direction at
//! high temperature) while the interferometric tensor keeps full rank.
//! [`diagnose_degeneracy`] turns that into an explicit eigenvalue report.
//!
//! `sech^2` is evaluated through the softmax shift
//! \(4e^{-2|x|}/(1+e^{-2|x|})^2\), which never overflows and is accurate for
//! all `x`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::metrics::MetricKind;
use crate::states::DensityOperator;
use crate::tol;

/// Static-field and bath parameters for the thermal spin-1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: f64,
    /// Inverse temperature, strictly positive.
    pub beta: f64,
    /// Planck constant scale, strictly positive (1 in natural units).
    pub hbar: f64,
}

impl FieldParams {
    /// Natural-units constructor (`hbar = 1`).
    pub fn new(omega_x: f64, omega_y: f64, omega_z: f64, beta: f64) -> Result<Self> {
        Self::with_hbar(omega_x, omega_y, omega_z, beta, 1.0)
    }

    pub fn with_hbar(
        omega_x: f64,
        omega_y: f64,
        omega_z: f64,
        beta: f64,
        hbar: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega_x", omega_x),
            ("omega_y", omega_y),
            ("omega_z", omega_z),
        ] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::domain(format!(
                "inverse temperature must be finite and positive, got {beta}"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::domain(format!(
                "hbar must be finite and positive, got {hbar}"
            )));
        }
        Ok(FieldParams {
            omega_x,
            omega_y,
            omega_z,
            beta,
            hbar,
        })
    }

    /// Field magnitude `|omega|`.
    pub fn magnitude(&self) -> f64 {
        (self.omega_x * self.omega_x + self.omega_y * self.omega_y
            + self.omega_z * self.omega_z)
            .sqrt()
    }

    /// The dimensionless thermal argument `x = beta * hbar * |omega| / 2`.
    pub fn thermal_argument(&self) -> f64 {
        0.5 * self.beta * self.hbar * self.magnitude()
    }
}

/// `sech^2(x)` without overflow: `4 e^{-2|x|} / (1 + e^{-2|x|})^2`.
fn sech_sq(x: f64) -> f64 {
    let e = (-2.0 * x.abs()).exp();
    let denom = 1.0 + e;
    4.0 * e / (denom * denom)
}

/// `H = (hbar/2) (omega_x X + omega_y Y + omega_z Z)` as an explicit 2x2.
pub fn spin_qubit_hamiltonian(params: &FieldParams) -> CMatrix {
    let s = 0.5 * params.hbar;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(s * params.omega_z, 0.0),
            Complex64::new(s * params.omega_x, -s * params.omega_y),
            Complex64::new(s * params.omega_x, s * params.omega_y),
            Complex64::new(-s * params.omega_z, 0.0),
        ],
    )
}

/// Gibbs state of the spin-1/2, with a flag for the degenerate-field case.
///
/// Returns `(rho, warned)`: for `|omega| > 0`,
/// `rho = (1 - tanh(x) n.sigma)/2` in closed form; for a vanishing field the
/// Hamiltonian is zero, the Gibbs state is the maximally mixed state at any
/// temperature, and `warned` is `true` to signal that every derived tensor
/// is identically zero rather than merely small.
pub fn spin_qubit_thermal(params: &FieldParams) -> Result<(DensityOperator, bool)> {
    let omega = params.magnitude();
    if omega == 0.0 {
        return Ok((DensityOperator::maximally_mixed(2)?, true));
    }
    let t = params.thermal_argument().tanh() / omega;
    let (nx, ny, nz) = (
        t * params.omega_x,
        t * params.omega_y,
        t * params.omega_z,
    );
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 - nz), 0.0),
            Complex64::new(-0.5 * nx, 0.5 * ny),
            Complex64::new(-0.5 * nx, -0.5 * ny),
            Complex64::new(0.5 * (1.0 + nz), 0.0),
        ],
    );
    Ok((DensityOperator::new(m)?, false))
}

/// Symmetric 2x2 metric tensor in the `(beta, omega_z)` chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor2x2 {
    /// Row-major entries `[[g_bb, g_bz], [g_bz, g_zz]]`; symmetric and
    /// positive semidefinite up to a -1e-12 eigenvalue floor.
    pub g: [[f64; 2]; 2],
    /// Coordinate labels, fixed to `("beta", "omega_z")`.
    pub coords: [&'static str; 2],
    /// The eigenvector-rotation part of `g_zz` (the classical block is the
    /// rest); zero exactly when the field is aligned with z or vanishes.
    pub nonclassical_g22: f64,
}

impl MetricTensor2x2 {
    /// Eigenvalues in ascending order, from the closed symmetric 2x2 form.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.g[0][0];
        let b = self.g[0][1];
        let d = self.g[1][1];
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - disc, mean + disc]
    }

    pub fn determinant(&self) -> f64 {
        self.g[0][0] * self.g[1][1] - self.g[0][1] * self.g[0][1]
    }

    /// Unit eigenvector of the larger eigenvalue — the direction in
    /// `(beta, omega_z)` space along which states are most distinguishable.
    /// Sign convention: first nonzero component positive. For an isotropic
    /// or zero tensor the direction is undefined and `[1, 0]` is returned.
    pub fn principal_direction(&self) -> [f64; 2] {
        let [_, hi] = self.eigenvalues();
        let a = self.g[0][0];
        let b = self.g[0][1];
        let d = self.g[1][1];
        // Two algebraically equivalent eigenvector forms; pick the better
        // conditioned (larger) one.
        let cand1 = [b, hi - a];
        let cand2 = [hi - d, b];
        let n1 = cand1[0] * cand1[0] + cand1[1] * cand1[1];
        let n2 = cand2[0] * cand2[0] + cand2[1] * cand2[1];
        let v = if n1 >= n2 { cand1 } else { cand2 };
        let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
        if norm == 0.0 {
            return [1.0, 0.0];
        }
        let mut u = [v[0] / norm, v[1] / norm];
        let lead = if u[0] != 0.0 { u[0] } else { u[1] };
        if lead < 0.0 {
            u = [-u[0], -u[1]];
        }
        u
    }
}

/// Closed-form metric tensor of the thermal spin-1/2 in the
/// `(beta, omega_z)` chart (see module docs), for the requested metric.
///
/// Returns `(tensor, warned)`; a vanishing field yields the zero tensor with
/// `warned = true` (the Gibbs family is constant there, so the zero tensor
/// is exact, not an error).
pub fn analytic_metric(params: &FieldParams, kind: MetricKind) -> (MetricTensor2x2, bool) {
    let omega = params.magnitude();
    if omega == 0.0 {
        return (
            MetricTensor2x2 {
                g: [[0.0, 0.0], [0.0, 0.0]],
                coords: ["beta", "omega_z"],
                nonclassical_g22: 0.0,
            },
            true,
        );
    }
    let x = params.thermal_argument();
    let pref = params.hbar * params.hbar / 16.0 * sech_sq(x);
    let g_bb = pref * omega * omega;
    let g_bz = pref * params.beta * params.omega_z;
    let g_zz_classical =
        pref * params.beta * params.beta * params.omega_z * params.omega_z / (omega * omega);
    let transverse = params.omega_x * params.omega_x + params.omega_y * params.omega_y;
    let omega4 = omega * omega * omega * omega;
    let nonclassical_g22 = match kind {
        MetricKind::Sjoqvist => 0.25 * transverse / omega4,
        MetricKind::Bures => {
            let th = x.tanh();
            th * th * 0.25 * transverse / omega4
        }
    };
    (
        MetricTensor2x2 {
            g: [[g_bb, g_bz], [g_bz, g_zz_classical + nonclassical_g22]],
            coords: ["beta", "omega_z"],
            nonclassical_g22,
        },
        false,
    )
}

/// Eigenstructure report for a 2x2 metric tensor.
#[derive(Debug, Clone, Copy)]
pub struct DegeneracyReport {
    /// Eigenvalues in ascending order.
    pub eigenvalues: [f64; 2],
    pub determinant: f64,
    /// Direction of largest eigenvalue; see
    /// [`MetricTensor2x2::principal_direction`].
    pub principal_direction: [f64; 2],
    /// `true` when the smaller eigenvalue is at most
    /// [`tol::METRIC_DEGENERACY_REL`] times the larger (zero tensor counts
    /// as degenerate).
    pub degenerate: bool,
}

/// Classifies a metric tensor as full-rank or (numerically) degenerate and
/// reports its eigenstructure.
pub fn diagnose_degeneracy(tensor: &MetricTensor2x2) -> DegeneracyReport {
    let eigenvalues = tensor.eigenvalues();
    let scale = eigenvalues[0].abs().max(eigenvalues[1].abs());
    let degenerate = eigenvalues[0] <= tol::METRIC_DEGENERACY_REL * scale;
    DegeneracyReport {
        eigenvalues,
        determinant: tensor.determinant(),
        principal_direction: tensor.principal_direction(),
        degenerate,
    }
}
