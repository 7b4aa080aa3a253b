//! JSON (de)serialization of states and Hamiltonians.
//!
//! The on-disk format is a flat JSON object holding the real and imaginary
//! parts row-major:
//!
//! ```json
//! {"dim": 2, "re": [[0.5, 0.0], [0.0, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]}
//! ```
//!
//! Density-operator files are validated on load (Hermitian, PSD, unit
//! trace). Hamiltonian files carry an additional `"hermitian": true` marker
//! and are checked for Hermiticity only.
//!
//! Every parse failure is a typed [`Error`](crate::error::Error) — these
//! entry points accept arbitrary untrusted bytes (they are fuzzed) and must
//! never panic or allocate proportionally to a claimed-but-absent payload.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hermiticity_residual, norm_scale, CMatrix};
use crate::states::{validate_density, DensityOperator};
use crate::tol;

/// Largest supported Hilbert-space dimension for serialized matrices.
///
/// Matches the dense-primitive support envelope; also bounds the allocation
/// a hostile `"dim"` field can request.
pub const MAX_DIM: usize = 64;

/// Serialized matrix: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    /// Hilbert-space dimension (matrix is `dim x dim`).
    pub dim: usize,
    /// Real parts, row-major: `re[row][col]`.
    pub re: Vec<Vec<f64>>,
    /// Imaginary parts, row-major: `im[row][col]`.
    pub im: Vec<Vec<f64>>,
    /// Marker distinguishing Hamiltonian files from state files.
    #[serde(default, skip_serializing_if = "is_false")]
    pub hermitian: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl MatrixFile {
    /// Encodes a matrix (no validation; the matrix is assumed already checked).
    pub fn from_matrix(m: &CMatrix, hermitian_marker: bool) -> Self {
        let dim = m.nrows();
        let grab = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..dim)
                .map(|i| (0..dim).map(|j| part(&m[(i, j)])).collect())
                .collect()
        };
        MatrixFile {
            dim,
            re: grab(|z| z.re),
            im: grab(|z| z.im),
            hermitian: hermitian_marker,
        }
    }

    /// Decodes into a dense matrix, checking shape and finiteness.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(Error::Parse {
                detail: format!("dim must be in 1..={MAX_DIM}, got {}", self.dim),
            });
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != self.dim {
                return Err(Error::Parse {
                    detail: format!(
                        "field '{name}' has {} rows, expected {}",
                        rows.len(),
                        self.dim
                    ),
                });
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != self.dim {
                    return Err(Error::Parse {
                        detail: format!(
                            "field '{name}' row {i} has {} entries, expected {}",
                            row.len(),
                            self.dim
                        ),
                    });
                }
                if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Parse {
                        detail: format!("field '{name}' row {i} has non-finite entry {bad}"),
                    });
                }
            }
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            Complex64::new(self.re[i][j], self.im[i][j])
        }))
    }
}

/// Parses and validates a density-operator file.
pub fn parse_state_json(text: &str) -> Result<DensityOperator> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        detail: format!("invalid state JSON: {e}"),
    })?;
    let m = file.to_matrix()?;
    validate_density(&m)?;
    DensityOperator::new(m)
}

/// Parses a Hamiltonian file: same shape as a state file plus
/// `"hermitian": true`; checked for Hermiticity.
pub fn parse_hamiltonian_json(text: &str) -> Result<CMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        detail: format!("invalid Hamiltonian JSON: {e}"),
    })?;
    if !file.hermitian {
        return Err(Error::Parse {
            detail: "Hamiltonian files must set \"hermitian\": true".to_string(),
        });
    }
    let m = file.to_matrix()?;
    let residual = hermiticity_residual(&m);
    let tolerance = tol::HERMITICITY_REL * norm_scale(&m);
    if residual > tolerance {
        return Err(Error::NotHermitian { residual, tolerance });
    }
    Ok(m)
}

/// Serializes a density operator to the state-file JSON format.
pub fn state_to_json(rho: &DensityOperator) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(rho.matrix(), false))
        .expect("matrix serialization cannot fail")
}

/// Serializes a Hermitian matrix to the Hamiltonian JSON format.
pub fn hamiltonian_to_json(h: &CMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(h, true))
        .expect("matrix serialization cannot fail")
}
