//! Symmetric-matrix primitives: eigendecomposition with a deterministic
//! ordering contract, PSD square roots, Moore–Penrose pseudoinverses, and
//! Loewner-order checks.
//!
//! Every covariance and kernel matrix in this crate flows through
//! [`SymMatrix`], which symmetrizes on construction so downstream spectral
//! code never has to worry about roundoff asymmetry.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Absolute eigenvalue slack for PSD checks. Eigenvalues in `(-PSD_TOL, 0)`
/// are treated as roundoff from a genuinely PSD input and clipped to zero;
/// anything below `-PSD_TOL` is a real negative mode.
pub const PSD_TOL: f64 = 1e-10;

/// Default pseudoinverse cutoff, relative to the largest eigenvalue.
pub const DEFAULT_PINV_TOL: f64 = 1e-12;

/// A real symmetric matrix. The wrapped storage is exactly symmetric:
/// construction replaces the input with `(M + Mᵀ)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    mat: DMatrix<f64>,
}

/// Eigendecomposition of a [`SymMatrix`]: `values` ascending, `vectors`
/// holding matching orthonormal columns.
///
/// The decomposition is deterministic beyond what LAPACK-style routines
/// promise: ties keep the order the backend returned them in (stable sort),
/// and each eigenvector's sign is normalized so that its largest-magnitude
/// entry (lowest index on ties) is positive. Without the sign rule, `Q` and
/// anything built from individual columns of it would be
/// implementation-defined up to per-column flips.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymMatrix {
    /// Wraps a square matrix, symmetrizing it as `(M + Mᵀ)/2`.
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::Dim { expected: 1, got: 0 });
        }
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix {
                context: "SymMatrix::new",
            });
        }
        let sym = (&mat + mat.transpose()) * 0.5;
        Ok(Self { mat: sym })
    }

    /// Builds an `n`×`n` symmetric matrix from row-major entries.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dim {
                expected: n * n,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_row_slice(diag)))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            mat: DMatrix::zeros(n, n),
        }
    }

    /// `s · I`.
    pub fn scaled_identity(n: usize, s: f64) -> Self {
        Self {
            mat: DMatrix::identity(n, n) * s,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    /// Determinant via the eigenvalue product. For the PSD matrices this
    /// crate works with, this is better conditioned than an LU determinant
    /// near singularity (no sign flips from pivoting noise).
    pub fn det(&self) -> f64 {
        self.sym_eig().values.iter().product()
    }

    /// Smallest eigenvalue.
    pub fn min_eig(&self) -> f64 {
        self.sym_eig().values[0]
    }

    /// Full eigendecomposition with ascending values, stable tie order, and
    /// sign-normalized orthonormal eigenvectors. See [`EigenPairs`].
    pub fn sym_eig(&self) -> EigenPairs {
        let eig = self.mat.clone().symmetric_eigen();
        let n = self.dim();

        let mut order: Vec<usize> = (0..n).collect();
        // Stable sort: equal eigenvalues keep the backend's column order, so
        // repeated calls on the same matrix agree column-for-column.
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut vectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            let col = eig.eigenvectors.column(src);
            // Sign normalization: make the largest-magnitude entry positive,
            // breaking magnitude ties toward the lowest index.
            let mut pivot = 0;
            for r in 1..n {
                if col[r].abs() > col[pivot].abs() {
                    pivot = r;
                }
            }
            let flip = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
            vectors.column_mut(dst).copy_from(&(col * flip));
        }

        EigenPairs { values, vectors }
    }

    /// Symmetric PSD square root: `R` with `R·R = M`.
    ///
    /// Eigenvalues in `(-PSD_TOL, 0)` are clipped to zero (covariances arrive
    /// with roundoff); anything lower is rejected.
    pub fn sqrt_psd(&self) -> Result<SymMatrix> {
        let eig = self.sym_eig();
        let min = eig.values[0];
        if min < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(eig.recompose(|v| v.max(0.0).sqrt()))
    }

    /// Moore–Penrose pseudoinverse of a PSD matrix. Eigenvalues at or below
    /// `tol · (largest eigenvalue)` are treated as exact zeros.
    pub fn pinv_psd(&self, tol: f64) -> Result<SymMatrix> {
        let eig = self.sym_eig();
        let min = eig.values[0];
        if min < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let max = eig.values[eig.values.len() - 1].max(0.0);
        let cutoff = tol * max;
        Ok(eig.recompose(|v| if v > cutoff && v > 0.0 { 1.0 / v } else { 0.0 }))
    }

    /// Loewner comparison: `self ⪰ other` up to slack `tol`, i.e. the
    /// smallest eigenvalue of the difference is at least `-tol`.
    pub fn loewner_geq(&self, other: &SymMatrix, tol: f64) -> Result<bool> {
        if self.dim() != other.dim() {
            return Err(Error::Dim {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let diff = SymMatrix {
            mat: &self.mat - &other.mat,
        };
        Ok(diff.min_eig() >= -tol)
    }
}

impl EigenPairs {
    /// Rebuilds `Q·diag(f(β))·Qᵀ` with a function applied to each eigenvalue.
    pub fn recompose(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let mapped = DMatrix::from_diagonal(&self.values.map(f));
        let mat = &self.vectors * mapped * self.vectors.transpose();
        // Symmetrize: Q·D·Qᵀ is symmetric in exact arithmetic but not in floats.
        SymMatrix {
            mat: (&mat + mat.transpose()) * 0.5,
        }
    }
}
