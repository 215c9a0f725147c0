//! Exact evolution by dense diagonalization, used as an oracle for the
//! Trotter products.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `e^{-i H t}` for a Hermitian matrix `H`.
pub fn exact_propagator(h: &DMatrix<Complex64>, t: f64) -> Result<DMatrix<Complex64>> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: h.ncols(),
        });
    }
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let q = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -l * t)),
    );
    let scaled = DMatrix::from_fn(q.nrows(), q.ncols(), |r, c| q[(r, c)] * phases[c]);
    Ok(scaled * q.adjoint())
}

/// `e^{-i H t} psi`.
pub fn exact_evolve(h: &DMatrix<Complex64>, t: f64, psi: &[Complex64]) -> Result<Vec<Complex64>> {
    if psi.len() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: psi.len(),
        });
    }
    let u = exact_propagator(h, t)?;
    let v = u * DVector::from_column_slice(psi);
    Ok(v.iter().copied().collect())
}
