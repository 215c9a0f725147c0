//! Schwinger's finite Weyl pair.
//!
//! `U` cyclically shifts the eigenvectors `|k>` of the observable `X`
//! (`U|k> = |k+1>`), `V` is the clock `V|k> = e^{2 pi i k/M} |k>`, and the two
//! satisfy `UV = VU e^{-2 pi i/M}`. The phase of the U-eigenvectors is fixed by
//! `<k|u_n> = e^{-2 pi i n k/M} / sqrt(M)`, which makes `X` and `V` share
//! eigenvectors. All operators here are matrices in the `|k>` basis, in slot
//! order of the [`WeylBasis`].

mod decompose;
mod qbit;

pub use decompose::{weyl_decompose, weyl_reconstruct, Ordering, WeylCoefficients};
pub use qbit::{qbit_factorize, QbitFactorization, SIGMA_1, SIGMA_3};

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_by;
use crate::state::StateVector;

/// How basis elements are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labeling {
    /// Labels `0..M-1`.
    ZeroBased,
    /// Labels `-K..=K` with `M = 2K + 1`.
    Symmetric,
}

/// Dimension and labeling of a finite Weyl representation.
///
/// Slots `0..M` are storage positions; the label of slot `j` is `j` for
/// [`Labeling::ZeroBased`] and `j - K` for [`Labeling::Symmetric`]. Labels are
/// integers mod `M`, so both labelings describe the same operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeylBasis {
    dim: usize,
    labeling: Labeling,
}

impl WeylBasis {
    pub fn zero_based(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBasis(format!("dimension {dim} < 2")));
        }
        Ok(Self {
            dim,
            labeling: Labeling::ZeroBased,
        })
    }

    /// Symmetric basis with `M = 2K + 1`.
    pub fn symmetric(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidBasis(
                "symmetric labeling needs K >= 1".into(),
            ));
        }
        Ok(Self {
            dim: 2 * k + 1,
            labeling: Labeling::Symmetric,
        })
    }

    pub fn new(dim: usize, labeling: Labeling) -> Result<Self> {
        match labeling {
            Labeling::ZeroBased => Self::zero_based(dim),
            Labeling::Symmetric => {
                if dim.is_multiple_of(2) {
                    return Err(Error::InvalidBasis(format!(
                        "symmetric labeling needs odd M, got {dim}"
                    )));
                }
                Self::symmetric(dim / 2)
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    /// Label of slot 0 (`0` or `-K`).
    pub fn min_label(&self) -> i64 {
        match self.labeling {
            Labeling::ZeroBased => 0,
            Labeling::Symmetric => -((self.dim / 2) as i64),
        }
    }

    pub fn max_label(&self) -> i64 {
        self.min_label() + self.dim as i64 - 1
    }

    pub fn labels(&self) -> RangeInclusive<i64> {
        self.min_label()..=self.max_label()
    }

    pub fn label(&self, slot: usize) -> i64 {
        self.min_label() + slot as i64
    }

    pub fn slot(&self, label: i64) -> Result<usize> {
        if !self.labels().contains(&label) {
            return Err(Error::IndexOutOfRange {
                index: label,
                min: self.min_label(),
                max: self.max_label(),
            });
        }
        Ok((label - self.min_label()) as usize)
    }

    /// Slot holding the label congruent to `label` mod `M`.
    pub fn slot_mod(&self, label: i64) -> usize {
        (label - self.min_label()).rem_euclid(self.dim as i64) as usize
    }

    /// `e^{2 pi i p / M}`, with `p` reduced mod `M` before the exponential.
    pub fn root_of_unity(&self, p: i64) -> Complex64 {
        let m = self.dim as i64;
        let r = p.rem_euclid(m);
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64)
    }

    /// `e^{2 pi i a b / M}` for two labels, reduced without overflow.
    pub fn phase(&self, a: i64, b: i64) -> Complex64 {
        let m = self.dim as i128;
        let r = ((a as i128) * (b as i128)).rem_euclid(m) as i64;
        self.root_of_unity(r)
    }

    /// Grid spacing `eps = sqrt(2 pi / M)` of the continuum approximation.
    pub fn epsilon(&self) -> f64 {
        (2.0 * PI / self.dim as f64).sqrt()
    }
}

/// `<k|u_n>` for labels `k`, `n`.
pub fn overlap_x_u(basis: &WeylBasis, k: i64, n: i64) -> Complex64 {
    basis.phase(-n, k) / (basis.dim() as f64).sqrt()
}

/// An `M x M` complex matrix in the X-eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    basis: WeylBasis,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(basis: WeylBasis, matrix: DMatrix<Complex64>) -> Result<Self> {
        let m = basis.dim();
        if matrix.nrows() != m || matrix.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: if matrix.nrows() != m {
                    matrix.nrows()
                } else {
                    matrix.ncols()
                },
            });
        }
        Ok(Self { basis, matrix })
    }

    pub fn identity(basis: WeylBasis) -> Self {
        let m = basis.dim();
        Self {
            basis,
            matrix: DMatrix::identity(m, m),
        }
    }

    pub fn zeros(basis: WeylBasis) -> Self {
        let m = basis.dim();
        Self {
            basis,
            matrix: DMatrix::zeros(m, m),
        }
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Entry `<r|O|c>` by labels.
    pub fn entry(&self, row: i64, col: i64) -> Result<Complex64> {
        Ok(self.matrix[(self.basis.slot(row)?, self.basis.slot(col)?)])
    }

    /// Matrix product. Zero entries of `other` are skipped, so products of
    /// shifts and clocks stay `O(M^2)`.
    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        let m = self.basis.dim();
        let mut out = DMatrix::<Complex64>::zeros(m, m);
        let zero = Complex64::default();
        for j in 0..m {
            for k in 0..m {
                let b = other.matrix[(k, j)];
                if b == zero {
                    continue;
                }
                for i in 0..m {
                    let a = self.matrix[(i, k)];
                    if a != zero {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        DenseOperator {
            basis: self.basis,
            matrix: out,
        }
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u64) -> DenseOperator {
        let mut result = DenseOperator::identity(self.basis);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            basis: self.basis,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> DenseOperator {
        DenseOperator {
            basis: self.basis,
            matrix: self.matrix.map(|z| z * c),
        }
    }

    pub fn sub(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator {
            basis: self.basis,
            matrix: &self.matrix - &other.matrix,
        }
    }

    /// Max-entry norm.
    pub fn max_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |O^dagger O - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let m = self.basis.dim();
        prod.iter()
            .enumerate()
            .map(|(idx, z)| {
                let (i, j) = (idx % m, idx / m);
                let id = if i == j { 1.0 } else { 0.0 };
                (z - Complex64::new(id, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.basis() != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: psi.basis().dim(),
            });
        }
        let m = self.basis.dim();
        let a = psi.amplitudes();
        let out = (0..m)
            .map(|i| pairwise_sum_by(m, |j| self.matrix[(i, j)] * a[j]))
            .collect();
        StateVector::new(self.basis, out)
    }
}

/// The cyclic shift `U|k> = |k+1>`.
pub fn build_shift_u(basis: WeylBasis) -> DenseOperator {
    let m = basis.dim();
    let mut mat = DMatrix::<Complex64>::zeros(m, m);
    for col in 0..m {
        mat[((col + 1) % m, col)] = Complex64::new(1.0, 0.0);
    }
    DenseOperator { basis, matrix: mat }
}

/// The clock `V|k> = e^{2 pi i k/M}|k>`.
pub fn build_clock_v(basis: WeylBasis) -> DenseOperator {
    let m = basis.dim();
    let mut mat = DMatrix::<Complex64>::zeros(m, m);
    for slot in 0..m {
        mat[(slot, slot)] = basis.root_of_unity(basis.label(slot));
    }
    DenseOperator { basis, matrix: mat }
}

/// The U-eigenvector `|u_n>` with eigenvalue `e^{2 pi i n/M}`, in the X basis.
pub fn fourier_column(basis: WeylBasis, n: i64) -> Result<StateVector> {
    basis.slot(n)?;
    let amps = (0..basis.dim())
        .map(|slot| overlap_x_u(&basis, basis.label(slot), n))
        .collect();
    StateVector::new(basis, amps)
}

/// Matrix whose column `n` is `|u_n>`, i.e. entries `<k|u_n>`.
pub fn fourier_matrix(basis: WeylBasis) -> DenseOperator {
    let m = basis.dim();
    let mat = DMatrix::from_fn(m, m, |r, c| {
        overlap_x_u(&basis, basis.label(r), basis.label(c))
    });
    DenseOperator { basis, matrix: mat }
}

/// `|<a|b>|^2 / (<a|a><b|b>)`.
pub fn transition_probability(a: &StateVector, b: &StateVector) -> Result<f64> {
    let na = a.norm_sqr();
    let nb = b.norm_sqr();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    let ab = a.inner(b)?;
    Ok((ab.norm_sqr() / (na * nb)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_for_two_states_is_sigma_one() {
        let u = build_shift_u(WeylBasis::zero_based(2).unwrap());
        assert_eq!(u.matrix()[(0, 0)], c(0.0, 0.0));
        assert_eq!(u.matrix()[(0, 1)], c(1.0, 0.0));
        assert_eq!(u.matrix()[(1, 0)], c(1.0, 0.0));
        assert_eq!(u.matrix()[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn shift_moves_e0_to_e1() {
        let basis = WeylBasis::zero_based(3).unwrap();
        let e0 = StateVector::basis_state(basis, 0).unwrap();
        let out = build_shift_u(basis).apply(&e0).unwrap();
        assert_eq!(out, StateVector::basis_state(basis, 1).unwrap());
    }

    #[test]
    fn shift_wraps_symmetric_labels() {
        let basis = WeylBasis::symmetric(2).unwrap();
        let top = StateVector::basis_state(basis, 2).unwrap();
        let out = build_shift_u(basis).apply(&top).unwrap();
        assert_eq!(out, StateVector::basis_state(basis, -2).unwrap());
    }

    #[test]
    fn fifth_power_of_shift_is_identity() {
        let basis = WeylBasis::zero_based(5).unwrap();
        let u5 = build_shift_u(basis).pow(5);
        assert!(u5.max_abs_diff(&DenseOperator::identity(basis)) < 1e-14);
    }

    #[test]
    fn clock_for_two_states_is_sigma_three() {
        let v = build_clock_v(WeylBasis::zero_based(2).unwrap());
        assert!((v.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((v.matrix()[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(v.matrix()[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn clock_entry_for_four_states() {
        let v = build_clock_v(WeylBasis::zero_based(4).unwrap());
        assert!((v.entry(1, 1).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn weyl_commutation_relation() {
        for m in [2usize, 3, 4, 7, 12] {
            for basis in [
                WeylBasis::zero_based(m).unwrap(),
                WeylBasis::new(2 * m + 1, Labeling::Symmetric).unwrap(),
            ] {
                let u = build_shift_u(basis);
                let v = build_clock_v(basis);
                let lhs = u.mul(&v);
                let rhs = v.mul(&u).scale(basis.root_of_unity(-1));
                assert!(lhs.max_abs_diff(&rhs) < 1e-13, "M = {}", basis.dim());
            }
        }
    }

    #[test]
    fn fourier_column_two_states() {
        let u0 = fourier_column(WeylBasis::zero_based(2).unwrap(), 0).unwrap();
        let s = 1.0 / 2f64.sqrt();
        for a in u0.amplitudes() {
            assert!((a - c(s, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn fourier_column_component_four_states() {
        let u1 = fourier_column(WeylBasis::zero_based(4).unwrap(), 1).unwrap();
        assert!((u1.amplitude(1).unwrap() - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn fourier_columns_are_shift_eigenvectors() {
        for basis in [
            WeylBasis::zero_based(6).unwrap(),
            WeylBasis::symmetric(4).unwrap(),
        ] {
            let u = build_shift_u(basis);
            for n in basis.labels() {
                let col = fourier_column(basis, n).unwrap();
                let moved = u.apply(&col).unwrap();
                let lambda = basis.root_of_unity(n);
                let resid = moved
                    .amplitudes()
                    .iter()
                    .zip(col.amplitudes())
                    .map(|(a, b)| (a - lambda * b).norm())
                    .fold(0.0, f64::max);
                assert!(resid < 1e-13);
                let mag = 1.0 / (basis.dim() as f64).sqrt();
                assert!(col
                    .amplitudes()
                    .iter()
                    .all(|a| (a.norm() - mag).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn fourier_column_rejects_bad_index() {
        let basis = WeylBasis::symmetric(3).unwrap();
        assert!(matches!(
            fourier_column(basis, 4),
            Err(Error::IndexOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn basis_guards() {
        assert!(WeylBasis::zero_based(1).is_err());
        assert!(WeylBasis::symmetric(0).is_err());
        assert!(WeylBasis::new(6, Labeling::Symmetric).is_err());
    }

    #[test]
    fn transition_probability_cases() {
        let basis = WeylBasis::zero_based(7).unwrap();
        let a = fourier_column(basis, 2).unwrap();
        assert!((transition_probability(&a, &a).unwrap() - 1.0).abs() < 1e-14);
        let e1 = StateVector::basis_state(basis, 1).unwrap();
        let e2 = StateVector::basis_state(basis, 2).unwrap();
        assert_eq!(transition_probability(&e1, &e2).unwrap(), 0.0);
        assert!((transition_probability(&e1, &a).unwrap() - 1.0 / 7.0).abs() < 1e-14);
        assert_eq!(
            transition_probability(&StateVector::zeros(basis), &a),
            Err(Error::ZeroVector)
        );
    }
}
