//! Unitary discrete Fourier transforms in label order.
//!
//! `forward` maps `psi_k` to `(1/sqrt M) sum_k e^{-2 pi i m k/M} psi_k` and
//! `inverse` is its adjoint. Labels are taken mod `M`, so a symmetric basis
//! is rotated into zero-based order around the FFT and back afterwards.
//! In Weyl terms `inverse` gives `<u_n|psi>` and `forward` rebuilds the X
//! components from them.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::weyl::{fourier_matrix, WeylBasis};

/// Planned forward and inverse transforms for one basis.
#[derive(Clone)]
pub struct Dft {
    basis: WeylBasis,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for Dft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("basis", &self.basis).finish()
    }
}

impl Dft {
    pub fn new(basis: WeylBasis) -> Self {
        let mut planner = FftPlanner::new();
        let m = basis.dim();
        Self {
            basis,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
            scale: 1.0 / (m as f64).sqrt(),
        }
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    fn offset(&self) -> usize {
        (-self.basis.min_label()) as usize
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) -> Result<()> {
        if data.len() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: data.len(),
            });
        }
        let shift = self.offset();
        data.rotate_left(shift);
        plan.process(data);
        data.rotate_right(shift);
        data.iter_mut().for_each(|z| *z *= self.scale);
        Ok(())
    }

    /// In place `psi_m <- (1/sqrt M) sum_k e^{-2 pi i m k/M} psi_k`.
    pub fn forward(&self, data: &mut [Complex64]) -> Result<()> {
        self.run(&self.forward, data)
    }

    /// In place `psi_m <- (1/sqrt M) sum_k e^{+2 pi i m k/M} psi_k`.
    pub fn inverse(&self, data: &mut [Complex64]) -> Result<()> {
        self.run(&self.inverse, data)
    }

    /// Components `<u_n|psi>`, stored by label `n`.
    pub fn to_u_basis(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        let mut out = psi.amplitudes().to_vec();
        self.inverse(&mut out)?;
        Ok(out)
    }

    /// The X-basis state `sum_n c_n |u_n>`.
    pub fn from_u_basis(&self, coeffs: &[Complex64]) -> Result<StateVector> {
        let mut out = coeffs.to_vec();
        self.forward(&mut out)?;
        StateVector::new(self.basis, out)
    }
}

/// Dense matrix of [`Dft::forward`]; it coincides with the Fourier matrix
/// because `<k|u_n>` is symmetric in `k` and `n`.
pub fn forward_matrix(basis: WeylBasis) -> crate::weyl::DenseOperator {
    fourier_matrix(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(basis: WeylBasis, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..basis.dim())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        StateVector::new(basis, amps).unwrap()
    }

    #[test]
    fn fast_and_dense_transforms_agree() {
        for basis in [
            WeylBasis::zero_based(16).unwrap(),
            WeylBasis::zero_based(7).unwrap(),
            WeylBasis::symmetric(10).unwrap(),
            WeylBasis::symmetric(300).unwrap(),
        ] {
            let psi = random_state(basis, basis.dim() as u64);
            let dft = Dft::new(basis);
            let mut fast = psi.amplitudes().to_vec();
            dft.forward(&mut fast).unwrap();
            let dense = forward_matrix(basis).apply(&psi).unwrap();
            let err = fast
                .iter()
                .zip(dense.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "M = {}: {err}", basis.dim());

            let mut back = fast.clone();
            dft.inverse(&mut back).unwrap();
            let round = StateVector::new(basis, back).unwrap();
            assert!(round.max_abs_diff(&psi) < 1e-12);
        }
    }

    #[test]
    fn u_basis_components_are_overlaps() {
        let basis = WeylBasis::symmetric(4).unwrap();
        let dft = Dft::new(basis);
        let psi = random_state(basis, 3);
        let comps = dft.to_u_basis(&psi).unwrap();
        for (slot, c) in comps.iter().enumerate() {
            let u = crate::weyl::fourier_column(basis, basis.label(slot)).unwrap();
            assert!((u.inner(&psi).unwrap() - c).norm() < 1e-13);
        }
        let rebuilt = dft.from_u_basis(&comps).unwrap();
        assert!(rebuilt.max_abs_diff(&psi) < 1e-13);
    }

    #[test]
    fn rejects_wrong_length() {
        let dft = Dft::new(WeylBasis::zero_based(4).unwrap());
        let mut v = vec![Complex64::default(); 3];
        assert!(dft.forward(&mut v).is_err());
    }
}
