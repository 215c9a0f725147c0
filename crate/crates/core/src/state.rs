use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_by;
use crate::weyl::WeylBasis;

/// Normalization convention attached to a [`StateVector`].
///
/// Amplitudes are always held in the orthonormal convention. The tag only
/// decides how [`StateVector::exported`] scales them: delta-normalized
/// amplitudes are the orthonormal ones divided by `sqrt(eps)`, so that
/// `eps * sum |psi_k|^2` is the probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConvention {
    Orthonormal,
    DeltaNormalized,
}

/// Complex amplitudes over a Weyl basis, stored in slot order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: WeylBasis,
    amplitudes: Vec<Complex64>,
    convention: NormConvention,
}

impl StateVector {
    pub fn new(basis: WeylBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            basis,
            amplitudes,
            convention: NormConvention::Orthonormal,
        })
    }

    pub fn zeros(basis: WeylBasis) -> Self {
        Self {
            basis,
            amplitudes: vec![Complex64::default(); basis.dim()],
            convention: NormConvention::Orthonormal,
        }
    }

    /// Unit vector on the basis element carrying `label`.
    pub fn basis_state(basis: WeylBasis, label: i64) -> Result<Self> {
        let mut s = Self::zeros(basis);
        let slot = basis.slot(label)?;
        s.amplitudes[slot] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Builds a state from delta-normalized amplitudes (multiplies by `sqrt(eps)`).
    pub fn from_delta_normalized(basis: WeylBasis, values: &[Complex64]) -> Result<Self> {
        let scale = basis.epsilon().sqrt();
        let amps = values.iter().map(|v| v * scale).collect();
        let mut s = Self::new(basis, amps)?;
        s.convention = NormConvention::DeltaNormalized;
        Ok(s)
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn convention(&self) -> NormConvention {
        self.convention
    }

    /// Re-tags the state. The stored amplitudes are untouched, so converting
    /// back and forth is exact.
    pub fn with_convention(mut self, convention: NormConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Amplitudes in the state's declared convention.
    pub fn exported(&self) -> Vec<Complex64> {
        match self.convention {
            NormConvention::Orthonormal => self.amplitudes.clone(),
            NormConvention::DeltaNormalized => {
                let scale = 1.0 / self.basis.epsilon().sqrt();
                self.amplitudes.iter().map(|a| a * scale).collect()
            }
        }
    }

    pub fn amplitude(&self, label: i64) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.slot(label)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise_sum_by(self.amplitudes.len(), |i| self.amplitudes[i].norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: other.basis.dim(),
            });
        }
        Ok(pairwise_sum_by(self.amplitudes.len(), |i| {
            self.amplitudes[i].conj() * other.amplitudes[i]
        }))
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        let mut out = self.clone();
        out.amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(out)
    }

    /// Largest componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
