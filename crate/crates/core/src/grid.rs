//! The symmetric phase-space grid.
//!
//! For `M = 2K + 1` the spacing is `eps = sqrt(2 pi / M)` and both `x` and `p`
//! run over `l eps` for `-K <= l <= K`. Sharp states `|x_l>`, `|p_l>` are
//! delta-normalized, `<p_m|p_n> = delta_mn / eps`, and overlap as
//! `<p_m|x_n> = e^{-i p_m x_n} / sqrt(2 pi)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dft::Dft;
use crate::error::{Error, Result};
use crate::weyl::{DenseOperator, WeylBasis};

pub use crate::state::{NormConvention, StateVector};

/// Uniform symmetric grid in `x` and `p`.
#[derive(Debug, Clone)]
pub struct PhaseGrid {
    k: usize,
    basis: WeylBasis,
    eps: f64,
    x: Vec<f64>,
    dft: Dft,
}

pub fn make_grid(k: usize) -> Result<PhaseGrid> {
    let basis = WeylBasis::symmetric(k)?;
    let eps = basis.epsilon();
    let x = basis.labels().map(|l| l as f64 * eps).collect();
    Ok(PhaseGrid {
        k,
        basis,
        eps,
        x,
        dft: Dft::new(basis),
    })
}

impl PhaseGrid {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.basis.dim()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    /// Coordinate samples `x_l`, slot order.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Momentum samples `p_l`; the same values as `x`.
    pub fn p(&self) -> &[f64] {
        &self.x
    }

    /// `K eps`, the largest grid coordinate.
    pub fn extent(&self) -> f64 {
        self.k as f64 * self.eps
    }

    /// Slot of `x = 0` and `p = 0`.
    pub fn zero_slot(&self) -> usize {
        self.k
    }

    pub fn dft(&self) -> &Dft {
        &self.dft
    }

    /// `<p_m|x_n> = e^{-i p_m x_n} / sqrt(2 pi)`.
    pub fn mixed_overlap(&self, m: i64, n: i64) -> Result<Complex64> {
        self.basis.slot(m)?;
        self.basis.slot(n)?;
        Ok(self.basis.phase(-m, n) / (2.0 * PI).sqrt())
    }

    /// Momentum components of a coordinate-basis state (orthonormal).
    pub fn to_momentum(&self, psi: &StateVector) -> Result<StateVector> {
        self.check(psi)?;
        let mut out = psi.amplitudes().to_vec();
        self.dft.forward(&mut out)?;
        Ok(StateVector::new(self.basis, out)?.with_convention(psi.convention()))
    }

    /// Coordinate components of a momentum-basis state (orthonormal).
    pub fn to_position(&self, phi: &StateVector) -> Result<StateVector> {
        self.check(phi)?;
        let mut out = phi.amplitudes().to_vec();
        self.dft.inverse(&mut out)?;
        Ok(StateVector::new(self.basis, out)?.with_convention(phi.convention()))
    }

    /// `G_mn = eps <p_m|x_n>`, the unitary matrix behind [`Self::to_momentum`].
    pub fn dft_matrix(&self) -> DenseOperator {
        let m = self.m();
        let mat = nalgebra::DMatrix::from_fn(m, m, |r, c| {
            self.eps * self.basis.phase(-self.basis.label(r), self.basis.label(c))
                / (2.0 * PI).sqrt()
        });
        DenseOperator::new(self.basis, mat).expect("square")
    }

    fn check(&self, psi: &StateVector) -> Result<()> {
        if psi.basis() != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                found: psi.basis().dim(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k300_grid() {
        let g = make_grid(300).unwrap();
        assert_eq!(g.m(), 601);
        assert!((g.eps() - 0.1022475).abs() < 1e-7);
        assert!((g.eps() * g.eps() - 2.0 * PI / 601.0).abs() < 1e-15);
    }

    #[test]
    fn smallest_grid() {
        let g = make_grid(1).unwrap();
        let e = g.eps();
        assert_eq!(g.x(), &[-e, 0.0, e]);
        assert!(make_grid(0).is_err());
    }

    #[test]
    fn extent_formula() {
        for k in [1, 2, 10, 300, 1000] {
            let g = make_grid(k).unwrap();
            let m = g.m() as f64;
            let expected = (m * PI / 2.0).sqrt() - (PI / (2.0 * m)).sqrt();
            let top = *g.x().last().unwrap();
            assert!((top - expected).abs() < 1e-12, "K = {k}");
            assert_eq!(top, g.extent());
        }
    }

    #[test]
    fn grid_is_odd_symmetric() {
        let g = make_grid(17).unwrap();
        let m = g.m();
        for i in 0..m {
            assert_eq!(g.x()[i], -g.x()[m - 1 - i]);
        }
    }

    #[test]
    fn overlap_values() {
        let g = make_grid(300).unwrap();
        let r = 1.0 / (2.0 * PI).sqrt();
        assert!((g.mixed_overlap(0, 7).unwrap() - r).norm() < 1e-15);
        assert!((g.mixed_overlap(-5, 0).unwrap() - r).norm() < 1e-15);
        let expected = Complex64::from_polar(r, -2.0 * PI / 601.0);
        assert!((g.mixed_overlap(1, 1).unwrap() - expected).norm() < 1e-15);
        assert!(g.mixed_overlap(301, 0).is_err());
    }

    #[test]
    fn weighted_completeness() {
        let g = make_grid(6).unwrap();
        let k = g.k() as i64;
        for a in -k..=k {
            for b in -k..=k {
                let mut s = Complex64::default();
                for m in -k..=k {
                    s += g.mixed_overlap(m, a).unwrap().conj()
                        * g.eps()
                        * g.mixed_overlap(m, b).unwrap();
                }
                let expected = if a == b { 1.0 / g.eps() } else { 0.0 };
                assert!((s - expected).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn dft_matrix_is_unitary_and_matches_fast_path() {
        let g = make_grid(20).unwrap();
        let mat = g.dft_matrix();
        assert!(mat.unitarity_residual() < 1e-12);
        let psi = StateVector::basis_state(g.basis(), 3).unwrap();
        let fast = g.to_momentum(&psi).unwrap();
        assert!(mat.apply(&psi).unwrap().max_abs_diff(&fast) < 1e-13);
        let back = g.to_position(&fast).unwrap();
        assert!(back.max_abs_diff(&psi) < 1e-13);
    }
}
