use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::PhaseGrid;
use crate::weyl::{DenseOperator, WeylBasis};

/// `H = K(p) + V(x)` sampled on the momentum and coordinate labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitHamiltonian {
    basis: WeylBasis,
    kinetic: Vec<f64>,
    potential: Vec<f64>,
}

impl SplitHamiltonian {
    pub fn new(basis: WeylBasis, kinetic: Vec<f64>, potential: Vec<f64>) -> Result<Self> {
        for len in [kinetic.len(), potential.len()] {
            if len != basis.dim() {
                return Err(Error::DimensionMismatch {
                    expected: basis.dim(),
                    found: len,
                });
            }
        }
        Ok(Self {
            basis,
            kinetic,
            potential,
        })
    }

    /// Samples `K(p_l)` and `V(x_l)` on a phase grid.
    pub fn on_grid(
        grid: &PhaseGrid,
        kinetic: impl Fn(f64) -> f64,
        potential: impl Fn(f64) -> f64,
    ) -> Self {
        Self {
            basis: grid.basis(),
            kinetic: grid.p().iter().map(|&p| kinetic(p)).collect(),
            potential: grid.x().iter().map(|&x| potential(x)).collect(),
        }
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    pub fn kinetic(&self) -> &[f64] {
        &self.kinetic
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// `H~(p_n, x_k) = K(p_n) + V(x_k)`.
    pub fn to_mixed(&self) -> MixedHamiltonian {
        let m = self.basis.dim();
        MixedHamiltonian {
            basis: self.basis,
            samples: DMatrix::from_fn(m, m, |n, k| {
                Complex64::new(self.kinetic[n] + self.potential[k], 0.0)
            }),
        }
    }

    /// `sum_m |u_m> K(p_m) <u_m| + diag(V)` as a matrix in the X basis.
    pub fn dense_operator(&self) -> DenseOperator {
        self.to_mixed().to_operator()
    }
}

/// Phase-space symbol `H~(p_n, x_k)`, rows indexed by the momentum label `n`
/// and columns by the coordinate label `k`, both in slot order.
///
/// The operator it stands for is
/// `<k'|H|k> = sum_n <k'|u_n> H~(p_n, x_k) <u_n|k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedHamiltonian {
    basis: WeylBasis,
    samples: DMatrix<Complex64>,
}

impl MixedHamiltonian {
    pub fn new(basis: WeylBasis, samples: DMatrix<Complex64>) -> Result<Self> {
        let m = basis.dim();
        if samples.nrows() != m || samples.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: samples.nrows().max(samples.ncols()),
            });
        }
        Ok(Self { basis, samples })
    }

    pub fn zero(basis: WeylBasis) -> Self {
        let m = basis.dim();
        Self {
            basis,
            samples: DMatrix::zeros(m, m),
        }
    }

    /// Samples `h(n, k)` over momentum and coordinate labels.
    pub fn from_fn(basis: WeylBasis, h: impl Fn(i64, i64) -> Complex64) -> Self {
        let m = basis.dim();
        Self {
            basis,
            samples: DMatrix::from_fn(m, m, |n, k| h(basis.label(n), basis.label(k))),
        }
    }

    /// The symbol of an operator: `H~_nk = sum_j e^{2 pi i n (j - k)/M} O_jk`.
    pub fn from_operator(op: &DenseOperator) -> Self {
        let basis = op.basis();
        let m = basis.dim();
        let o = op.matrix();
        let samples = DMatrix::from_fn(m, m, |n, k| {
            let ln = basis.label(n);
            let lk = basis.label(k);
            crate::numeric::pairwise_sum_by(m, |j| basis.phase(ln, basis.label(j) - lk) * o[(j, k)])
        });
        Self { basis, samples }
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    pub fn samples(&self) -> &DMatrix<Complex64> {
        &self.samples
    }

    /// `<k'|H|k> = (1/M) sum_n e^{-2 pi i n (k' - k)/M} H~_nk`.
    pub fn to_operator(&self) -> DenseOperator {
        let basis = self.basis;
        let m = basis.dim();
        let inv = 1.0 / m as f64;
        let mat = DMatrix::from_fn(m, m, |r, k| {
            let d = basis.label(r) - basis.label(k);
            crate::numeric::pairwise_sum_by(m, |n| {
                basis.phase(-basis.label(n), d) * self.samples[(n, k)]
            }) * inv
        });
        DenseOperator::new(basis, mat).expect("square")
    }

    /// `max |H - H^dagger|` of the reconstructed operator.
    pub fn hermiticity_residual(&self) -> f64 {
        let op = self.to_operator();
        op.max_abs_diff(&op.adjoint())
    }
}
