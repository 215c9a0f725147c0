//! Qbit form of the Weyl pair for `M = 2^L`.
//!
//! Writing a label in binary, `n = sum_m n_m 2^(m-1)`, the powers of `V` are
//! tensor products of single-qbit phase gates,
//!
//! `V^n = (x)_m diag(1, e^{2 pi i n 2^(m-1)/M})`,
//!
//! and the powers of `U` are the same tensor products taken in the
//! U-eigenbasis. So `U^n = prod_m U_m^{n_m}` holds with the bit-weight
//! factors `U_m = U^(2^(m-1))`.
//!
//! The per-site Pauli pairs `(sigma_1, sigma_3)` obey the same local algebra
//! (`U_i^2 = V_i^2 = 1`, `V_i U_i = -U_i V_i`, different sites commute) and
//! generate an irreducible set. Their monomials realise bitwise XOR shifts
//! and bit-parity signs, not `U^n` and `V^n`. For `L >= 2` they agree with
//! the cyclic shift only at `n = 0` and `n = 2^(L-1)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{build_clock_v, build_shift_u, fourier_matrix, DenseOperator, WeylBasis};
use crate::error::{Error, Result};

/// A 2x2 single-qbit gate, row-major.
pub type Gate = [[Complex64; 2]; 2];

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub const SIGMA_1: Gate = [[ZERO, ONE], [ONE, ZERO]];
pub const SIGMA_3: Gate = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];
const IDENTITY: Gate = [[ONE, ZERO], [ZERO, ONE]];

/// Qbit decomposition of the Weyl pair on `L` qbits.
#[derive(Debug, Clone, PartialEq)]
pub struct QbitFactorization {
    qbits: usize,
    basis: WeylBasis,
    pauli: Vec<(Gate, Gate)>,
}

/// Builds the qbit factorization for `M = 2^L`.
pub fn qbit_factorize(qbits: usize) -> Result<QbitFactorization> {
    if qbits == 0 || qbits > 20 {
        return Err(Error::InvalidParameter(format!(
            "qbit count must be in 1..=20, got {qbits}"
        )));
    }
    let basis = WeylBasis::zero_based(1 << qbits)?;
    Ok(QbitFactorization {
        qbits,
        basis,
        pauli: vec![(SIGMA_1, SIGMA_3); qbits],
    })
}

fn bit(n: usize, site: usize) -> usize {
    (n >> site) & 1
}

fn gate_mul(a: &Gate, b: &Gate) -> Gate {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn gate_pow(g: &Gate, p: usize) -> Gate {
    (0..p).fold(IDENTITY, |acc, _| gate_mul(&acc, g))
}

impl QbitFactorization {
    pub fn qbits(&self) -> usize {
        self.qbits
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    /// Per-site `(U_i, V_i) = (sigma_1, sigma_3)`; site 0 is the least significant bit.
    pub fn pauli_pairs(&self) -> &[(Gate, Gate)] {
        &self.pauli
    }

    /// `diag(1, e^{2 pi i n 2^site / M})`.
    pub fn phase_gate(&self, n: u64, site: usize) -> Gate {
        let weight = (n as i64).wrapping_mul(1 << site);
        [[ONE, ZERO], [ZERO, self.basis.root_of_unity(weight)]]
    }

    /// Tensor product of one gate per site (site 0 acts on the lowest bit).
    pub fn tensor(&self, gates: &[Gate]) -> DenseOperator {
        assert_eq!(gates.len(), self.qbits);
        let m = self.basis.dim();
        let mat = DMatrix::from_fn(m, m, |r, c| {
            gates
                .iter()
                .enumerate()
                .fold(ONE, |acc, (site, g)| acc * g[bit(r, site)][bit(c, site)])
        });
        DenseOperator::new(self.basis, mat).expect("dimension 2^L")
    }

    /// `V^n` as a tensor product of single-qbit phase gates.
    pub fn reconstruct_v(&self, n: u64) -> DenseOperator {
        let gates: Vec<Gate> = (0..self.qbits).map(|s| self.phase_gate(n, s)).collect();
        self.tensor(&gates)
    }

    /// `U^n`: the same phase-gate product, taken in the U-eigenbasis.
    pub fn reconstruct_u(&self, n: u64) -> DenseOperator {
        let f = fourier_matrix(self.basis);
        f.mul(&self.reconstruct_v(n)).mul(&f.adjoint())
    }

    /// The bit-weight factors `U_m^{n_m}` whose ordered product is `U^n`.
    pub fn shift_factors(&self, n: u64) -> Vec<DenseOperator> {
        let u = build_shift_u(self.basis);
        (0..self.qbits)
            .map(|site| u.pow((bit(n as usize, site) as u64) << site))
            .collect()
    }

    /// The bit-weight factors `V_m^{n_m}` whose ordered product is `V^n`.
    pub fn clock_factors(&self, n: u64) -> Vec<DenseOperator> {
        let v = build_clock_v(self.basis);
        (0..self.qbits)
            .map(|site| v.pow((bit(n as usize, site) as u64) << site))
            .collect()
    }

    /// `(x)_m sigma_1^{n_m}`: flips the bits set in `n`.
    pub fn pauli_monomial_u(&self, n: u64) -> DenseOperator {
        let gates: Vec<Gate> = (0..self.qbits)
            .map(|s| gate_pow(&self.pauli[s].0, bit(n as usize, s)))
            .collect();
        self.tensor(&gates)
    }

    /// `(x)_m sigma_3^{n_m}`: sign `(-1)^{popcount(n & k)}` on `|k>`.
    pub fn pauli_monomial_v(&self, n: u64) -> DenseOperator {
        let gates: Vec<Gate> = (0..self.qbits)
            .map(|s| gate_pow(&self.pauli[s].1, bit(n as usize, s)))
            .collect();
        self.tensor(&gates)
    }

    /// A single-site gate embedded on `site` with identities elsewhere.
    pub fn embed(&self, gate: &Gate, site: usize) -> DenseOperator {
        let gates: Vec<Gate> = (0..self.qbits)
            .map(|s| if s == site { *gate } else { IDENTITY })
            .collect();
        self.tensor(&gates)
    }

    /// Worst deviation of the phase-gate reconstructions from dense `U^n`, `V^n`
    /// over all `n`.
    pub fn max_reconstruction_error(&self) -> f64 {
        let u = build_shift_u(self.basis);
        let v = build_clock_v(self.basis);
        let m = self.basis.dim() as u64;
        let mut un = DenseOperator::identity(self.basis);
        let mut vn = DenseOperator::identity(self.basis);
        let mut worst = 0.0f64;
        for n in 0..m {
            worst = worst
                .max(self.reconstruct_u(n).max_abs_diff(&un))
                .max(self.reconstruct_v(n).max_abs_diff(&vn));
            un = u.mul(&un);
            vn = v.mul(&vn);
        }
        worst
    }
}
